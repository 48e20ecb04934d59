#include "doctest.h"

#include <chrono>

#include "convgain/imputer/presets.hpp"
#include "convgain/nn/adam.hpp"
#include "convgain/nn/grad_check.hpp"
#include "checks.hpp"

using namespace convgain;
using namespace convgain::nn;
using testing::naive_conv;
using testing::naive_pool;
using testing::random_tensor;
using testing::separated_tensor;

TEST_CASE("conv2d forward matches the direct-loop oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(3));
    const Index h = 1 + static_cast<Index>(rng.below(7)), w = 1 + static_cast<Index>(rng.below(9));
    const Index cin = 1 + static_cast<Index>(rng.below(3)), cout = 1 + static_cast<Index>(rng.below(4));
    const Index kh = rng.bernoulli(0.5) ? 3 : 1, kw = rng.bernoulli(0.5) ? 3 : 5;
    const auto x = random_tensor({n, h, w, cin}, rng);
    const auto f = random_tensor({kh, kw, cin, cout}, rng);
    const auto b = random_tensor({cout}, rng);
    const auto y = conv2d_forward(x, f, b);
    const auto ref = naive_conv(x, f, b);
    REQUIRE(y.shape() == ref.shape());
    CHECK((y.data() - ref.data()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("conv2d rejects even filters") {
  Rng rng(1);
  CHECK_THROWS_AS(conv2d_forward(random_tensor({1, 4, 4, 1}, rng), random_tensor({2, 2, 1, 1}, rng),
                                 random_tensor({1}, rng)),
                  ValidationError);
}

TEST_CASE("ceil-mode pooling: shapes, values, first-index ties") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Index h = 1 + static_cast<Index>(rng.below(7)), w = 1 + static_cast<Index>(rng.below(7));
    const auto x = random_tensor({2, h, w, 3}, rng);
    const auto out = maxpool2_forward(x);
    const auto ref = naive_pool(x);
    REQUIRE(out.output.shape() == ref.shape());
    CHECK(out.output.data() == ref.data());
  }
  SUBCASE("7x9 gives 4x5") {
    const auto out = maxpool2_forward(TensorD({1, 7, 9, 1}));
    CHECK(out.output.shape() == Shape{1, 4, 5, 1});
  }
  SUBCASE("a tie routes the gradient to the first element in row-major window order") {
    TensorD x({1, 2, 2, 1}, 1.0);
    const auto out = maxpool2_forward(x);
    REQUIRE(out.argmax.size() == 1);
    CHECK(out.argmax[0] == 0);
    const auto g = maxpool2_backward(x.shape(), out.argmax, TensorD({1, 1, 1, 1}, 2.0));
    CHECK(g[0] == 2.0);
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 0.0);
    CHECK(g[3] == 0.0);
  }
}

TEST_CASE("dense forward is x W + b") {
  Rng rng(3);
  const auto x = random_tensor({4, 5}, rng);
  const auto w = random_tensor({5, 3}, rng);
  const auto b = random_tensor({3}, rng);
  const auto y = dense_forward(x, w, b);
  for (Index i = 0; i < 4; ++i)
    for (Index o = 0; o < 3; ++o) {
      double acc = b[o];
      for (Index k = 0; k < 5; ++k) acc += x.at(i, k) * w.at(k, o);
      CHECK(y.at(i, o) == doctest::Approx(acc).epsilon(1e-14));
    }
}

TEST_CASE("activations") {
  TensorD x({4});
  x[0] = -2.0;
  x[1] = 0.0;
  x[2] = 3.0;
  x[3] = -800.0;
  const auto r = activation(x, Activation::relu);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 0.0);
  CHECK(r[2] == 3.0);
  SUBCASE("relu derivative at 0 is 0") {
    const auto g = activation_backward(x, Activation::relu, TensorD({4}, 1.0));
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 1.0);
  }
  SUBCASE("sigmoid stays strictly inside (0, 1)") {
    TensorD big({2});
    big[0] = 800.0;
    big[1] = -800.0;
    const auto s = activation(big, Activation::sigmoid);
    CHECK(s[0] < 1.0);
    CHECK(s[1] > 0.0);
    CHECK(activation(x, Activation::sigmoid)[1] == 0.5);
  }
}

TEST_CASE("layer gradients agree with central differences over 120 random configurations") {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const auto result = testing::layer_grad_check(seed);
    INFO("seed " << seed << " kind " << to_string(testing::kLayerKinds[seed % 6]));
    CHECK(result.max_relative_error < 1e-4);
    worst = std::max(worst, result.max_relative_error);
  }
  MESSAGE("worst relative error " << worst);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(60));
}

TEST_CASE("full conv-gain generator and discriminator gradients") {
  using imputer::Preset;
  for (Preset preset : {Preset::conv_gain, Preset::conv_gain_no_coords, Preset::gain}) {
    Rng rng(2024);
    auto nets = imputer::build_networks(preset, imputer::default_geometry(preset), rng);
    for (Network* net : {&nets.generator, &nets.discriminator}) {
      const auto result = testing::network_grad_check(*net, rng, 150);
      INFO(imputer::to_string(preset) << " analytic " << result.worst_analytic << " numeric "
                                       << result.worst_numeric);
      CHECK(result.entries_checked == 300);
      CHECK(result.max_relative_error < 1e-4);
    }
  }
}

TEST_CASE("adam: first step moves each parameter by about lr against its gradient") {
  TensorD p({3});
  p[0] = 1.0;
  p[1] = -2.0;
  p[2] = 0.5;
  p.grad() << 0.3, -4.0, 0.0;
  AdamState state(AdamConfig{});
  TensorD* params[] = {&p};
  adam_step(params, state);
  // m_hat = g, v_hat = g^2 after one step: update = lr * g / (|g| + eps).
  CHECK(p[0] == doctest::Approx(1.0 - 1e-3 * 0.3 / (0.3 + 1e-8)).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(-2.0 + 1e-3 * 4.0 / (4.0 + 1e-8)).epsilon(1e-12));
  CHECK(p[2] == 0.5);
  CHECK(state.step_count() == 1);
}

TEST_CASE("adam minimises a quadratic") {
  TensorD p({2});
  p[0] = 3.0;
  p[1] = -1.0;
  AdamConfig cfg;
  cfg.learning_rate = 0.05;
  AdamState state(cfg);
  TensorD* params[] = {&p};
  for (int i = 0; i < 2000; ++i) {
    p.grad() = 2.0 * (p.data() - Eigen::Vector2d(1.0, 2.0));
    adam_step(params, state);
  }
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(p[1] == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("adam refuses a non-finite gradient without touching parameters") {
  TensorD p({1}, 1.0);
  p.grad()[0] = std::numeric_limits<double>::quiet_NaN();
  AdamState state(AdamConfig{});
  TensorD* params[] = {&p};
  CHECK_THROWS_AS(adam_step(params, state), TrainingDiverged);
  CHECK(p[0] == 1.0);
  CHECK(state.step_count() == 0);
}

TEST_CASE("network initialisation is seed-deterministic and Glorot-bounded") {
  const auto layers = std::vector<LayerSpec>{LayerSpec::dense(20), LayerSpec::relu(), LayerSpec::dense(7)};
  Rng a(42), b(42);
  Network n1({10}, layers, a), n2({10}, layers, b);
  const auto p1 = n1.parameters();
  const auto p2 = n2.parameters();
  REQUIRE(p1.size() == 4);
  for (std::size_t i = 0; i < p1.size(); ++i) CHECK(p1[i]->data() == p2[i]->data());
  CHECK(p1[0]->data().cwiseAbs().maxCoeff() <= std::sqrt(6.0 / 30.0));
  CHECK(p1[1]->data().isZero());
  CHECK(n1.parameter_count() == 10 * 20 + 20 + 20 * 7 + 7);
}

TEST_CASE("network rejects inputs of the wrong shape and backward before forward") {
  Rng rng(1);
  Network net({4}, {LayerSpec::dense(2)}, rng);
  CHECK_THROWS_AS(net.forward(TensorD({1, 5})), ValidationError);
  CHECK_THROWS_AS(net.backward(TensorD({1, 2})), ValidationError);
}

TEST_CASE("conv2d hand cases") {
  SUBCASE("delta filter is the identity") {
    Rng rng(2);
    const auto x = random_tensor({1, 4, 5, 1}, rng);
    TensorD f({3, 3, 1, 1});
    f.at(1, 1, 0, 0) = 1.0;
    CHECK(conv2d_forward(x, f, TensorD({1})).data() == x.data());
  }
  SUBCASE("all-ones 3x3 input and filter: 9 centre, 6 edges, 4 corners") {
    const auto y = conv2d_forward(TensorD({1, 3, 3, 1}, 1.0), TensorD({3, 3, 1, 1}, 1.0), TensorD({1}));
    CHECK(y.at(0, 1, 1, 0) == 9.0);
    for (auto [i, j] : {std::pair{0, 1}, {1, 0}, {1, 2}, {2, 1}}) CHECK(y.at(0, i, j, 0) == 6.0);
    for (auto [i, j] : {std::pair{0, 0}, {0, 2}, {2, 0}, {2, 2}}) CHECK(y.at(0, i, j, 0) == 4.0);
  }
  SUBCASE("32 filters over 6x125x3 keep the spatial extent") {
    Rng rng(4);
    const auto y = conv2d_forward(random_tensor({1, 6, 125, 3}, rng), random_tensor({3, 3, 3, 32}, rng),
                                  TensorD({32}));
    CHECK(y.shape() == Shape{1, 6, 125, 32});
  }
}

TEST_CASE("pooling hand cases") {
  TensorD x({1, 2, 2, 1});
  x[0] = 1.0;
  x[1] = 2.0;
  x[2] = 3.0;
  x[3] = 4.0;
  const auto out = maxpool2_forward(x);
  CHECK(out.output.size() == 1);
  CHECK(out.output[0] == 4.0);
  CHECK(maxpool2_forward(TensorD({1, 6, 125, 32})).output.shape() == Shape{1, 3, 63, 32});
  CHECK(maxpool2_forward(TensorD({1, 3, 63, 64})).output.shape() == Shape{1, 2, 32, 64});
}

TEST_CASE("dense hand cases") {
  Rng rng(8);
  SUBCASE("zero weights give the bias") {
    const auto b = random_tensor({1024}, rng);
    const auto y = dense_forward(random_tensor({2, 4096}, rng), TensorD({4096, 1024}), b);
    CHECK(y.shape() == Shape{2, 1024});
    for (Index o = 0; o < 1024; ++o) CHECK(y.at(1, o) == b[o]);
    CHECK(dense_forward(TensorD({1, 1024}), TensorD({1024, 375}), TensorD({375})).shape() ==
          Shape{1, 375});
  }
  SUBCASE("weight gradient is the outer product of input and upstream gradient") {
    const auto x = random_tensor({1, 4}, rng);
    const auto w = random_tensor({4, 3}, rng);
    const auto up = random_tensor({1, 3}, rng);
    const auto g = dense_backward(x, w, up);
    for (Index i = 0; i < 4; ++i)
      for (Index o = 0; o < 3; ++o) CHECK(g.weights.at(i, o) == doctest::Approx(x[i] * up[o]).epsilon(1e-14));
    for (Index o = 0; o < 3; ++o) CHECK(g.bias[o] == up[o]);
  }
}

TEST_CASE("activation hand values") {
  TensorD x({3});
  x[0] = -1.0;
  x[1] = 2.0;
  x[2] = std::log(3.0);
  const auto r = activation(x, Activation::relu);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 2.0);
  const auto g = activation_backward(x, Activation::relu, TensorD({3}, 1.0));
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 1.0);
  CHECK(activation(x, Activation::sigmoid)[2] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("grad check on simple networks") {
  SUBCASE("single dense layer with squared loss") {
    Rng rng(12);
    Network net({6}, {LayerSpec::dense(4)}, rng);
    for (auto* p : net.parameters()) p->data() = random_tensor(p->shape(), rng).data();
    const LossFunction loss = [](const TensorD& y, TensorD* grad) {
      if (grad) *grad = y;
      return 0.5 * y.data().squaredNorm();
    };
    CHECK(grad_check(net, random_tensor({3, 6}, rng), loss).max_relative_error < 1e-6);
  }
  SUBCASE("all-zero network under a constant loss") {
    Rng rng(1);
    Network net({5}, {LayerSpec::dense(3), LayerSpec::relu(), LayerSpec::dense(2)}, rng);
    for (auto* p : net.parameters()) p->data().setZero();
    const LossFunction loss = [](const TensorD& y, TensorD* grad) {
      if (grad) *grad = TensorD(y.shape());
      return 1.0;
    };
    const auto result = grad_check(net, random_tensor({2, 5}, rng), loss);
    CHECK(result.max_relative_error == 0.0);
  }
}

TEST_CASE("adam hand cases") {
  SUBCASE("zero gradient leaves parameters unchanged") {
    TensorD p({2}, 0.7);
    AdamState state(AdamConfig{});
    TensorD* params[] = {&p};
    p.grad().setZero();
    adam_step(params, state);
    CHECK(p[0] == 0.7);
    CHECK(p[1] == 0.7);
  }
  SUBCASE("two identical gradients move the parameter monotonically against the sign") {
    for (double g : {0.5, -3.0}) {
      TensorD p({1}, 1.0);
      AdamState state(AdamConfig{});
      TensorD* params[] = {&p};
      double last = p[0];
      for (int step = 0; step < 2; ++step) {
        p.grad()[0] = g;
        adam_step(params, state);
        if (g > 0) CHECK(p[0] < last);
        else CHECK(p[0] > last);
        last = p[0];
      }
    }
  }
}
