#include <doctest.h>

#include <cmath>

#include "convgain/baselines/baselines.hpp"
#include "convgain/eval/metrics.hpp"
#include "support.hpp"

using namespace convgain;
using namespace convgain::baselines;
using Eigen::MatrixXd;

namespace {

MatrixXd random_mask(Eigen::Index r, Eigen::Index c, double rate, Rng& rng) {
  MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = rng.bernoulli(rate) ? 0.0 : 1.0;
  m(0, 0) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("mean imputation") {
  SUBCASE("column of observed 1 and 3 fills 2") {
    MatrixXd x(3, 1), m(3, 1);
    x << 1, 3, NAN;
    m << 1, 1, 0;
    CHECK(mean_impute(x, m)(2, 0) == 2.0);
  }
  SUBCASE("no missing entries leaves the input unchanged") {
    const MatrixXd x = MatrixXd::Random(4, 3);
    CHECK(mean_impute(x, MatrixXd::Ones(4, 3)) == x);
  }
  SUBCASE("a fully missing column takes the global observed mean") {
    MatrixXd x(3, 2), m(3, 2);
    x << 0.5, NAN, 0.7, NAN, 0.9, NAN;
    m << 1, 0, 1, 0, 1, 0;
    const auto out = mean_impute(x, m);
    for (int t = 0; t < 3; ++t) CHECK(out(t, 1) == doctest::Approx(0.7).epsilon(1e-15));
  }
  SUBCASE("works for float matrices too") {
    Eigen::MatrixXf x(2, 1), m(2, 1);
    x << 2.0f, NAN;
    m << 1, 0;
    CHECK(mean_impute(x, m)(1, 0) == 2.0f);
  }
  SUBCASE("all missing is an error") {
    CHECK_THROWS_AS(mean_impute(MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 2)), ValidationError);
  }
}

TEST_CASE("pca imputation hand cases") {
  PcaConfig cfg;
  SUBCASE("no missing entries: output is the input after zero iterations") {
    const MatrixXd x = MatrixXd::Random(5, 4);
    const auto r = pca_impute(x, MatrixXd::Ones(5, 4), cfg);
    CHECK(r.completed == x);
    CHECK(r.iterations == 0);
  }
  SUBCASE("constant matrix stays constant") {
    Rng rng(2);
    const MatrixXd x = MatrixXd::Constant(6, 5, 1.25);
    const auto m = random_mask(6, 5, 0.4, rng);
    const auto r = pca_impute(x, m, cfg);
    CHECK((r.completed.array() == 1.25).all());
  }
  SUBCASE("rank-1 5x8 recovers a single missing entry") {
    // Rank one after column centring requires a non-degenerate u; with r = 1
    // the centred iteration converges to the exact completion.
    Eigen::VectorXd u(5), v(8);
    u << 1.0, 2.0, 0.5, 1.5, 3.0;
    v << 0.2, 1.0, 0.7, 2.0, 1.3, 0.4, 0.9, 1.1;
    const MatrixXd x = u * v.transpose();
    MatrixXd m = MatrixXd::Ones(5, 8);
    m(2, 3) = 0.0;
    cfg.rank = 1;
    cfg.tolerance = 1e-13;
    cfg.max_iterations = 20000;
    const auto r = pca_impute(x, m, cfg);
    CHECK(r.converged);
    CHECK(std::abs(r.completed(2, 3) - x(2, 3)) < 1e-6);
  }
  SUBCASE("rank above min(n_t, n_s) is rejected") {
    cfg.rank = 6;
    MatrixXd m = MatrixXd::Ones(5, 8);
    m(0, 1) = 0;
    CHECK_THROWS_AS(pca_impute(MatrixXd::Random(5, 8), m, cfg), ValidationError);
  }
}

TEST_CASE("explained variance rank") {
  Eigen::VectorXd u(6), v(4);
  u << 1, -2, 3, 0.5, -1, 2;
  v << 1, 2, -1, 0.3;
  const MatrixXd rank1 = u * v.transpose();
  CHECK(explained_variance_rank(rank1, 0.95) == 1);
  CHECK(explained_variance_rank(MatrixXd::Identity(4, 4) * 3.0, 0.95) >= 3);
  CHECK(explained_variance_rank(MatrixXd::Constant(3, 3, 2.0), 0.95) == 1);
}

TEST_CASE("pca properties on random low-rank fields") {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index r = 8 + static_cast<Eigen::Index>(rng.below(10));
    const Eigen::Index c = 8 + static_cast<Eigen::Index>(rng.below(20));
    MatrixXd a(r, 2), b(2, c);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = rng.uniform(-1, 1);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = rng.uniform(-1, 1);
    const MatrixXd x = a * b;
    const auto m = random_mask(r, c, 0.2, rng);
    PcaConfig cfg;
    cfg.max_iterations = 50;
    const auto out = pca_impute(x, m, cfg);
    INFO("trial " << trial);
    CHECK(out.iterations <= cfg.max_iterations);
    CHECK(out.completed.allFinite());
    CHECK(eval::observed_preserved(out.completed, x, m));
    MatrixXd xn = x;
    for (Eigen::Index i = 0; i < xn.size(); ++i) {
      if (m(i) == 0.0) xn(i) = NAN;
    }
    CHECK(eval::rmse_missing(out.completed, x, m) <=
          eval::rmse_missing(mean_impute(xn, m), x, m) + 1e-12);
  }
}
