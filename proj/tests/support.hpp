#pragma once

// Shared helpers for the test binaries: random fills and slow reference
// implementations used as oracles.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include "convgain/data/dataset.hpp"
#include "convgain/nn/tensor.hpp"
#include "convgain/random.hpp"

namespace testing {

using convgain::Rng;
using convgain::nn::Index;
using convgain::nn::Shape;
using convgain::nn::TensorD;

inline TensorD random_tensor(const Shape& shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  TensorD t(shape);
  for (Index i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}

/// Values bounded away from zero (relu kinks) and from each other (pool
/// ties), so finite differences never straddle a non-smooth point.
inline TensorD separated_tensor(const Shape& shape, Rng& rng) {
  TensorD t(shape);
  const Index n = t.size();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (Index i = n - 1; i > 0; --i) {
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i + 1)))]);
  }
  for (Index i = 0; i < n; ++i) {
    const double rank = static_cast<double>(perm[static_cast<std::size_t>(i)]) + 0.5;
    const double v = (rank / static_cast<double>(n)) * 2.0 - 1.0;  // in (-1, 1)
    t[i] = v + (v >= 0 ? 0.05 : -0.05);
  }
  return t;
}

/// Direct-loop "same" convolution, NHWC in, [kh, kw, Cin, Cout] filters.
inline TensorD naive_conv(const TensorD& x, const TensorD& f, const TensorD& b) {
  const Index n = x.dim(0), h = x.dim(1), w = x.dim(2), cin = x.dim(3);
  const Index kh = f.dim(0), kw = f.dim(1), cout = f.dim(3);
  TensorD y({n, h, w, cout});
  for (Index s = 0; s < n; ++s)
    for (Index i = 0; i < h; ++i)
      for (Index j = 0; j < w; ++j)
        for (Index o = 0; o < cout; ++o) {
          double acc = b[o];
          for (Index di = 0; di < kh; ++di)
            for (Index dj = 0; dj < kw; ++dj) {
              const Index r = i + di - kh / 2, c = j + dj - kw / 2;
              if (r < 0 || r >= h || c < 0 || c >= w) continue;
              for (Index ci = 0; ci < cin; ++ci) acc += x.at(s, r, c, ci) * f.at(di, dj, ci, o);
            }
          y.at(s, i, j, o) = acc;
        }
  return y;
}

/// Direct 2x2 ceil-mode max pooling.
inline TensorD naive_pool(const TensorD& x) {
  const Index n = x.dim(0), h = x.dim(1), w = x.dim(2), c = x.dim(3);
  TensorD y({n, (h + 1) / 2, (w + 1) / 2, c});
  for (Index s = 0; s < n; ++s)
    for (Index i = 0; i < y.dim(1); ++i)
      for (Index j = 0; j < y.dim(2); ++j)
        for (Index k = 0; k < c; ++k) {
          double best = -INFINITY;
          for (Index di = 0; di < 2; ++di)
            for (Index dj = 0; dj < 2; ++dj) {
              const Index r = 2 * i + di, col = 2 * j + dj;
              if (r < h && col < w) best = std::max(best, x.at(s, r, col, k));
            }
          y.at(s, i, j, k) = best;
        }
  return y;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("convgain_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Small dataset with random nodes; `missing_rate` of the entries masked iid.
inline convgain::data::SurgeDataset random_dataset(Index n_t, Index n_s, double missing_rate,
                                                   std::uint64_t seed) {
  Rng rng(seed);
  std::vector<convgain::data::Node> nodes;
  for (Index s = 0; s < n_s; ++s) {
    nodes.push_back({s + 1, 29.0 + rng.uniform(-0.3, 0.3), -95.0 + rng.uniform(-1.0, 1.0),
                     rng.uniform(-1.0, 1.0)});
  }
  convgain::data::Matrix surge(n_t, n_s);
  for (Index t = 0; t < n_t; ++t)
    for (Index s = 0; s < n_s; ++s) surge(t, s) = rng.uniform(-0.5, 2.5);
  auto ds = convgain::data::make_dataset(std::move(nodes), std::move(surge));
  convgain::data::MaskMatrix mask(n_t, n_s);
  for (Index t = 0; t < n_t; ++t)
    for (Index s = 0; s < n_s; ++s) mask(t, s) = rng.bernoulli(missing_rate) ? 0.0 : 1.0;
  mask(0, 0) = 1.0;  // keep at least one observed entry
  return convgain::data::apply_mask(ds, mask);
}

}  // namespace testing
