#include "convgain/nn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace convgain::nn {

namespace {

struct ImageDims {
  Index n, h, w, c;
  bool batched;
};

ImageDims image_dims(const TensorD& t, const char* what) {
  if (t.rank() == 3) return {1, t.dim(0), t.dim(1), t.dim(2), false};
  require(t.rank() == 4, std::string(what) + ": expected [N,H,W,C] or [H,W,C], got " +
                             shape_string(t.shape()));
  return {t.dim(0), t.dim(1), t.dim(2), t.dim(3), true};
}

Shape image_shape(const ImageDims& d, Index h, Index w, Index c) {
  if (d.batched) return {d.n, h, w, c};
  return {h, w, c};
}

struct VectorDims {
  Index n, f;
  bool batched;
};

VectorDims vector_dims(const TensorD& t, const char* what) {
  if (t.rank() == 1) return {1, t.dim(0), false};
  require(t.rank() == 2,
          std::string(what) + ": expected [N,F] or [F], got " + shape_string(t.shape()));
  return {t.dim(0), t.dim(1), true};
}

}  // namespace

TensorD conv2d_forward(const TensorD& input, const TensorD& filters, const TensorD& bias,
                       bool same_padding, RowMatrix<double>* cols_out) {
  const ImageDims d = image_dims(input, "conv2d");
  require(filters.rank() == 4, "conv2d: filters must be [kh,kw,Cin,Cout]");
  const Index kh = filters.dim(0), kw = filters.dim(1), cin = filters.dim(2),
              cout = filters.dim(3);
  require(same_padding, "conv2d: only same padding is supported");
  require(cin == d.c, "conv2d: input has " + std::to_string(d.c) + " channels, filters expect " +
                          std::to_string(cin));
  require(kh % 2 == 1 && kw % 2 == 1, "conv2d: same padding needs odd filter extents");
  require(bias.rank() == 1 && bias.dim(0) == cout, "conv2d: bias must be [Cout]");

  const Index ph = kh / 2, pw = kw / 2;
  const Index k = kh * kw * cin;
  const Index pixels = d.n * d.h * d.w;

  RowMatrix<double> local;
  RowMatrix<double>& cols = cols_out ? *cols_out : local;
  cols.setZero(pixels, k);
  const double* in = input.raw();
  for (Index n = 0; n < d.n; ++n) {
    for (Index i = 0; i < d.h; ++i) {
      for (Index j = 0; j < d.w; ++j) {
        double* row = cols.row((n * d.h + i) * d.w + j).data();
        for (Index di = 0; di < kh; ++di) {
          const Index ii = i + di - ph;
          if (ii < 0 || ii >= d.h) continue;
          for (Index dj = 0; dj < kw; ++dj) {
            const Index jj = j + dj - pw;
            if (jj < 0 || jj >= d.w) continue;
            const double* src = in + ((n * d.h + ii) * d.w + jj) * cin;
            double* dst = row + (di * kw + dj) * cin;
            for (Index c = 0; c < cin; ++c) dst[c] = src[c];
          }
        }
      }
    }
  }

  TensorD out(image_shape(d, d.h, d.w, cout));
  auto out_m = out.matrix(pixels, cout);
  out_m.noalias() = cols * filters.matrix(k, cout);
  out_m.rowwise() += bias.data().transpose();
  return out;
}

ConvGradients conv2d_backward(const RowMatrix<double>& cols, const Shape& input_shape,
                              const TensorD& filters, const TensorD& grad_output,
                              bool parameter_gradients) {
  TensorD probe(input_shape);
  const ImageDims d = image_dims(probe, "conv2d_backward");
  const Index kh = filters.dim(0), kw = filters.dim(1), cin = filters.dim(2),
              cout = filters.dim(3);
  const Index k = kh * kw * cin;
  const Index pixels = d.n * d.h * d.w;
  require(grad_output.size() == pixels * cout, "conv2d_backward: gradient shape mismatch");
  require(cols.rows() == pixels && cols.cols() == k, "conv2d_backward: stale forward cache");

  const auto g = grad_output.matrix(pixels, cout);
  ConvGradients grads{TensorD(input_shape), {}, {}};
  if (parameter_gradients) {
    grads.filters = TensorD(filters.shape());
    grads.bias = TensorD({cout});
    grads.filters.matrix(k, cout).noalias() = cols.transpose() * g;
    grads.bias.data() = g.colwise().sum().transpose();
  }

  const RowMatrix<double> dcols = g * filters.matrix(k, cout).transpose();
  const Index ph = kh / 2, pw = kw / 2;
  double* din = grads.input.raw();
  for (Index n = 0; n < d.n; ++n) {
    for (Index i = 0; i < d.h; ++i) {
      for (Index j = 0; j < d.w; ++j) {
        const double* row = dcols.row((n * d.h + i) * d.w + j).data();
        for (Index di = 0; di < kh; ++di) {
          const Index ii = i + di - ph;
          if (ii < 0 || ii >= d.h) continue;
          for (Index dj = 0; dj < kw; ++dj) {
            const Index jj = j + dj - pw;
            if (jj < 0 || jj >= d.w) continue;
            double* dst = din + ((n * d.h + ii) * d.w + jj) * cin;
            const double* src = row + (di * kw + dj) * cin;
            for (Index c = 0; c < cin; ++c) dst[c] += src[c];
          }
        }
      }
    }
  }
  return grads;
}

PoolOutput maxpool2_forward(const TensorD& input) {
  const ImageDims d = image_dims(input, "maxpool2");
  const Index oh = (d.h + 1) / 2, ow = (d.w + 1) / 2;
  PoolOutput result{TensorD(image_shape(d, oh, ow, d.c)), {}};
  result.argmax.resize(static_cast<std::size_t>(result.output.size()));
  const double* in = input.raw();
  double* out = result.output.raw();
  for (Index n = 0; n < d.n; ++n) {
    for (Index oi = 0; oi < oh; ++oi) {
      for (Index oj = 0; oj < ow; ++oj) {
        for (Index c = 0; c < d.c; ++c) {
          Index best = -1;
          double best_value = 0.0;
          for (Index di = 0; di < 2; ++di) {
            const Index i = 2 * oi + di;
            if (i >= d.h) break;
            for (Index dj = 0; dj < 2; ++dj) {
              const Index j = 2 * oj + dj;
              if (j >= d.w) break;
              const Index off = ((n * d.h + i) * d.w + j) * d.c + c;
              if (best < 0 || in[off] > best_value) {
                best = off;
                best_value = in[off];
              }
            }
          }
          const Index o = ((n * oh + oi) * ow + oj) * d.c + c;
          out[o] = best_value;
          result.argmax[static_cast<std::size_t>(o)] = best;
        }
      }
    }
  }
  return result;
}

TensorD maxpool2_backward(const Shape& input_shape, const std::vector<Index>& argmax,
                          const TensorD& grad_output) {
  require(static_cast<Index>(argmax.size()) == grad_output.size(),
          "maxpool2_backward: gradient does not match forward cache");
  TensorD grad(input_shape);
  for (std::size_t o = 0; o < argmax.size(); ++o) grad[argmax[o]] += grad_output[static_cast<Index>(o)];
  return grad;
}

TensorD dense_forward(const TensorD& input, const TensorD& weights, const TensorD& bias) {
  const VectorDims d = vector_dims(input, "dense");
  require(weights.rank() == 2 && weights.dim(0) == d.f,
          "dense: input width " + std::to_string(d.f) + " does not match weights " +
              shape_string(weights.shape()));
  const Index m = weights.dim(1);
  require(bias.rank() == 1 && bias.dim(0) == m, "dense: bias must be [out]");
  TensorD out(d.batched ? Shape{d.n, m} : Shape{m});
  auto out_m = out.matrix(d.n, m);
  out_m.noalias() = input.matrix(d.n, d.f) * weights.matrix(d.f, m);
  out_m.rowwise() += bias.data().transpose();
  return out;
}

DenseGradients dense_backward(const TensorD& input, const TensorD& weights,
                              const TensorD& grad_output, bool parameter_gradients) {
  const VectorDims d = vector_dims(input, "dense_backward");
  const Index m = weights.dim(1);
  require(grad_output.size() == d.n * m, "dense_backward: gradient shape mismatch");
  const auto g = grad_output.matrix(d.n, m);
  const auto x = input.matrix(d.n, d.f);
  DenseGradients grads{TensorD(input.shape()), {}, {}};
  if (parameter_gradients) {
    grads.weights = TensorD(weights.shape());
    grads.bias = TensorD({m});
    grads.weights.matrix(d.f, m).noalias() = x.transpose() * g;
    grads.bias.data() = g.colwise().sum().transpose();
  }
  grads.input.matrix(d.n, d.f).noalias() = g * weights.matrix(d.f, m).transpose();
  return grads;
}

TensorD activation(const TensorD& x, Activation kind) {
  TensorD y(x.shape());
  const Index n = x.size();
  if (kind == Activation::relu) {
    for (Index i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
    return y;
  }
  constexpr double lo = std::numeric_limits<double>::denorm_min();
  const double hi = std::nextafter(1.0, 0.0);
  for (Index i = 0; i < n; ++i) {
    const double v = x[i];
    double s;
    if (v >= 0.0) {
      s = 1.0 / (1.0 + std::exp(-v));
    } else {
      const double e = std::exp(v);
      s = e / (1.0 + e);
    }
    y[i] = std::clamp(s, lo, hi);
  }
  return y;
}

TensorD activation_backward(const TensorD& saved, Activation kind, const TensorD& grad_output) {
  require(saved.size() == grad_output.size(), "activation_backward: shape mismatch");
  TensorD g(grad_output.shape());
  const Index n = saved.size();
  if (kind == Activation::relu) {
    for (Index i = 0; i < n; ++i) g[i] = saved[i] > 0.0 ? grad_output[i] : 0.0;
  } else {
    for (Index i = 0; i < n; ++i) g[i] = grad_output[i] * saved[i] * (1.0 - saved[i]);
  }
  return g;
}

}  // namespace convgain::nn
