#include "convgain/imputer/patches.hpp"

#include <limits>

namespace convgain::imputer {

void PatchGeometry::validate() const {
  require(time_window >= 1 && node_window >= 1, "patch windows must be >= 1");
  require(time_stride >= 1 && node_stride >= 1, "patch strides must be >= 1");
}

std::vector<Index> window_origins(Index extent, Index window, Index stride) {
  require(extent >= 1 && window >= 1 && stride >= 1, "window_origins: arguments must be >= 1");
  const Index w = std::min(window, extent);
  std::vector<Index> origins;
  for (Index o = 0; o + w <= extent; o += stride) origins.push_back(o);
  if (origins.back() + w < extent) origins.push_back(extent - w);
  return origins;
}

Patch extract_patch(const data::SurgeDataset& ds, const std::vector<Index>& node_order, Index t0,
                    Index s0, Index time_window, Index node_window) {
  require(static_cast<Index>(node_order.size()) == ds.n_s(), "node order does not match dataset");
  require(t0 >= 0 && s0 >= 0 && t0 + time_window <= ds.n_t() && s0 + node_window <= ds.n_s(),
          "patch window exceeds the dataset");
  Patch p;
  p.t0 = t0;
  p.s0 = s0;
  p.surge.resize(time_window, node_window);
  p.mask.resize(time_window, node_window);
  p.latitude.resize(time_window, node_window);
  p.longitude.resize(time_window, node_window);
  for (Index j = 0; j < node_window; ++j) {
    const Index col = node_order[static_cast<std::size_t>(s0 + j)];
    const auto& node = ds.nodes[static_cast<std::size_t>(col)];
    p.surge.col(j) = ds.surge.col(col).segment(t0, time_window);
    p.mask.col(j) = ds.mask.col(col).segment(t0, time_window);
    p.latitude.col(j).setConstant(node.latitude);
    p.longitude.col(j).setConstant(node.longitude);
  }
  return p;
}

std::vector<Patch> extract_patches(const data::SurgeDataset& ds, const PatchGeometry& geometry,
                                   const std::vector<Index>& node_order) {
  geometry.validate();
  const Index tw = std::min(geometry.time_window, ds.n_t());
  const Index sw = std::min(geometry.node_window, ds.n_s());
  std::vector<Patch> patches;
  for (Index t0 : window_origins(ds.n_t(), tw, geometry.time_stride)) {
    for (Index s0 : window_origins(ds.n_s(), sw, geometry.node_stride)) {
      patches.push_back(extract_patch(ds, node_order, t0, s0, tw, sw));
    }
  }
  return patches;
}

Matrix assemble_patches(const std::vector<Patch>& patches, const std::vector<Matrix>& predictions,
                        const std::vector<Index>& node_order, Index n_t, Index n_s) {
  require(patches.size() == predictions.size(), "assemble: one prediction per patch required");
  Matrix sum = Matrix::Zero(n_t, n_s);
  Eigen::MatrixXi count = Eigen::MatrixXi::Zero(n_t, n_s);
  for (std::size_t k = 0; k < patches.size(); ++k) {
    const Patch& p = patches[k];
    const Matrix& pred = predictions[k];
    require(pred.rows() == p.surge.rows() && pred.cols() == p.surge.cols(),
            "assemble: prediction shape does not match its patch");
    for (Index j = 0; j < pred.cols(); ++j) {
      const Index col = node_order[static_cast<std::size_t>(p.s0 + j)];
      for (Index i = 0; i < pred.rows(); ++i) {
        sum(p.t0 + i, col) += pred(i, j);
        count(p.t0 + i, col) += 1;
      }
    }
  }
  Matrix out(n_t, n_s);
  for (Index s = 0; s < n_s; ++s) {
    for (Index t = 0; t < n_t; ++t) {
      out(t, s) = count(t, s) > 0 ? sum(t, s) / count(t, s)
                                  : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

}  // namespace convgain::imputer
