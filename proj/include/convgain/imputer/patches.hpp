#pragma once

#include <vector>

#include "convgain/data/dataset.hpp"

namespace convgain::imputer {

using data::Index;
using data::Matrix;

/// Window size and the strides used when tiling a full matrix for imputation.
struct PatchGeometry {
  Index time_window = 3;
  Index node_window = 125;
  Index time_stride = 1;
  Index node_stride = 25;

  void validate() const;
  bool operator==(const PatchGeometry&) const = default;
};

/// A time-by-node window of a dataset, columns in locality order.
struct Patch {
  Matrix surge;      // T_w x S_w, NaN where missing
  Matrix mask;       // T_w x S_w
  Matrix latitude;   // T_w x S_w, constant along time
  Matrix longitude;  // T_w x S_w, constant along time
  Index t0 = 0;      // origin row in the full matrix
  Index s0 = 0;      // origin position in the node order
};

/// Origins 0, stride, 2*stride, ... plus a final origin clamped so the last
/// window ends at the boundary. A window wider than the extent shrinks to it.
std::vector<Index> window_origins(Index extent, Index window, Index stride);

/// Single window with origin (t0, s0); s0 indexes `node_order`.
Patch extract_patch(const data::SurgeDataset& ds, const std::vector<Index>& node_order, Index t0,
                    Index s0, Index time_window, Index node_window);

/// Tiles the dataset so every (t, s) is covered at least once.
std::vector<Patch> extract_patches(const data::SurgeDataset& ds, const PatchGeometry& geometry,
                                   const std::vector<Index>& node_order);

/// Averages overlapping per-patch predictions back onto the full n_t x n_s
/// matrix (original column order). Entries no patch covers are NaN.
Matrix assemble_patches(const std::vector<Patch>& patches, const std::vector<Matrix>& predictions,
                        const std::vector<Index>& node_order, Index n_t, Index n_s);

}  // namespace convgain::imputer
