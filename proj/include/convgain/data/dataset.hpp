#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <vector>

#include "convgain/errors.hpp"

namespace convgain::data {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
/// Observation indicator, same shape as the surge matrix: 1 observed, 0 missing.
using MaskMatrix = Eigen::MatrixXd;

/// A save point: a node of the simulation grid with a recorded surge series.
struct Node {
  std::int64_t id = 0;
  double latitude = 0.0;   // degrees
  double longitude = 0.0;  // degrees
  double elevation = 0.0;  // meters

  bool operator==(const Node&) const = default;
};

/// One storm: rows are time instances, columns are nodes. Missing entries hold
/// NaN in `surge` and 0 in `mask`.
struct SurgeDataset {
  Eigen::VectorXd times;  // hours, equally spaced, strictly increasing
  std::vector<Node> nodes;
  Matrix surge;           // n_t x n_s, meters
  MaskMatrix mask;        // n_t x n_s

  Index n_t() const { return surge.rows(); }
  Index n_s() const { return surge.cols(); }

  /// Throws ValidationError on any broken invariant (shapes, time axis,
  /// binary mask, NaN <=> missing duality).
  void validate() const;

  Index missing_count() const;
  double missing_rate() const;
};

/// Fully observed dataset; time stamps are t0 + i * dt.
SurgeDataset make_dataset(std::vector<Node> nodes, Matrix surge, double t0 = 0.0,
                          double dt = 1.0);

/// Copy of `complete` with NaN written wherever `mask` is 0. Entries already
/// missing in `complete` stay missing.
SurgeDataset apply_mask(const SurgeDataset& complete, const MaskMatrix& mask);

template <typename Derived>
bool is_binary(const Eigen::DenseBase<Derived>& m) {
  return ((m.derived().array() == 0.0) || (m.derived().array() == 1.0)).all();
}

double missing_rate(const MaskMatrix& mask);

/// Column permutation sorting nodes by (latitude, longitude), ties by id:
/// result[k] is the original column of the k-th node in locality order.
std::vector<Index> order_nodes(const std::vector<Node>& nodes);
inline std::vector<Index> order_nodes(const SurgeDataset& ds) { return order_nodes(ds.nodes); }

/// Node table from CSV with a required `id,lat,lon,elev` header row.
std::vector<Node> read_node_csv(const std::filesystem::path& path);
void write_node_csv(const std::vector<Node>& nodes, const std::filesystem::path& path);

std::size_t node_column(const SurgeDataset& ds, std::int64_t node_id);

}  // namespace convgain::data
