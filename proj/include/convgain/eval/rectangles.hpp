#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "convgain/data/dataset.hpp"

namespace convgain::eval {

using data::Index;

/// Counts of all-missing axis-aligned rectangles, aggregated by area (cells).
struct StructureReport {
  Index t_min = 5;
  Index s_min = 40;
  std::map<Index, std::int64_t> counts;  // area -> number of placements

  std::int64_t total() const;
  bool empty() const { return counts.empty(); }
};

/// Every placement of every h x w window with h >= t_min and w >= s_min whose
/// cells are all missing (mask == 0). Columns are taken in the given order.
/// Cost O(n_t^2 n_s).
StructureReport count_rectangles(const data::MaskMatrix& mask, Index t_min = 5,
                                 Index s_min = 40);

/// Same, with the node axis in locality order (see data::order_nodes).
StructureReport count_rectangles(const data::SurgeDataset& ds, Index t_min = 5,
                                 Index s_min = 40);

/// (area, count) pairs with area >= cutoff, ascending by area.
std::vector<std::pair<Index, std::int64_t>> structure_histogram(const StructureReport& report,
                                                                Index area_cutoff = 0);

}  // namespace convgain::eval
