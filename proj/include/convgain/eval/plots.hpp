#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "convgain/data/dataset.hpp"

namespace convgain::eval {

using data::Index;

/// Time x node heat-map (nodes in locality order along x). Colours are scaled
/// to this storm's observed range; missing cells are drawn white.
std::string heatmap_svg(const data::SurgeDataset& ds, const std::string& title = "");
void emit_heatmap(const data::SurgeDataset& ds, const std::filesystem::path& path,
                  const std::string& title = "");

/// Everything plotted for one node. `truth` and the imputed columns may be
/// NaN where unknown.
struct SeriesTable {
  std::int64_t node_id = 0;
  std::vector<double> time;
  std::vector<double> truth;
  std::vector<double> observed;  // NaN where missing
  std::vector<int> provenance;   // 1 observed, 0 imputed
  std::vector<std::string> methods;
  std::vector<std::vector<double>> imputed;  // one column per method

  bool operator==(const SeriesTable& other) const;  // NaN compares equal to NaN
};

/// Extracts node `node_id` from `masked` (observed values and mask), the
/// matching column of `truth` when given, and each completed matrix.
SeriesTable make_series(std::int64_t node_id, const data::SurgeDataset& masked,
                        const data::SurgeDataset* truth,
                        const std::vector<std::pair<std::string, data::Matrix>>& imputed);

std::string series_csv(const SeriesTable& table);
SeriesTable parse_series_csv(const std::string& text);
std::string timeseries_svg(const SeriesTable& table);

/// Writes the SVG to `svg_path` and the CSV sidecar next to it (".csv").
void emit_timeseries(const SeriesTable& table, const std::filesystem::path& svg_path);

/// Plain multi-line chart, used for loss curves.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::vector<std::pair<std::string, std::vector<double>>>& series);

}  // namespace convgain::eval
