#include "convgain/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace convgain::data {

void SurgeDataset::validate() const {
  require(n_t() >= 1 && n_s() >= 1, "dataset must have at least one time step and one node");
  require(times.size() == n_t(), "time axis has " + std::to_string(times.size()) +
                                     " stamps but the surge matrix has " + std::to_string(n_t()) +
                                     " rows");
  require(static_cast<Index>(nodes.size()) == n_s(),
          "shape mismatch: " + std::to_string(nodes.size()) + " nodes declared, " +
              std::to_string(n_s()) + " matrix columns");
  require(mask.rows() == n_t() && mask.cols() == n_s(), "mask shape does not match surge matrix");
  require(is_binary(mask), "mask must be binary");
  require(times.allFinite(), "time stamps must be finite");
  if (n_t() > 1) {
    const double dt = times[1] - times[0];
    require(dt > 0.0, "time axis must be strictly increasing");
    for (Index i = 1; i < n_t(); ++i) {
      const double step = times[i] - times[i - 1];
      require(step > 0.0, "time axis must be strictly increasing");
      require(std::abs(step - dt) <= 1e-9 * std::max(1.0, std::abs(dt)),
              "time axis must be equally spaced");
    }
  }
  for (const auto& n : nodes) {
    require(std::isfinite(n.latitude) && std::isfinite(n.longitude) && std::isfinite(n.elevation),
            "node " + std::to_string(n.id) + " has non-finite coordinates or elevation");
  }
  for (Index s = 0; s < n_s(); ++s) {
    for (Index t = 0; t < n_t(); ++t) {
      const bool observed = mask(t, s) == 1.0;
      const double v = surge(t, s);
      if (observed && !std::isfinite(v)) {
        throw ValidationError("mask disagreement at (" + std::to_string(t) + ", " +
                              std::to_string(s) + "): observed entry is not finite");
      }
      if (!observed && !std::isnan(v)) {
        throw ValidationError("mask disagreement at (" + std::to_string(t) + ", " +
                              std::to_string(s) + "): missing entry is not NaN");
      }
    }
  }
}

Index SurgeDataset::missing_count() const { return mask.size() - static_cast<Index>(mask.sum()); }

double SurgeDataset::missing_rate() const { return data::missing_rate(mask); }

double missing_rate(const MaskMatrix& mask) {
  if (mask.size() == 0) return 0.0;
  return 1.0 - mask.sum() / static_cast<double>(mask.size());
}

SurgeDataset make_dataset(std::vector<Node> nodes, Matrix surge, double t0, double dt) {
  SurgeDataset ds;
  ds.times = Eigen::VectorXd::LinSpaced(surge.rows(), 0.0, static_cast<double>(surge.rows() - 1));
  ds.times = (t0 + dt * ds.times.array()).matrix();
  ds.nodes = std::move(nodes);
  ds.mask = MaskMatrix::Ones(surge.rows(), surge.cols());
  ds.surge = std::move(surge);
  ds.validate();
  return ds;
}

SurgeDataset apply_mask(const SurgeDataset& complete, const MaskMatrix& mask) {
  require(mask.rows() == complete.n_t() && mask.cols() == complete.n_s(),
          "mask shape does not match dataset");
  require(is_binary(mask), "mask must be binary");
  SurgeDataset out = complete;
  out.mask = complete.mask.cwiseProduct(mask);
  for (Index s = 0; s < out.n_s(); ++s) {
    for (Index t = 0; t < out.n_t(); ++t) {
      if (out.mask(t, s) == 0.0) out.surge(t, s) = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

std::vector<Index> order_nodes(const std::vector<Node>& nodes) {
  std::vector<Index> perm(nodes.size());
  std::iota(perm.begin(), perm.end(), Index{0});
  std::sort(perm.begin(), perm.end(), [&](Index a, Index b) {
    const Node& na = nodes[static_cast<std::size_t>(a)];
    const Node& nb = nodes[static_cast<std::size_t>(b)];
    if (na.latitude != nb.latitude) return na.latitude < nb.latitude;
    if (na.longitude != nb.longitude) return na.longitude < nb.longitude;
    return na.id < nb.id;
  });
  return perm;
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& text, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("node table line " + std::to_string(line_no) + ": bad number '" +
                          text + "'");
  }
}

}  // namespace

std::vector<Node> read_node_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open node table " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("node table is empty: " + path.string());
  const auto header = split_csv_line(line);
  require(header == std::vector<std::string>{"id", "lat", "lon", "elev"},
          "node table header must be 'id,lat,lon,elev'");
  std::vector<Node> nodes;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    require(f.size() == 4, "node table line " + std::to_string(line_no) + ": expected 4 fields");
    Node n;
    n.id = static_cast<std::int64_t>(parse_number(f[0], line_no));
    n.latitude = parse_number(f[1], line_no);
    n.longitude = parse_number(f[2], line_no);
    n.elevation = parse_number(f[3], line_no);
    nodes.push_back(n);
  }
  return nodes;
}

void write_node_csv(const std::vector<Node>& nodes, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write node table " + path.string());
  out << "id,lat,lon,elev\n" << std::setprecision(17);
  for (const auto& n : nodes) {
    out << n.id << ',' << n.latitude << ',' << n.longitude << ',' << n.elevation << '\n';
  }
  if (!out) throw IoError("failed writing node table " + path.string());
}

std::size_t node_column(const SurgeDataset& ds, std::int64_t node_id) {
  for (std::size_t i = 0; i < ds.nodes.size(); ++i) {
    if (ds.nodes[i].id == node_id) return i;
  }
  throw ValidationError("unknown node id " + std::to_string(node_id));
}

}  // namespace convgain::data
