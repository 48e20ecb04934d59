#include "convgain/eval/plots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "convgain/eval/csv.hpp"

namespace convgain::eval {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Rgb {
  double r, g, b;
};

// Five-stop approximation of the viridis ramp.
constexpr std::array<Rgb, 5> kRamp{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};

std::string hex_colour(double r, double g, double b) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(r)),
                static_cast<int>(std::lround(g)), static_cast<int>(std::lround(b)));
  return buf;
}

std::string ramp_colour(double u) {
  u = std::clamp(u, 0.0, 1.0) * (kRamp.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(u), kRamp.size() - 2);
  const double w = u - static_cast<double>(i);
  const Rgb& a = kRamp[i];
  const Rgb& b = kRamp[i + 1];
  return hex_colour(a.r + w * (b.r - a.r), a.g + w * (b.g - a.g), a.b + w * (b.b - a.b));
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

const std::array<const char*, 6> kLineColours{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b"};

struct Frame {
  double left = 60, right = 20, top = 40, bottom = 50;
  double width = 720, height = 360;
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;

  double x(double v) const { return left + (v - x_lo) / (x_hi - x_lo) * (width - left - right); }
  double y(double v) const { return height - bottom - (v - y_lo) / (y_hi - y_lo) * (height - top - bottom); }
};

void fit_range(double& lo, double& hi) {
  if (!(lo <= hi)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
}

void axes(std::ostringstream& svg, const Frame& f, const std::string& title, const std::string& x_label) {
  svg << "<text x=\"" << num(f.width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << escape_xml(title) << "</text>\n";
  svg << "<rect x=\"" << num(f.left) << "\" y=\"" << num(f.top) << "\" width=\""
      << num(f.width - f.left - f.right) << "\" height=\"" << num(f.height - f.top - f.bottom)
      << "\" fill=\"none\" stroke=\"#000000\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = f.x_lo + k * (f.x_hi - f.x_lo) / 4;
    const double yv = f.y_lo + k * (f.y_hi - f.y_lo) / 4;
    svg << "<text x=\"" << num(f.x(xv)) << "\" y=\"" << num(f.height - f.bottom + 16)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << format_number(std::round(xv * 1000) / 1000)
        << "</text>\n";
    svg << "<text x=\"" << num(f.left - 4) << "\" y=\"" << num(f.y(yv) + 3)
        << "\" text-anchor=\"end\" font-size=\"10\">" << format_number(std::round(yv * 1000) / 1000)
        << "</text>\n";
  }
  svg << "<text x=\"" << num(f.width / 2) << "\" y=\"" << num(f.height - 12)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape_xml(x_label) << "</text>\n";
}

// Polyline pieces, broken at NaN.
void polyline(std::ostringstream& svg, const Frame& f, const std::vector<double>& xs,
              const std::vector<double>& ys, const char* colour, const char* dash) {
  std::string points;
  auto flush = [&] {
    if (!points.empty()) {
      svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"";
      if (dash) svg << " stroke-dasharray=\"" << dash << "\"";
      svg << " points=\"" << points << "\"/>\n";
    }
    points.clear();
  };
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (std::isnan(ys[i])) {
      flush();
      continue;
    }
    if (!points.empty()) points += ' ';
    points += num(f.x(xs[i])) + "," + num(f.y(ys[i]));
  }
  flush();
}

void legend(std::ostringstream& svg, const Frame& f, std::size_t row, const std::string& label,
            const char* colour) {
  const double y = f.top + 12 + 14 * static_cast<double>(row);
  const double x = f.width - f.right - 150;
  svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 20) << "\" y2=\""
      << num(y) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
  svg << "<text x=\"" << num(x + 24) << "\" y=\"" << num(y + 4) << "\" font-size=\"10\">"
      << escape_xml(label) << "</text>\n";
}

double parse_number(const std::string& s) {
  if (s.empty() || s == "nan") return kNaN;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("series csv: bad number '" + s + "'");
  }
  require(used == s.size(), "series csv: bad number '" + s + "'");
  return v;
}

bool same_values(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i] || (std::isnan(a[i]) && std::isnan(b[i])))) return false;
  }
  return true;
}

}  // namespace

std::string heatmap_svg(const data::SurgeDataset& ds, const std::string& title) {
  const auto order = data::order_nodes(ds);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Index s = 0; s < ds.n_s(); ++s) {
    for (Index t = 0; t < ds.n_t(); ++t) {
      if (ds.mask(t, s) != 1.0) continue;
      lo = std::min(lo, ds.surge(t, s));
      hi = std::max(hi, ds.surge(t, s));
    }
  }
  fit_range(lo, hi);
  const double cell_w = std::max(1.0, 750.0 / static_cast<double>(ds.n_s()));
  const double cell_h = std::max(1.0, 300.0 / static_cast<double>(ds.n_t()));
  const double left = 50, top = 40;
  const double width = left + cell_w * ds.n_s() + 90;
  const double height = top + cell_h * ds.n_t() + 40;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#f4f4f4\"/>\n";
  svg << "<text x=\"" << num(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << escape_xml(title.empty() ? "surge heat-map" : title) << "</text>\n";
  for (Index t = 0; t < ds.n_t(); ++t) {
    for (Index k = 0; k < ds.n_s(); ++k) {
      const Index s = order[static_cast<std::size_t>(k)];
      const bool missing = ds.mask(t, s) != 1.0;
      const std::string fill = missing ? "#ffffff" : ramp_colour((ds.surge(t, s) - lo) / (hi - lo));
      svg << "<rect x=\"" << num(left + k * cell_w) << "\" y=\"" << num(top + t * cell_h)
          << "\" width=\"" << num(cell_w) << "\" height=\"" << num(cell_h) << "\" fill=\"" << fill
          << "\"/>\n";
    }
  }
  svg << "<text x=\"" << num(left + cell_w * ds.n_s() / 2) << "\" y=\"" << num(height - 12)
      << "\" text-anchor=\"middle\" font-size=\"12\">node (locality order)</text>\n";
  svg << "<text x=\"14\" y=\"" << num(top + cell_h * ds.n_t() / 2)
      << "\" font-size=\"12\" transform=\"rotate(-90 14 " << num(top + cell_h * ds.n_t() / 2)
      << ")\" text-anchor=\"middle\">time step</text>\n";
  // colour bar
  const double bar_x = left + cell_w * ds.n_s() + 20, bar_h = cell_h * ds.n_t();
  for (int k = 0; k < 50; ++k) {
    svg << "<rect x=\"" << num(bar_x) << "\" y=\"" << num(top + bar_h * k / 50.0) << "\" width=\"14\" height=\""
        << num(bar_h / 50.0 + 0.5) << "\" fill=\"" << ramp_colour(1.0 - k / 49.0) << "\"/>\n";
  }
  svg << "<text x=\"" << num(bar_x + 18) << "\" y=\"" << num(top + 8) << "\" font-size=\"10\">"
      << format_number(std::round(hi * 1000) / 1000) << " m</text>\n";
  svg << "<text x=\"" << num(bar_x + 18) << "\" y=\"" << num(top + bar_h) << "\" font-size=\"10\">"
      << format_number(std::round(lo * 1000) / 1000) << " m</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void emit_heatmap(const data::SurgeDataset& ds, const std::filesystem::path& path,
                  const std::string& title) {
  write_text_file(path, heatmap_svg(ds, title));
}

bool SeriesTable::operator==(const SeriesTable& other) const {
  if (node_id != other.node_id || provenance != other.provenance || methods != other.methods ||
      imputed.size() != other.imputed.size()) {
    return false;
  }
  for (std::size_t k = 0; k < imputed.size(); ++k) {
    if (!same_values(imputed[k], other.imputed[k])) return false;
  }
  return same_values(time, other.time) && same_values(truth, other.truth) &&
         same_values(observed, other.observed);
}

SeriesTable make_series(std::int64_t node_id, const data::SurgeDataset& masked,
                        const data::SurgeDataset* truth,
                        const std::vector<std::pair<std::string, data::Matrix>>& imputed) {
  const auto col = static_cast<Index>(data::node_column(masked, node_id));
  SeriesTable table;
  table.node_id = node_id;
  Index truth_col = -1;
  if (truth) {
    require(truth->n_t() == masked.n_t(), "series: truth has a different time axis");
    truth_col = static_cast<Index>(data::node_column(*truth, node_id));
  }
  for (Index t = 0; t < masked.n_t(); ++t) {
    table.time.push_back(masked.times[t]);
    table.truth.push_back(truth ? truth->surge(t, truth_col) : kNaN);
    const bool observed = masked.mask(t, col) == 1.0;
    table.observed.push_back(observed ? masked.surge(t, col) : kNaN);
    table.provenance.push_back(observed ? 1 : 0);
  }
  for (const auto& [name, matrix] : imputed) {
    require(matrix.rows() == masked.n_t() && matrix.cols() == masked.n_s(),
            "series: completed matrix for " + name + " has the wrong shape");
    table.methods.push_back(name);
    std::vector<double> column(matrix.col(col).data(), matrix.col(col).data() + matrix.rows());
    table.imputed.push_back(std::move(column));
  }
  return table;
}

std::string series_csv(const SeriesTable& table) {
  std::ostringstream out;
  out << "node_id,time,truth,observed,provenance";
  for (const auto& m : table.methods) out << ',' << csv_field(m);
  out << '\n';
  for (std::size_t i = 0; i < table.time.size(); ++i) {
    out << table.node_id << ',' << format_number(table.time[i]) << ',' << format_number(table.truth[i])
        << ',' << format_number(table.observed[i]) << ',' << table.provenance[i];
    for (const auto& column : table.imputed) out << ',' << format_number(column[i]);
    out << '\n';
  }
  return out.str();
}

SeriesTable parse_series_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "series csv: empty input");
  const auto header = split_csv_record(line);
  require(header.size() >= 5 && header[0] == "node_id" && header[1] == "time" &&
              header[2] == "truth" && header[3] == "observed" && header[4] == "provenance",
          "series csv: unexpected header");
  SeriesTable table;
  table.methods.assign(header.begin() + 5, header.end());
  table.imputed.resize(table.methods.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_record(line);
    require(f.size() == header.size(), "series csv: ragged row");
    table.node_id = std::stoll(f[0]);
    table.time.push_back(parse_number(f[1]));
    table.truth.push_back(parse_number(f[2]));
    table.observed.push_back(parse_number(f[3]));
    table.provenance.push_back(std::stoi(f[4]));
    for (std::size_t k = 0; k < table.methods.size(); ++k) {
      table.imputed[k].push_back(parse_number(f[5 + k]));
    }
  }
  return table;
}

std::string timeseries_svg(const SeriesTable& table) {
  Frame f;
  f.x_lo = table.time.empty() ? 0.0 : table.time.front();
  f.x_hi = table.time.empty() ? 1.0 : table.time.back();
  fit_range(f.x_lo, f.x_hi);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto extend = [&](const std::vector<double>& v) {
    for (double x : v) {
      if (std::isnan(x)) continue;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  };
  extend(table.truth);
  extend(table.observed);
  for (const auto& c : table.imputed) extend(c);
  fit_range(lo, hi);
  const double pad = 0.05 * (hi - lo);
  f.y_lo = lo - pad;
  f.y_hi = hi + pad;

  Index missing = 0;
  for (int p : table.provenance) missing += p == 0;
  const double rate = table.provenance.empty() ? 0.0 : double(missing) / table.provenance.size();
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(f.width) << "\" height=\""
      << num(f.height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  axes(svg, f, "node " + std::to_string(table.node_id) + " (missing " + num(100 * rate) + "%)",
       "time [h]");
  // shade missing steps
  for (std::size_t i = 0; i < table.provenance.size(); ++i) {
    if (table.provenance[i] != 0) continue;
    const double half = table.time.size() > 1 ? 0.5 * (f.x_hi - f.x_lo) / (table.time.size() - 1) : 0.5;
    const double x0 = std::max(f.x(f.x_lo), f.x(table.time[i] - half));
    const double x1 = std::min(f.x(f.x_hi), f.x(table.time[i] + half));
    svg << "<rect x=\"" << num(x0) << "\" y=\"" << num(f.top) << "\" width=\"" << num(x1 - x0)
        << "\" height=\"" << num(f.height - f.top - f.bottom) << "\" fill=\"#eeeeee\"/>\n";
  }
  std::size_t row = 0;
  if (std::any_of(table.truth.begin(), table.truth.end(), [](double v) { return !std::isnan(v); })) {
    polyline(svg, f, table.time, table.truth, "#000000", "4 3");
    legend(svg, f, row++, "truth", "#000000");
  }
  for (std::size_t k = 0; k < table.imputed.size(); ++k) {
    const char* colour = kLineColours[k % kLineColours.size()];
    polyline(svg, f, table.time, table.imputed[k], colour, nullptr);
    legend(svg, f, row++, table.methods[k], colour);
  }
  for (std::size_t i = 0; i < table.observed.size(); ++i) {
    if (std::isnan(table.observed[i])) continue;
    svg << "<circle cx=\"" << num(f.x(table.time[i])) << "\" cy=\"" << num(f.y(table.observed[i]))
        << "\" r=\"2\" fill=\"#000000\"/>\n";
  }
  legend(svg, f, row, "observed (dots)", "#000000");
  svg << "</svg>\n";
  return svg.str();
}

void emit_timeseries(const SeriesTable& table, const std::filesystem::path& svg_path) {
  write_text_file(svg_path, timeseries_svg(table));
  std::filesystem::path csv_path = svg_path;
  csv_path.replace_extension(".csv");
  write_text_file(csv_path, series_csv(table));
}

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::vector<std::pair<std::string, std::vector<double>>>& series) {
  Frame f;
  std::size_t longest = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& [name, ys] : series) {
    longest = std::max(longest, ys.size());
    for (double y : ys) {
      if (!std::isfinite(y)) continue;
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  }
  f.x_lo = 0.0;
  f.x_hi = longest > 1 ? static_cast<double>(longest - 1) : 1.0;
  fit_range(lo, hi);
  f.y_lo = lo;
  f.y_hi = hi;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(f.width) << "\" height=\""
      << num(f.height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  axes(svg, f, title, x_label);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& ys = series[k].second;
    std::vector<double> xs(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
    const char* colour = kLineColours[k % kLineColours.size()];
    polyline(svg, f, xs, ys, colour, nullptr);
    legend(svg, f, k, series[k].first, colour);
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace convgain::eval
