#include "convgain/eval/rectangles.hpp"


namespace convgain::eval {

std::int64_t StructureReport::total() const {
  std::int64_t n = 0;
  for (const auto& [area, count] : counts) n += count;
  return n;
}

StructureReport count_rectangles(const data::MaskMatrix& mask, Index t_min, Index s_min) {
  require(t_min >= 1 && s_min >= 1, "count_rectangles: t_min and s_min must be >= 1");
  StructureReport report;
  report.t_min = t_min;
  report.s_min = s_min;
  const Index n_t = mask.rows(), n_s = mask.cols();

  // down(t, s): consecutive missing cells starting at (t, s) going forward in time.
  Eigen::MatrixXi down = Eigen::MatrixXi::Zero(n_t + 1, n_s);
  for (Index s = 0; s < n_s; ++s) {
    for (Index t = n_t - 1; t >= 0; --t) down(t, s) = mask(t, s) == 0.0 ? down(t + 1, s) + 1 : 0;
  }

  for (Index t = 0; t + t_min <= n_t; ++t) {
    for (Index h = t_min; t + h <= n_t; ++h) {
      bool any = false;
      Index run = 0;
      // A run of L qualifying columns holds L - w + 1 placements of each width w <= L.
      auto flush = [&] {
        for (Index w = s_min; w <= run; ++w) report.counts[h * w] += run - w + 1;
        run = 0;
      };
      for (Index s = 0; s < n_s; ++s) {
        if (down(t, s) >= h) {
          ++run;
          any = true;
        } else {
          flush();
        }
      }
      flush();
      if (!any) break;
    }
  }
  return report;
}

StructureReport count_rectangles(const data::SurgeDataset& ds, Index t_min, Index s_min) {
  const auto order = data::order_nodes(ds);
  data::MaskMatrix ordered(ds.n_t(), ds.n_s());
  for (Index k = 0; k < ds.n_s(); ++k) ordered.col(k) = ds.mask.col(order[static_cast<std::size_t>(k)]);
  return count_rectangles(ordered, t_min, s_min);
}

std::vector<std::pair<Index, std::int64_t>> structure_histogram(const StructureReport& report,
                                                                Index area_cutoff) {
  std::vector<std::pair<Index, std::int64_t>> out;
  for (auto it = report.counts.lower_bound(area_cutoff); it != report.counts.end(); ++it) {
    out.emplace_back(it->first, it->second);
  }
  return out;
}

}  // namespace convgain::eval
