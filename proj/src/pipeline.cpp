#include "sdepth/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <map>
#include <sstream>

#include "sdepth/io.hpp"
#include "sdepth/scatter_depth.hpp"

namespace sdepth {

namespace {

std::string calendar_day(const std::string& ts) {
  const bool ok = ts.size() >= 10 && ts[4] == '-' && ts[7] == '-' &&
                  std::all_of(ts.begin(), ts.begin() + 4, ::isdigit) && std::isdigit(ts[5]) && std::isdigit(ts[6]) &&
                  std::isdigit(ts[8]) && std::isdigit(ts[9]);
  if (!ok) throw io::FormatError("timestamp is not RFC 3339: '" + ts + "'");
  return ts.substr(0, 10);
}

}  // namespace

WindowedSeries WindowedSeries::from_tagged(const Dataset& d, bool by_day, int min_rows) {
  if (d.tags().empty()) throw DomainError("windowing needs a timestamp or window column");
  if (min_rows < 1) throw DomainError("min_rows must be positive");
  std::vector<std::string> order;
  std::map<std::string, std::vector<int>> rows;
  for (int i = 0; i < d.n(); ++i) {
    const std::string label = by_day ? calendar_day(d.tags()[static_cast<std::size_t>(i)]) : d.tags()[static_cast<std::size_t>(i)];
    auto [it, inserted] = rows.try_emplace(label);
    if (inserted) order.push_back(label);
    it->second.push_back(i);
  }
  WindowedSeries ws;
  ws.min_rows = min_rows;
  for (const auto& label : order) {
    const auto& idx = rows.at(label);
    if (static_cast<int>(idx.size()) < min_rows) {
      ws.dropped.push_back(label);
      continue;
    }
    Matrix x(static_cast<Eigen::Index>(idx.size()), d.k());
    for (std::size_t r = 0; r < idx.size(); ++r) x.row(static_cast<Eigen::Index>(r)) = d.obs().row(idx[r]);
    ws.windows.push_back({label, Dataset(std::move(x))});
  }
  return ws;
}

Dataset WindowedSeries::pooled() const {
  if (windows.empty()) throw DomainError("no retained windows");
  std::vector<const Window*> sorted;
  for (const auto& w : windows) sorted.push_back(&w);
  std::sort(sorted.begin(), sorted.end(), [](const Window* a, const Window* b) { return a->label < b->label; });
  Eigen::Index total = 0;
  for (const auto* w : sorted) total += w->data.n();
  Matrix x(total, windows.front().data.k());
  Eigen::Index r = 0;
  for (const auto* w : sorted) {
    x.middleRows(r, w->data.n()) = w->data.obs();
    r += w->data.n();
  }
  return Dataset(std::move(x));
}

double quantile_type7(std::vector<double> v, double p) {
  if (v.empty()) throw DomainError("quantile of an empty collection");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

GlobalBaseline global_baseline(const Dataset& full, const DirectionBudget& dirs, const McdOptions& mcd,
                               const LocationSpec& location) {
  GlobalBaseline g;
  g.mcd_scatter = fast_mcd(full, mcd).raw_scatter;
  g.shape = ShapeMatrix::normalize(g.mcd_scatter, ScaleFunctional::Sdet).v;
  const ScatterDepthEvaluator ev(full, resolve_location(full, location, dirs), dirs);
  const auto sh = shape_depth(ev, g.shape);
  g.sigma2 = sh.sigma2;
  g.scaled_scatter = g.shape.scaled(g.sigma2);
  g.shape_depth = sh.value;
  g.scatter_depth = ev.evaluate(g.scaled_scatter).value;
  return g;
}

DetectionReport detect(const WindowedSeries& ws, const DetectionConfig& config) {
  if (ws.windows.size() < 4) throw DomainError("detection needs at least 4 retained windows");
  DetectionReport report;
  report.dropped = ws.dropped;
  report.global = global_baseline(ws.pooled(), config.dirs, config.mcd, config.location);
  const auto& g = report.global;
  const double probe[] = {g.sigma2};

  report.windows.resize(ws.windows.size());
  const auto n_windows = static_cast<std::ptrdiff_t>(ws.windows.size());
  std::vector<std::exception_ptr> errors(ws.windows.size());
  // One window per thread; the kernels inside run serially in nested regions.
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t w = 0; w < n_windows; ++w) {
    try {
      const auto& win = ws.windows[static_cast<std::size_t>(w)];
      const ScatterDepthEvaluator ev(win.data, resolve_location(win.data, config.location, config.dirs), config.dirs);
      const SpdMatrix fit = fast_mcd(win.data, config.mcd).raw_scatter;
      const SpdMatrix fit_shape = ShapeMatrix::normalize(fit, ScaleFunctional::Sdet).v;
      WindowReport& r = report.windows[static_cast<std::size_t>(w)];
      r.label = win.label;
      r.n = win.data.n();
      r.depth_sc = ev.evaluate(g.scaled_scatter).value;
      r.depth_sh = shape_depth(ev, g.shape, probe).value;
      r.df_sc = frobenius_distance(fit, g.mcd_scatter);
      r.df_sh = frobenius_distance(fit_shape, g.shape);
      r.dg_sc = geodesic_distance(fit, g.mcd_scatter);
      r.dg_sh = geodesic_distance(fit_shape, g.shape);
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  auto fence_of = [&](double WindowReport::*field) {
    std::vector<double> v;
    for (const auto& r : report.windows) v.push_back(r.*field);
    Fence f;
    f.q1 = quantile_type7(v, 0.25);
    f.q3 = quantile_type7(v, 0.75);
    f.lower = f.q1 - 1.5 * (f.q3 - f.q1);
    return f;
  };
  report.fence_sc = fence_of(&WindowReport::depth_sc);
  report.fence_sh = fence_of(&WindowReport::depth_sh);
  for (auto& r : report.windows) {
    r.flag_sc = r.depth_sc < report.fence_sc.lower;
    r.flag_sh = r.depth_sh < report.fence_sh.lower;
  }
  return report;
}

nlohmann::json report_to_json(const DetectionReport& report) {
  const auto& g = report.global;
  nlohmann::json out;
  out["global"] = {
      {"mcd_scatter", io::matrix_to_json(g.mcd_scatter.entries())},
      {"shape", io::matrix_to_json(g.shape.entries())},
      {"sigma2", g.sigma2},
      {"scaled_scatter", io::matrix_to_json(g.scaled_scatter.entries())},
      {"scatter_depth", g.scatter_depth},
      {"shape_depth", g.shape_depth},
  };
  out["fences"] = {
      {"scatter", {{"q1", report.fence_sc.q1}, {"q3", report.fence_sc.q3}, {"lower", report.fence_sc.lower}}},
      {"shape", {{"q1", report.fence_sh.q1}, {"q3", report.fence_sh.q3}, {"lower", report.fence_sh.lower}}},
  };
  out["dropped"] = report.dropped;
  nlohmann::json windows = nlohmann::json::array();
  for (const auto& r : report.windows) {
    nlohmann::json flags = nlohmann::json::array();
    if (r.flag_sc) flags.push_back("ScatterOutlier");
    if (r.flag_sh) flags.push_back("ShapeOutlier");
    windows.push_back({{"label", r.label},
                       {"n", r.n},
                       {"scatter_depth_of_global", r.depth_sc},
                       {"shape_depth_of_global", r.depth_sh},
                       {"dF_scatter", r.df_sc},
                       {"dF_shape", r.df_sh},
                       {"dg_scatter", r.dg_sc},
                       {"dg_shape", r.dg_sh},
                       {"flags", flags}});
  }
  out["windows"] = windows;
  return out;
}

std::string report_to_csv(const DetectionReport& report) {
  std::ostringstream out;
  out << "label,depth_sc,depth_sh,dF_sc,dF_sh,dg_sc,dg_sh,flag_sc,flag_sh\n";
  for (const auto& r : report.windows) {
    out << r.label << ',' << io::format_double(r.depth_sc) << ',' << io::format_double(r.depth_sh) << ','
        << io::format_double(r.df_sc) << ',' << io::format_double(r.df_sh) << ',' << io::format_double(r.dg_sc) << ','
        << io::format_double(r.dg_sh) << ',' << (r.flag_sc ? 1 : 0) << ',' << (r.flag_sh ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace sdepth
