#include "sdepth/paths.hpp"

#include <algorithm>

namespace sdepth {

namespace {

std::vector<double> uniform_grid(int m) {
  if (m < 3) throw DomainError("path grid needs at least 3 points");
  std::vector<double> ts(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) ts[static_cast<std::size_t>(i)] = static_cast<double>(i) / (m - 1);
  ts.back() = 1.0;
  return ts;
}

}  // namespace

void assess_quasi_concavity(PathProfile& p, double slack) {
  const std::size_t m = p.values.size();
  std::vector<double> prefix(m);
  std::vector<double> suffix(m);
  for (std::size_t i = 0; i < m; ++i) prefix[i] = i ? std::max(prefix[i - 1], p.values[i]) : p.values[i];
  for (std::size_t i = m; i-- > 0;) suffix[i] = i + 1 < m ? std::max(suffix[i + 1], p.values[i]) : p.values[i];
  p.quasi_concave = true;
  p.first_violation.reset();
  p.max_deficit = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double deficit = std::min(prefix[j], suffix[j]) - p.values[j];
    p.max_deficit = std::max(p.max_deficit, deficit);
    if (deficit > slack && p.quasi_concave) {
      p.quasi_concave = false;
      p.first_violation = PathViolation{p.ts[j], deficit};
    }
  }
}

PathProfile depth_along_path(const PathSpec& path, int m, const MatrixDepth& depth) {
  PathProfile p{path, uniform_grid(m), {}, true, std::nullopt, 0.0};
  p.values.reserve(p.ts.size());
  for (double t : p.ts) p.values.push_back(depth(path_point(path, t)));
  assess_quasi_concavity(p);
  return p;
}

PathProfile depth_along_path(const ScatterDepthEvaluator& ev, const PathSpec& path, int m) {
  const auto ts = uniform_grid(m);
  std::vector<SpdMatrix> points;
  points.reserve(ts.size());
  for (double t : ts) points.push_back(path_point(path, t));
  PathProfile p{path, ts, {}, true, std::nullopt, 0.0};
  for (const auto& e : ev.evaluate_batch(points)) p.values.push_back(e.value);
  assess_quasi_concavity(p);
  return p;
}

PathProfile depth_along_path(const Dataset& d, const LocationSpec& t, const PathSpec& path, int m,
                             const DirectionBudget& dirs) {
  if (path.a.dim() != d.k()) throw DimensionMismatch("path dimension differs from data");
  const Vector theta = resolve_location(d, t, dirs);
  return depth_along_path(ScatterDepthEvaluator(d, theta, dirs), path, m);
}

}  // namespace sdepth
