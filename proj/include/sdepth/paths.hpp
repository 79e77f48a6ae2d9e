#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sdepth/dataset.hpp"
#include "sdepth/scatter_depth.hpp"
#include "sdepth/spd.hpp"

namespace sdepth {

struct PathViolation {
  double t = 0.0;
  double deficit = 0.0;
};

/// Depth profile along a path on a uniform grid.
///
/// Quasi-concavity is checked against every pair of grid points, not only
/// the endpoints: the profile passes iff values[j] >= min(values[i],
/// values[l]) - 1e-12 for all i < j < l. The deficit at j is
/// min(max_{i<=j} values[i], max_{l>=j} values[l]) - values[j].
struct PathProfile {
  PathSpec path;
  std::vector<double> ts;
  std::vector<double> values;
  bool quasi_concave = true;
  std::optional<PathViolation> first_violation;
  double max_deficit = 0.0;
};

using MatrixDepth = std::function<double(const SpdMatrix&)>;

/// Generic profiler (analytic oracles, shape depths, ...). Requires m >= 3.
PathProfile depth_along_path(const PathSpec& path, int m, const MatrixDepth& depth);

/// Empirical scatter depth profile with the evaluator's shared directions.
PathProfile depth_along_path(const ScatterDepthEvaluator& ev, const PathSpec& path, int m);

PathProfile depth_along_path(const Dataset& d, const LocationSpec& t, const PathSpec& path, int m,
                             const DirectionBudget& dirs);

/// Quasi-concavity summary of an arbitrary sequence (used by the profilers).
void assess_quasi_concavity(PathProfile& profile, double slack = 1e-12);

}  // namespace sdepth
