#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sdepth/dataset.hpp"
#include "sdepth/scatter_depth.hpp"
#include "sdepth/shape.hpp"
#include "sdepth/spd.hpp"

namespace sdepth {

struct SearchOptions {
  int starts = 8;
  double initial_step = 0.5;
  double final_step = 1e-4;
  std::uint64_t seed = 0;
  int mcd_starts = 50;
  std::size_t max_near = 400;
  int max_evaluations_per_start = 5000;
};

struct DeepestResult {
  SpdMatrix argmax = SpdMatrix::identity(1);
  double value = 0.0;
  int count = 0;
  double sigma2 = 1.0;  ///< shape search only: maximizing scale of argmax
  std::vector<SpdMatrix> near_maximizers;
  SpdMatrix representative = SpdMatrix::identity(1);
  double representative_value = 0.0;
  std::string representative_rule;  ///< "karcher", "arithmetic" or "argmax"
  int evaluations = 0;
};

/// Pattern search over the log-Cholesky parametrization Sigma = C L L' C',
/// with C the Cholesky factor of the start and L lower triangular with
/// log-diagonal coordinates. Coordinates are polled at +-step; the best strict
/// improvement is taken, otherwise the step is halved from initial_step down
/// to final_step. Ties keep the incumbent.
///
/// The representative is the Karcher mean of the distinct evaluated points
/// within one level (1/n) of the maximum. If its depth falls below
/// value - 1/n the arithmetic mean is used instead; for scatter this is
/// guaranteed to be deep enough because every one-direction constraint is
/// linear in Sigma.
DeepestResult deepest_scatter(const ScatterDepthEvaluator& ev, std::span<const SpdMatrix> starts,
                              const SearchOptions& options = {});

/// As deepest_scatter with objective shape_depth and every candidate
/// renormalized to S(V) = 1.
DeepestResult deepest_shape(const ScatterDepthEvaluator& ev, ScaleFunctional s, std::span<const SpdMatrix> starts,
                            const SearchOptions& options = {});

/// Multi-start set: profile-scaled plug-in covariance, profile-scaled MCD
/// scatter, then c * I for scales c spread around the profile anchor (or,
/// for shapes, random perturbations of the identity).
std::vector<SpdMatrix> default_starts(const Dataset& d, const ScatterDepthEvaluator& ev, const SearchOptions& options,
                                      bool for_shape);

DeepestResult deepest_scatter(const Dataset& d, const LocationSpec& t, const DirectionBudget& dirs,
                              const SearchOptions& options = {});
DeepestResult deepest_shape(const Dataset& d, const LocationSpec& t, ScaleFunctional s, const DirectionBudget& dirs,
                            const SearchOptions& options = {});

}  // namespace sdepth
