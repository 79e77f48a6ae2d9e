#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sdepth/dataset.hpp"
#include "sdepth/directions.hpp"
#include "sdepth/kernels.hpp"
#include "sdepth/spd.hpp"

namespace sdepth {

enum class BindingSide { Inner, Outer };

std::string to_string(BindingSide side);

struct DepthEvaluation {
  double value = 0.0;
  int count = 0;  ///< value * n
  Vector argmin_direction;
  BindingSide binding_side = BindingSide::Inner;
  int n_directions_used = 0;
};

/// Scatter depth of many matrices against one centered sample and one
/// direction set. Holding both fixed is what makes the finite-direction
/// estimate quasi-concave along linear paths and lets callers compare values
/// across matrices without re-sampling noise.
class ScatterDepthEvaluator {
 public:
  /// Centers at `theta` and draws directions from `budget`.
  ScatterDepthEvaluator(const Dataset& d, const Vector& theta, const DirectionBudget& budget);
  /// Rows of `centered` are already y_i = x_i - T.
  ScatterDepthEvaluator(Matrix centered, const DirectionBudget& budget);
  /// Explicit k x N direction matrix with unit columns.
  ScatterDepthEvaluator(Matrix centered, Matrix directions);

  int n() const { return static_cast<int>(centered_.rows()); }
  int k() const { return static_cast<int>(centered_.cols()); }
  bool exact() const { return exact_; }
  const Matrix& centered() const { return centered_; }
  const Matrix& directions() const { return directions_; }
  int directions_used() const;

  DepthEvaluation evaluate(const SpdMatrix& sigma) const;
  std::vector<DepthEvaluation> evaluate_batch(std::span<const SpdMatrix> sigmas) const;
  int count(const SpdMatrix& sigma) const { return evaluate(sigma).count; }

  /// Per-level scale bounds along the ray sigma^2 * shape (sampled directions
  /// only; see kernels::ProfileBounds).
  kernels::ProfileBounds profile_bounds(const SpdMatrix& shape) const;

 private:
  struct ProjectionCache;
  const Matrix* sorted_table(bool force) const;

  Matrix centered_;
  Matrix directions_;
  bool exact_ = false;
  std::shared_ptr<ProjectionCache> cache_;
};

DepthEvaluation scatter_depth(const Dataset& d, const LocationSpec& t, const SpdMatrix& sigma,
                              const DirectionBudget& dirs);

/// Concentration depth of gamma is the scatter depth of gamma^{-1}.
DepthEvaluation concentration_depth(const Dataset& d, const LocationSpec& t, const SpdMatrix& gamma,
                                    const DirectionBudget& dirs);

/// Best fixed-location scatter depth over at most `theta_budget` candidate
/// locations: the Tukey median, the coordinatewise median, the observations,
/// then Nelder-Mead refinements. A lower bound of the supremum over theta.
DepthEvaluation scatter_depth_sup_location(const Dataset& d, const SpdMatrix& sigma, const DirectionBudget& dirs,
                                           int theta_budget);

/// Scatter depth at location 0 of the differences x_i - x_j (i != j). When
/// pair_budget < n(n-1), a seeded uniform subsample of ordered pairs is used.
DepthEvaluation pairwise_difference_depth(const Dataset& d, const SpdMatrix& sigma, const DirectionBudget& dirs,
                                          std::int64_t pair_budget);

bool region_contains(const Dataset& d, const LocationSpec& t, const SpdMatrix& sigma, double alpha,
                     const DirectionBudget& dirs);

}  // namespace sdepth
