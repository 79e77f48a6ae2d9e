#pragma once

#include <span>
#include <string>
#include <vector>

#include "sdepth/directions.hpp"
#include "sdepth/spd.hpp"

namespace sdepth {

/// Empirical measure: n x k observations (one row each), optional row tags.
class Dataset {
 public:
  explicit Dataset(Matrix obs, std::vector<std::string> tags = {});

  int n() const { return static_cast<int>(obs_.rows()); }
  int k() const { return static_cast<int>(obs_.cols()); }
  const Matrix& obs() const { return obs_; }
  const std::vector<std::string>& tags() const { return tags_; }

  /// Rows y_i = x_i - theta.
  Matrix centered(const Vector& theta) const;
  /// The dataset {A x_i + b}.
  Dataset transformed(const Matrix& a, const Vector& b) const;

 private:
  Matrix obs_;
  std::vector<std::string> tags_;
};

/// Reads the CSV layout: header row, optional leading `timestamp` or
/// `window` column (kept as tags), then k numeric columns.
Dataset load_dataset_csv(const std::string& path);

enum class LocationKind { TukeyMedian, Fixed, CoordMedian };

struct LocationSpec {
  LocationKind kind = LocationKind::TukeyMedian;
  Vector theta;  ///< only for Fixed
  /// Cap on the number of sampled directions used by the Tukey median search.
  int tukey_directions = 200;

  static LocationSpec tukey() { return {}; }
  static LocationSpec fixed(Vector theta) { return {LocationKind::Fixed, std::move(theta)}; }
  static LocationSpec coord_median() { return {LocationKind::CoordMedian, {}}; }
};

/// Directions actually used for a budget in dimension k (k x N). For k = 1
/// this is always {+1, -1}, which is exhaustive.
Matrix location_directions(int k, const DirectionBudget& budget);

double location_depth(const Dataset& d, const Vector& theta, const DirectionBudget& dirs);

/// Coordinatewise median (midpoint of the two middle order statistics).
Vector coordinate_median(const Dataset& d);

/// Approximate Tukey median: the mean of all evaluated candidates with
/// maximal location depth, the candidates being every observation, the
/// coordinatewise median, and Nelder-Mead refinements started from the five
/// best of those. Exact for k = 1 (midpoint of the median interval).
Vector tukey_median(const Dataset& d, const DirectionBudget& dirs);

/// Evaluates T for the given data. The Tukey median uses at most
/// `spec.tukey_directions` of the budget's directions.
Vector resolve_location(const Dataset& d, const LocationSpec& spec, const DirectionBudget& dirs);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
};

/// Argmax interval of s -> min(#{(x - c)^2 <= s}, #{(x - c)^2 >= s}).
Interval msd_interval(std::span<const double> x, double center);

struct AlphaEstimate {
  double s = 0.0;
  double alpha = 0.0;
};

/// Largest empirical mass on a hyperplane through T (tolerance 1e-12 times the
/// data scale). For k = 2 every hyperplane through T and an observation is
/// enumerated, so s is exact.
AlphaEstimate estimate_alpha(const Dataset& d, const LocationSpec& spec, const DirectionBudget& dirs);

}  // namespace sdepth
