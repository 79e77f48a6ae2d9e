#pragma once

// Exact infimum over the unit circle for bivariate data.
//
// For u = (cos t, sin t), observation y contributes to the inner count of a
// scatter S iff q(t) = u'(yy' - S)u <= 0, so each observation changes side
// only at the (at most two) roots of this binary quadratic form. Sorting
// those critical angles and sweeping the half circle gives the exact depth in
// O(n log n). Location depth is handled the same way with the closed
// half-circles {u : u'y >= 0}.
//
// The *_reference functions evaluate every arc of the arrangement directly in
// O(n^2), using an independent root formula (quadratic in tan t). They are
// kept for tests.

#include <vector>

#include "sdepth/spd.hpp"

namespace sdepth::exact2d {

struct AngleMin {
  int count = 0;
  double angle = 0.0;  ///< a direction angle attaining the minimum
  bool inner_binding = true;
  int inner = 0;
  int outer = 0;
  int angles_evaluated = 0;
};

/// `centered` is n x 2.
AngleMin scatter_min(const Matrix& centered, const SpdMatrix& sigma);
AngleMin scatter_min_reference(const Matrix& centered, const SpdMatrix& sigma);

/// Sorted, deduplicated (1e-12) critical angles in [0, pi).
std::vector<double> scatter_critical_angles(const Matrix& centered, const SpdMatrix& sigma);

/// min over u of #{i : u'y_i >= 0}; `centered` is n x 2 (data minus theta).
AngleMin location_min(const Matrix& centered);
AngleMin location_min_reference(const Matrix& centered);

}  // namespace sdepth::exact2d
