#pragma once

// Data-parallel inner loops of the depth computations.
//
// Every kernel comes as a pair: a plain serial reference and an OpenMP
// version. Both reduce exact integer counts with a (count, direction index)
// total order, so their results are bitwise identical for any thread count.
// The serial versions are kept for tests and for bench/bench_kernels.cpp.

#include <span>
#include <vector>

#include "sdepth/spd.hpp"

namespace sdepth {

/// Set the OpenMP thread count used by the parallel kernels (<= 0: all cores).
void set_num_threads(int threads);
int num_threads();

namespace kernels {

/// Minimum over directions of min(#inner, #outer), where for direction u the
/// inner count is #{i : (u'y_i)^2 <= u'Su} and the outer count is
/// #{i : (u'y_i)^2 >= u'Su}. Ties on the boundary count on both sides.
struct DirectionalMin {
  int count = 0;
  int direction = -1;  ///< first direction (lowest index) attaining the minimum
  bool inner_binding = true;
  int inner = 0;
  int outer = 0;
};

/// `centered` is n x k (one row per observation, already centered at the
/// location), `directions` is k x N with unit columns.
std::vector<DirectionalMin> scatter_min_serial(const Matrix& centered, const Matrix& directions,
                                               std::span<const SpdMatrix> scatters);
std::vector<DirectionalMin> scatter_min_parallel(const Matrix& centered, const Matrix& directions,
                                                 std::span<const SpdMatrix> scatters);

/// Per-level bounds of the scale profile sigma^2 -> depth(sigma^2 V) on a
/// fixed direction set. With z_{iu} = (u'y_i)^2 / u'Vu sorted per direction,
/// lower[l] = max_u z_{(l)} and upper[l] = min_u z_{(n-l+1)} for l = 1..n
/// (index 0 unused). Level l is reachable iff lower[l] <= upper[l].
struct ProfileBounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

ProfileBounds profile_bounds_serial(const Matrix& centered, const Matrix& directions, const SpdMatrix& shape);
ProfileBounds profile_bounds_parallel(const Matrix& centered, const Matrix& directions, const SpdMatrix& shape);

/// Squared projections (u'y_i)^2 sorted ascending, one column per direction
/// (n x N). Independent of the scatter, so it can be reused across calls.
Matrix sorted_square_projections_serial(const Matrix& centered, const Matrix& directions);
Matrix sorted_square_projections_parallel(const Matrix& centered, const Matrix& directions);

/// scatter_min and profile_bounds on a precomputed sorted table; results are
/// identical to the direct kernels.
std::vector<DirectionalMin> scatter_min_sorted_serial(const Matrix& sorted, const Matrix& directions,
                                                      std::span<const SpdMatrix> scatters);
std::vector<DirectionalMin> scatter_min_sorted_parallel(const Matrix& sorted, const Matrix& directions,
                                                        std::span<const SpdMatrix> scatters);
ProfileBounds profile_bounds_sorted_serial(const Matrix& sorted, const Matrix& directions, const SpdMatrix& shape);
ProfileBounds profile_bounds_sorted_parallel(const Matrix& sorted, const Matrix& directions, const SpdMatrix& shape);

/// Location halfspace depth count: min over directions of #{i : u'y_i >= 0}.
DirectionalMin location_min_serial(const Matrix& centered, const Matrix& directions);
DirectionalMin location_min_parallel(const Matrix& centered, const Matrix& directions);

/// Location depth counts of every observation taken as the candidate center:
/// out[j] = min_u #{i : u'(x_i - x_j) >= 0}. `points` is n x k, uncentered.
std::vector<int> sample_location_depths_serial(const Matrix& points, const Matrix& directions);
std::vector<int> sample_location_depths_parallel(const Matrix& points, const Matrix& directions);

/// Maximum over directions of #{i : |u'y_i| <= tol}.
int hyperplane_mass_parallel(const Matrix& centered, const Matrix& directions, double tol);

}  // namespace kernels
}  // namespace sdepth
