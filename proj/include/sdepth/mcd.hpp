#pragma once

#include <cstdint>
#include <vector>

#include "sdepth/dataset.hpp"
#include "sdepth/spd.hpp"

namespace sdepth {

struct McdOptions {
  int h = 0;  ///< subset size; 0 selects floor((n + k + 1) / 2)
  int n_starts = 50;
  std::uint64_t seed = 0;
  int max_csteps = 500;
};

struct McdFit {
  std::vector<int> subset_indices;  ///< sorted
  Vector location;                  ///< mean of the subset
  SpdMatrix raw_scatter;            ///< subset covariance times consistency_factor
  double consistency_factor = 1.0;
  double subset_log_det = 0.0;  ///< log det of the unscaled subset covariance
  int h = 0;
};

int default_mcd_h(int n, int k);

/// FastMCD without reweighting: random (k+1)-subsets (enlarged while
/// singular), C-steps until the relative determinant decrease drops below
/// 1e-12, minimum-determinant fit kept. The consistency factor is
/// median(d_i^2) / chi2_{k,0.5} with d_i the Mahalanobis distances of all
/// observations under the raw fit.
McdFit fast_mcd(const Dataset& d, const McdOptions& options = {});

}  // namespace sdepth
