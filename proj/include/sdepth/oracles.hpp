#pragma once

// Closed-form scatter and shape depths for the elliptical (in particular
// Gaussian) and independent-Cauchy reference models, plus samplers for them.

#include <functional>
#include <random>
#include <vector>

#include "sdepth/dataset.hpp"
#include "sdepth/spd.hpp"

namespace sdepth::oracles {

double normal_cdf(double x);
double normal_quantile(double p);
double cauchy_cdf(double x);
double cauchy_quantile(double p);

/// b = Phi^{-1}(3/4): the Gaussian model Z = W / b has MSD[Z_1] = 1.
double gaussian_msd_constant();

enum class ModelKind { GaussianMSD, IndependentCauchy, GenericElliptical };

struct EllipticalModel {
  ModelKind kind = ModelKind::GaussianMSD;
  Vector theta0;
  SpdMatrix sigma0 = SpdMatrix::identity(1);
  /// Cdf of |Z_1| (GenericElliptical only), standardized so that G(1) = 1/2
  /// (MSD[Z_1] = 1).
  std::function<double(double)> radial_cdf;

  static EllipticalModel gaussian(const Vector& theta0, const SpdMatrix& sigma0);
  static EllipticalModel independent_cauchy(int k);
  static EllipticalModel elliptical(std::function<double(double)> radial_cdf, const Vector& theta0,
                                    const SpdMatrix& sigma0);
  int dim() const { return sigma0.dim(); }
};

/// Eigenvalues (descending) of sigma0^{-1} sigma via sigma0^{-1/2} sigma sigma0^{-1/2}.
Vector pencil_eigenvalues(const SpdMatrix& sigma0, const SpdMatrix& sigma);

double gaussian_scatter_depth(const SpdMatrix& sigma0, const SpdMatrix& sigma);

/// Spectral interval [lo, hi] with Sigma in the order-alpha region iff
/// Sp(sigma0^{-1} sigma) lies inside it. Requires 0 < alpha <= 1/2.
Interval gaussian_region_bounds(double alpha);

/// Extrema of v' sigma v over the L1 unit sphere.
struct L1Extrema {
  double max_val = 0.0;
  double min_val = 0.0;
  int argmax = 0;             ///< index of the largest diagonal entry
  std::vector<int> argmin_sign;  ///< maximizing sign vector of s' sigma^{-1} s
};

/// Enumerates the 2^{k-1} sign vectors with s_k = +1; rejects k > 20.
L1Extrema l1_sphere_extrema(const SpdMatrix& sigma);

double cauchy_scatter_depth(const SpdMatrix& sigma);
bool cauchy_region_check(const SpdMatrix& sigma, double alpha);
/// (2/pi) arctan(k^{-1/4}), attained at sqrt(k) I_k.
double cauchy_max_depth(int k);

double elliptical_scatter_depth(const EllipticalModel& m, const SpdMatrix& sigma);

double gaussian_shape_depth(const SpdMatrix& v0, const SpdMatrix& v);
double cauchy_shape_depth(const SpdMatrix& v);

/// Depth of `sigma` under any model kind (dispatches to the closed forms).
double model_scatter_depth(const EllipticalModel& m, const SpdMatrix& sigma);

/// n draws from the model (rows), e.g. theta0 + sigma0^{1/2} W / b.
Matrix sample(const EllipticalModel& m, int n, std::mt19937_64& rng);

}  // namespace sdepth::oracles
