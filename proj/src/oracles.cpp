#include "sdepth/oracles.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

namespace sdepth::oracles {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile needs p in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double cauchy_cdf(double x) { return 0.5 + std::atan(x) / std::numbers::pi; }

double cauchy_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("Cauchy quantile needs p in (0, 1)");
  return std::tan(std::numbers::pi * (p - 0.5));
}

double gaussian_msd_constant() {
  static const double b = normal_quantile(0.75);
  return b;
}

EllipticalModel EllipticalModel::gaussian(const Vector& theta0, const SpdMatrix& sigma0) {
  if (theta0.size() != sigma0.dim()) throw DimensionMismatch("location and scatter dimensions differ");
  return {ModelKind::GaussianMSD, theta0, sigma0, {}};
}

EllipticalModel EllipticalModel::independent_cauchy(int k) {
  return {ModelKind::IndependentCauchy, Vector::Zero(k), SpdMatrix::identity(k), {}};
}

EllipticalModel EllipticalModel::elliptical(std::function<double(double)> radial_cdf, const Vector& theta0,
                                            const SpdMatrix& sigma0) {
  if (!radial_cdf) throw DomainError("radial cdf required");
  if (theta0.size() != sigma0.dim()) throw DimensionMismatch("location and scatter dimensions differ");
  const double g1 = radial_cdf(1.0);
  if (!std::isfinite(g1) || g1 < 0.0 || g1 > 1.0) throw DomainError("radial cdf must return probabilities");
  if (std::abs(g1 - 0.5) > 1e-3) {
    std::clog << "warning: radial cdf has G(1) = " << g1 << ", expected 0.5 (MSD standardization)\n";
  }
  return {ModelKind::GenericElliptical, theta0, sigma0, std::move(radial_cdf)};
}

Vector pencil_eigenvalues(const SpdMatrix& sigma0, const SpdMatrix& sigma) {
  if (sigma0.dim() != sigma.dim()) throw DimensionMismatch("scatter dimensions differ");
  const Matrix r = sigma0.inv_sqrt().entries();
  return SpdMatrix(r * sigma.entries() * r).eigenvalues();
}

double gaussian_scatter_depth(const SpdMatrix& sigma0, const SpdMatrix& sigma) {
  const Vector lambda = pencil_eigenvalues(sigma0, sigma);
  // Sigma = Sigma_0 up to rounding in the pencil.
  if ((lambda.array() - 1.0).abs().maxCoeff() <= 1e-12) return 0.5;
  const double b = gaussian_msd_constant();
  const double inner = normal_cdf(b * std::sqrt(lambda(lambda.size() - 1))) - 0.5;
  const double outer = 1.0 - normal_cdf(b * std::sqrt(lambda(0)));
  return 2.0 * std::min(inner, outer);
}

Interval gaussian_region_bounds(double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw DomainError("alpha must lie in (0, 1/2]");
  const double b = gaussian_msd_constant();
  const double lo = normal_quantile(0.5 + alpha / 2.0) / b;
  const double hi = normal_quantile(1.0 - alpha / 2.0) / b;
  return {lo * lo, hi * hi};
}

L1Extrema l1_sphere_extrema(const SpdMatrix& sigma) {
  const int k = sigma.dim();
  if (k > 20) throw DomainError("sign enumeration limited to k <= 20");
  L1Extrema out;
  const Vector diag = sigma.entries().diagonal();
  Eigen::Index arg = 0;
  out.max_val = diag.maxCoeff(&arg);
  out.argmax = static_cast<int>(arg);

  const Matrix inv = sigma.inverse().entries();
  double best = -1.0;
  Vector s(k);
  const std::uint64_t patterns = std::uint64_t{1} << (k - 1);
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    for (int j = 0; j < k - 1; ++j) s(j) = (mask >> j) & 1U ? -1.0 : 1.0;
    s(k - 1) = 1.0;
    const double q = s.dot(inv * s);
    if (q > best) {
      best = q;
      out.argmin_sign.assign(s.data(), s.data() + k);
    }
  }
  out.min_val = 1.0 / best;
  return out;
}

double cauchy_scatter_depth(const SpdMatrix& sigma) {
  const auto e = l1_sphere_extrema(sigma);
  const double inner = cauchy_cdf(std::sqrt(e.min_val)) - 0.5;
  const double outer = 1.0 - cauchy_cdf(std::sqrt(e.max_val));
  return 2.0 * std::min(inner, outer);
}

bool cauchy_region_check(const SpdMatrix& sigma, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const auto e = l1_sphere_extrema(sigma);
  const double q_in = cauchy_quantile(0.5 + alpha / 2.0);
  const double q_out = cauchy_quantile(1.0 - alpha / 2.0);
  return e.min_val >= q_in * q_in && e.max_val <= q_out * q_out;
}

double cauchy_max_depth(int k) {
  if (k < 1) throw DomainError("dimension must be positive");
  return 2.0 / std::numbers::pi * std::atan(std::pow(static_cast<double>(k), -0.25));
}

double elliptical_scatter_depth(const EllipticalModel& m, const SpdMatrix& sigma) {
  if (m.kind == ModelKind::GaussianMSD) return gaussian_scatter_depth(m.sigma0, sigma);
  if (m.kind != ModelKind::GenericElliptical || !m.radial_cdf) throw DomainError("generic elliptical model required");
  const Vector lambda = pencil_eigenvalues(m.sigma0, sigma);
  double depth = 1.0;
  for (double z : {lambda(0), lambda(lambda.size() - 1)}) {
    const double g = m.radial_cdf(std::sqrt(z));
    if (!std::isfinite(g) || g < 0.0 || g > 1.0) throw DomainError("radial cdf must return probabilities");
    depth = std::min({depth, g, 1.0 - g});
  }
  return depth;
}

double gaussian_shape_depth(const SpdMatrix& v0, const SpdMatrix& v) {
  const Vector lambda = pencil_eigenvalues(v0, v);
  const double r1 = std::sqrt(lambda(0));
  const double rk = std::sqrt(lambda(lambda.size() - 1));
  // Proportional shapes: sigma^2 V = Sigma_0 for some sigma^2.
  if (r1 - rk <= 1e-12 * r1) return 0.5;
  // Phi(c rk) - 1/2 increases and 1 - Phi(c r1) decreases in c.
  auto gap = [&](double c) { return normal_cdf(c * rk) - 0.5 - (1.0 - normal_cdf(c * r1)); };
  double lo = 0.0;
  double hi = 10.0 * gaussian_msd_constant() / rk;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (gap(mid) < 0.0 ? lo : hi) = mid;
  }
  const double c = 0.5 * (lo + hi);
  return 2.0 * normal_cdf(c * rk) - 1.0;
}

double cauchy_shape_depth(const SpdMatrix& v) {
  const auto e = l1_sphere_extrema(v);
  return 2.0 / std::numbers::pi * std::atan(std::pow(e.max_val / e.min_val, -0.25));
}

double model_scatter_depth(const EllipticalModel& m, const SpdMatrix& sigma) {
  switch (m.kind) {
    case ModelKind::GaussianMSD: return gaussian_scatter_depth(m.sigma0, sigma);
    case ModelKind::IndependentCauchy: return cauchy_scatter_depth(sigma);
    case ModelKind::GenericElliptical: return elliptical_scatter_depth(m, sigma);
  }
  throw DomainError("unknown model");
}

Matrix sample(const EllipticalModel& m, int n, std::mt19937_64& rng) {
  if (n < 1) throw DomainError("sample size must be positive");
  const int k = m.dim();
  Matrix z(n, k);
  switch (m.kind) {
    case ModelKind::GaussianMSD: {
      std::normal_distribution<double> gauss(0.0, 1.0);
      const double b = gaussian_msd_constant();
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) z(i, j) = gauss(rng) / b;
      }
      break;
    }
    case ModelKind::IndependentCauchy: {
      std::cauchy_distribution<double> cauchy(0.0, 1.0);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) z(i, j) = cauchy(rng);
      }
      return z.rowwise() + m.theta0.transpose();
    }
    case ModelKind::GenericElliptical:
      throw DomainError("sampling needs the full radial law, not only the cdf of |Z_1|");
  }
  Matrix x = z * m.sigma0.sqrt().entries();
  x.rowwise() += m.theta0.transpose();
  return x;
}

}  // namespace sdepth::oracles
