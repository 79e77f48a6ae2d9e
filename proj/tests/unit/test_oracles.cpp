#include <cmath>
#include <random>

#include <doctest.h>

#include "brute.hpp"
#include "sdepth/oracles.hpp"
#include "sdepth/scatter_depth.hpp"

using namespace sdepth;
using namespace sdepth::oracles;

namespace {

// Dense directions plus the coordinate axes, where the L1 norm has kinks.
Matrix dense_dirs(int k, std::mt19937_64& rng) {
  const Matrix base = k == 2 ? brute::circle(20000) : brute::sphere(k, 200000, rng);
  Matrix out(k, base.cols() + k);
  out << base, Matrix::Identity(k, k);
  return out;
}

}  // namespace

TEST_CASE("normal and Cauchy primitives") {
  CHECK(gaussian_msd_constant() == doctest::Approx(brute::kB).epsilon(1e-15));
  CHECK(normal_cdf(gaussian_msd_constant()) == doctest::Approx(0.75).epsilon(1e-15));
  for (double p : {1e-10, 0.01, 0.3, 0.5, 0.9, 1 - 1e-9}) {
    CHECK(brute::phi(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK(cauchy_quantile(0.75) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cauchy_cdf(1.0) == 0.75);
  CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
}

TEST_CASE("Gaussian closed form against a direction infimum") {
  CHECK(gaussian_scatter_depth(SpdMatrix::identity(3), SpdMatrix::identity(3)) == doctest::Approx(0.5).epsilon(1e-15));
  const double b = brute::kB;
  CHECK(gaussian_scatter_depth(SpdMatrix::identity(2), SpdMatrix::diagonal({4, 1})) ==
        doctest::Approx(2 * (1 - brute::phi(2 * b))).epsilon(1e-14));
  CHECK(gaussian_scatter_depth(SpdMatrix::identity(2), SpdMatrix::diagonal({4, 1})) ==
        doctest::Approx(0.17737).epsilon(1e-4));

  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 40; ++rep) {
    const int k = 2 + rep % 2;
    const Matrix s0 = brute::random_spd(k, rng, 1.0), s = brute::random_spd(k, rng, 1.0);
    const double closed = gaussian_scatter_depth(SpdMatrix(s0), SpdMatrix(s));
    const double grid = brute::gaussian_depth_dirs(s0, s, dense_dirs(k, rng));
    CHECK(closed <= grid + 1e-12);
    CHECK(closed == doctest::Approx(grid).epsilon(k == 2 ? 1e-6 : 5e-3));
  }

  // Congruence by an orthogonal matrix does not change the value.
  const Matrix o = brute::random_orthogonal(3, rng);
  const Matrix rot = o * Matrix(Vector::Ones(3).cwiseProduct((Vector(3) << 8, 1, 1).finished()).asDiagonal()) *
                     o.transpose();
  CHECK(gaussian_scatter_depth(SpdMatrix::identity(3), SpdMatrix(0.5 * (rot + rot.transpose()))) ==
        doctest::Approx(gaussian_scatter_depth(SpdMatrix::identity(3), SpdMatrix::diagonal({8, 1, 1}))));
}

TEST_CASE("Gaussian closed form against Monte Carlo") {
  std::mt19937_64 rng(2);
  const auto model = EllipticalModel::gaussian(Vector::Zero(2), SpdMatrix::identity(2));
  const Matrix x = sample(model, 100000, rng);
  const ScatterDepthEvaluator ev(x, brute::circle(720));
  const double mc = ev.evaluate(SpdMatrix::diagonal({4, 1})).value;
  CHECK(mc == doctest::Approx(0.17737).epsilon(0.02));
}

TEST_CASE("Gaussian region bounds") {
  const double b = brute::kB;
  const auto r2 = gaussian_region_bounds(0.2);
  CHECK(r2.lo == doctest::Approx(std::pow(normal_quantile(0.6) / b, 2)).epsilon(1e-14));
  CHECK(r2.hi == doctest::Approx(std::pow(normal_quantile(0.9) / b, 2)).epsilon(1e-14));
  const auto r4 = gaussian_region_bounds(0.4);
  CHECK(r4.lo > r2.lo);
  CHECK(r4.hi < r2.hi);
  const auto r5 = gaussian_region_bounds(0.5);
  CHECK(r5.lo == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r5.hi == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian_region_bounds(0.6), DomainError);

  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 300; ++rep) {
    const SpdMatrix s(brute::random_spd(3, rng, 1.0));
    const Vector ev = pencil_eigenvalues(SpdMatrix::identity(3), s);
    const bool inside = ev.minCoeff() >= r2.lo && ev.maxCoeff() <= r2.hi;
    const double depth = gaussian_scatter_depth(SpdMatrix::identity(3), s);
    if (std::abs(depth - 0.2) > 1e-12) CHECK(inside == (depth >= 0.2));
  }
}

TEST_CASE("L1-sphere extrema") {
  auto e = l1_sphere_extrema(SpdMatrix::identity(2));
  CHECK(e.max_val == 1.0);
  CHECK(e.min_val == doctest::Approx(0.5));
  Matrix m(2, 2);
  m << 3, 1, 1, 1;
  e = l1_sphere_extrema(SpdMatrix(m));
  CHECK(e.max_val == 3.0);
  CHECK(e.min_val == doctest::Approx(1.0 / 3.0));
  e = l1_sphere_extrema(SpdMatrix::diagonal({2, 5}));
  CHECK(e.max_val == 5.0);
  CHECK(e.min_val == doctest::Approx(10.0 / 7.0));
  CHECK(e.argmax == 1);

  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 30; ++rep) {
    const int k = 2 + rep % 2;
    const Matrix s = brute::random_spd(k, rng);
    const auto [mx, mn] = brute::l1_grid_extrema(s, k == 2 ? 10000 : 100000);
    const auto got = l1_sphere_extrema(SpdMatrix(s));
    CHECK(got.max_val == doctest::Approx(mx).epsilon(1e-4));
    CHECK(got.min_val == doctest::Approx(mn).epsilon(1e-3));
    CHECK(got.min_val <= mn + 1e-12);
  }
  CHECK_THROWS_AS(l1_sphere_extrema(SpdMatrix::identity(21)), DomainError);
}

TEST_CASE("Cauchy closed forms") {
  CHECK(cauchy_scatter_depth(SpdMatrix::diagonal({1.0})) == doctest::Approx(0.5).epsilon(1e-15));
  const double c2 = 2.0 / brute::kPi * std::atan(std::pow(2.0, -0.25));
  CHECK(cauchy_scatter_depth(SpdMatrix::diagonal({std::sqrt(2.0), std::sqrt(2.0)})) ==
        doctest::Approx(c2).epsilon(1e-14));
  CHECK(c2 == doctest::Approx(0.445115).epsilon(1e-6));
  CHECK(cauchy_scatter_depth(SpdMatrix::identity(2)) ==
        doctest::Approx(2.0 / brute::kPi * std::atan(1.0 / std::sqrt(2.0))).epsilon(1e-14));
  CHECK(cauchy_scatter_depth(SpdMatrix::identity(2)) == doctest::Approx(0.3918).epsilon(1e-4));
  for (int k = 1; k <= 6; ++k) {
    const SpdMatrix star = SpdMatrix::identity(k).scaled(std::sqrt(double(k)));
    CHECK(cauchy_scatter_depth(star) == doctest::Approx(cauchy_max_depth(k)).epsilon(1e-13));
    CHECK(cauchy_region_check(star, cauchy_max_depth(k) - 1e-9));
    CHECK(!cauchy_region_check(star, cauchy_max_depth(k) + 1e-9));
  }

  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const int k = 2 + rep % 2;
    const Matrix s = brute::random_spd(k, rng, 1.0);
    const double closed = cauchy_scatter_depth(SpdMatrix(s));
    const double grid = brute::cauchy_depth_dirs(s, dense_dirs(k, rng));
    CHECK(closed <= grid + 1e-12);
    CHECK(closed == doctest::Approx(grid).epsilon(k == 2 ? 1e-5 : 5e-3));
    for (double alpha : {0.1, 0.3, 0.4}) CHECK(cauchy_region_check(SpdMatrix(s), alpha) == (closed >= alpha));
  }
}

TEST_CASE("Cauchy closed form against Monte Carlo") {
  std::mt19937_64 rng(6);
  const Matrix x = sample(EllipticalModel::independent_cauchy(2), 100000, rng);
  const ScatterDepthEvaluator ev(x, brute::circle(720));
  CHECK(ev.evaluate(SpdMatrix::identity(2)).value == doctest::Approx(0.3918).epsilon(0.02));
}

TEST_CASE("generic elliptical depth") {
  // Gaussian-MSD radial law written out explicitly.
  const double b = brute::kB;
  auto g = [b](double r) { return 2.0 * brute::phi(b * r) - 1.0; };
  const auto m = EllipticalModel::elliptical(g, Vector::Zero(2), SpdMatrix::identity(2));
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const SpdMatrix s(brute::random_spd(2, rng));
    CHECK(elliptical_scatter_depth(m, s) == doctest::Approx(gaussian_scatter_depth(SpdMatrix::identity(2), s)).epsilon(1e-12));
  }
  CHECK(elliptical_scatter_depth(m, SpdMatrix::identity(2)) == doctest::Approx(0.5));

  // Student t_3 scaled to MSD 1: depth of c * I depends on c through G(sqrt c).
  auto t3_cdf = [](double t) {
    const double x = t / std::sqrt(3.0);
    return 0.5 + (std::atan(x) + x / (1 + x * x)) / brute::kPi;
  };
  double lo = 0.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (t3_cdf(mid) < 0.75 ? lo : hi) = mid;
  }
  const double q = lo;
  auto g3 = [&](double r) { return 2.0 * t3_cdf(q * r) - 1.0; };
  const auto t3 = EllipticalModel::elliptical(g3, Vector::Zero(3), SpdMatrix::identity(3));
  for (double c : {0.3, 0.8, 1.0, 2.0, 5.0}) {
    const double direct = std::min(g3(std::sqrt(c)), 1 - g3(std::sqrt(c)));
    CHECK(elliptical_scatter_depth(t3, SpdMatrix::identity(3).scaled(c)) == doctest::Approx(direct).epsilon(1e-12));
  }
  std::mt19937_64 r2(1);
  CHECK_THROWS_AS(sample(t3, 10, r2), DomainError);
}

TEST_CASE("shape closed forms") {
  std::mt19937_64 rng(8);
  const SpdMatrix v0(brute::random_spd(3, rng));
  CHECK(gaussian_shape_depth(v0, v0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(gaussian_shape_depth(v0, v0.scaled(7.0)) == doctest::Approx(0.5).epsilon(1e-12));
  for (int k = 1; k <= 6; ++k) {
    CHECK(cauchy_shape_depth(SpdMatrix::identity(k)) == doctest::Approx(cauchy_max_depth(k)).epsilon(1e-12));
    CHECK(cauchy_shape_depth(SpdMatrix::identity(k).scaled(2.0)) == doctest::Approx(cauchy_max_depth(k)).epsilon(1e-12));
  }

  // Profile maximization of the closed-form scatter depth over a log sigma^2 grid,
  // refined around the coarse maximizer (the maximum sits on a kink).
  auto grid_max = [](auto&& f) {
    double best = -1.0, at = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      const double t = -6.0 + 12.0 * i / 4000;
      if (const double val = f(std::exp(t)); val > best) best = val, at = t;
    }
    const double h = 12.0 / 4000;
    for (int i = 0; i <= 40000; ++i) best = std::max(best, f(std::exp(at - h + 2 * h * i / 40000)));
    return best;
  };
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix v = brute::random_spd(2, rng);
    const double best_g =
        grid_max([&](double s2) { return gaussian_scatter_depth(SpdMatrix::identity(2), SpdMatrix(v * s2)); });
    const double best_c = grid_max([&](double s2) { return cauchy_scatter_depth(SpdMatrix(v * s2)); });
    CHECK(gaussian_shape_depth(SpdMatrix::identity(2), SpdMatrix(v)) == doctest::Approx(best_g).epsilon(1e-6));
    CHECK(gaussian_shape_depth(SpdMatrix::identity(2), SpdMatrix(v)) >= best_g - 1e-12);
    CHECK(cauchy_shape_depth(SpdMatrix(v)) == doctest::Approx(best_c).epsilon(1e-6));
    CHECK(cauchy_shape_depth(SpdMatrix(v)) >= best_c - 1e-12);
  }
  const double a = gaussian_shape_depth(SpdMatrix::identity(2), SpdMatrix::diagonal({4 / 2.5, 1 / 2.5}));
  const double b = gaussian_shape_depth(SpdMatrix::identity(2), SpdMatrix::diagonal({1 / 2.5, 4 / 2.5}));
  CHECK(a < 0.5);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}
