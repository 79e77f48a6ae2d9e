#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "brute.hpp"
#include "sdepth/spd.hpp"

using namespace sdepth;

namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("construction rejects non-SPD input") {
  CHECK_THROWS_AS(SpdMatrix(m2(1, 2, 0, 1)), DomainError);
  CHECK_THROWS_AS(SpdMatrix(m2(1, 0, 0, -1)), DomainError);
  CHECK_THROWS_AS(SpdMatrix(m2(1, 0, 0, 0)), DomainError);
  CHECK_THROWS_AS(SpdMatrix(m2(1, NAN, NAN, 1)), DomainError);
  CHECK_THROWS_AS(SpdMatrix(Matrix(2, 3)), DomainError);
  CHECK_NOTHROW(SpdMatrix(m2(2, 1, 1, 2)));
}

TEST_CASE("eigenvalues descending with sign-normalized eigenvectors") {
  const SpdMatrix s(m2(2, 1, 1, 2));
  CHECK(s.eigenvalues()(0) == doctest::Approx(3.0));
  CHECK(s.eigenvalues()(1) == doctest::Approx(1.0));
  for (int j = 0; j < 2; ++j) CHECK(s.eigenvectors()(0, j) > 0.0);
}

TEST_CASE("matrix functions") {
  CHECK(apply_function(SpdMatrix::identity(3), [](double t) { return std::log(t); }).norm() < 1e-14);
  CHECK((SpdMatrix::diagonal({4, 1}).sqrt().entries() - m2(2, 0, 0, 1)).norm() < 1e-14);
  const Matrix sq = matrix_function(SpdMatrix(m2(2, 1, 1, 2)), [](double t) { return t * t; }).entries();
  CHECK((sq - m2(2, 1, 1, 2) * m2(2, 1, 1, 2)).norm() < 1e-12);
  CHECK((sq - m2(5, 4, 4, 5)).norm() < 1e-12);

  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const int k = 2 + rep % 4;
    const Matrix a = brute::random_spd(k, rng);
    const SpdMatrix s(a);
    CHECK((s.inverse().entries() * a - Matrix::Identity(k, k)).norm() < 1e-9);
    CHECK((s.sqrt().entries() * s.sqrt().entries() - a).norm() < 1e-9 * a.norm());
    CHECK((s.inv_sqrt().entries() * s.sqrt().entries() - Matrix::Identity(k, k)).norm() < 1e-9);
    CHECK((s.power(0.3).entries() - brute::sym_fn(a, [](double t) { return std::pow(t, 0.3); })).norm() < 1e-9);
    CHECK(s.log_det() == doctest::Approx(std::log(a.determinant())).epsilon(1e-10));
  }
}

TEST_CASE("Frobenius distance") {
  CHECK(frobenius_distance(SpdMatrix::identity(2), SpdMatrix::identity(2)) == 0.0);
  CHECK(frobenius_distance(SpdMatrix::identity(2), SpdMatrix::diagonal({3, 1})) == doctest::Approx(2.0));
  CHECK(frobenius_distance(SpdMatrix::diagonal({1, 2}), SpdMatrix::diagonal({4, 6})) == doctest::Approx(5.0));
}

TEST_CASE("geodesic distance") {
  std::mt19937_64 rng(3);
  const SpdMatrix s(brute::random_spd(3, rng));
  CHECK(geodesic_distance(s, s) < 1e-12);
  CHECK(geodesic_distance(SpdMatrix::identity(2), SpdMatrix::diagonal({std::exp(2.0), 1.0})) ==
        doctest::Approx(2.0).epsilon(1e-12));
  const double expected = std::sqrt(std::pow(std::log(4.0), 2) + std::pow(std::log(9.0), 2));
  CHECK(geodesic_distance(SpdMatrix::identity(2), SpdMatrix::diagonal({4, 9})) == doctest::Approx(expected));

  // Length of the geodesic path by quadrature of small Frobenius steps in the
  // whitened frame equals the closed form.
  const SpdMatrix a(brute::random_spd(2, rng));
  const SpdMatrix b(brute::random_spd(2, rng));
  const PathSpec path(a, b, PathKind::Geodesic);
  double len = 0.0;
  const int steps = 4000;
  for (int i = 0; i < steps; ++i) {
    const SpdMatrix p = path_point(path, double(i) / steps);
    const SpdMatrix q = path_point(path, double(i + 1) / steps);
    const Matrix w = p.inv_sqrt().entries();
    len += (w * (q.entries() - p.entries()) * w).norm();
  }
  CHECK(len == doctest::Approx(geodesic_distance(a, b)).epsilon(1e-4));

  // Congruence invariance and symmetry.
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix x = brute::random_spd(3, rng), y = brute::random_spd(3, rng);
    Matrix g = brute::gaussian_rows(3, 3, rng);
    g += 3.0 * Matrix::Identity(3, 3);
    const double d = geodesic_distance(SpdMatrix(x), SpdMatrix(y));
    const Matrix gx = g * x * g.transpose(), gy = g * y * g.transpose();
    CHECK(geodesic_distance(SpdMatrix(0.5 * (gx + gx.transpose())), SpdMatrix(0.5 * (gy + gy.transpose()))) ==
          doctest::Approx(d).epsilon(1e-8));
    CHECK(geodesic_distance(SpdMatrix(y), SpdMatrix(x)) == doctest::Approx(d).epsilon(1e-10));
  }
}

TEST_CASE("path points") {
  const auto g = path_point({SpdMatrix::identity(2), SpdMatrix::diagonal({4, 1}), PathKind::Geodesic}, 0.5);
  CHECK((g.entries() - m2(2, 0, 0, 1)).norm() < 1e-12);
  const auto h = path_point({SpdMatrix::identity(2), SpdMatrix::diagonal({1.0 / 3.0, 1}), PathKind::Harmonic}, 0.5);
  CHECK((h.entries() - m2(0.5, 0, 0, 1)).norm() < 1e-12);
  const auto l = path_point({SpdMatrix::diagonal({8, 1}), SpdMatrix::diagonal({0.125, 1}), PathKind::Linear}, 0.5);
  CHECK((l.entries() - m2(4.0625, 0, 0, 1)).norm() < 1e-12);

  std::mt19937_64 rng(11);
  const SpdMatrix a(brute::random_spd(3, rng)), b(brute::random_spd(3, rng));
  for (PathKind kind : {PathKind::Linear, PathKind::Geodesic, PathKind::Harmonic}) {
    const PathSpec p(a, b, kind);
    CHECK((path_point(p, 0.0).entries() - a.entries()).norm() < 1e-10);
    CHECK((path_point(p, 1.0).entries() - b.entries()).norm() < 1e-10);
    CHECK_THROWS_AS(path_point(p, 1.5), DomainError);
  }
  CHECK(path_kind_from_string("harmonic") == PathKind::Harmonic);
  CHECK_THROWS(path_kind_from_string("spline"));
  CHECK_THROWS_AS(PathSpec(SpdMatrix::identity(2), SpdMatrix::identity(3), PathKind::Linear), DimensionMismatch);
}

TEST_CASE("Karcher mean") {
  std::mt19937_64 rng(5);
  const SpdMatrix s(brute::random_spd(3, rng));
  const std::vector<SpdMatrix> one{s};
  const std::vector<double> w1{1.0};
  CHECK((karcher_mean(one, w1).entries() - s.entries()).norm() < 1e-10);

  const double e2 = std::exp(2.0);
  const std::vector<SpdMatrix> pair{SpdMatrix::identity(2), SpdMatrix::diagonal({e2, e2})};
  const std::vector<double> half{0.5, 0.5};
  CHECK((karcher_mean(pair, half).entries() - std::exp(1.0) * Matrix::Identity(2, 2)).norm() < 1e-9);

  const std::vector<SpdMatrix> cross{SpdMatrix::diagonal({1, 4}), SpdMatrix::diagonal({4, 1})};
  const SpdMatrix m = karcher_mean(cross, half);
  CHECK((m.entries() - m.entries().transpose()).norm() < 1e-12);
  CHECK(m.det() == doctest::Approx(4.0).epsilon(1e-9));

  // First-order condition: sum_i w_i log(M^{-1/2} S_i M^{-1/2}) = 0.
  std::vector<SpdMatrix> pts;
  std::vector<double> w;
  for (int i = 0; i < 6; ++i) {
    pts.emplace_back(brute::random_spd(3, rng));
    w.push_back(1.0 / 6.0);
  }
  const SpdMatrix c = karcher_mean(pts, w);
  Matrix grad = Matrix::Zero(3, 3);
  const Matrix r = c.inv_sqrt().entries();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Matrix inner = r * pts[i].entries() * r;
    grad += w[i] * brute::sym_fn(0.5 * (inner + inner.transpose()), [](double t) { return std::log(t); });
  }
  CHECK(grad.norm() < 1e-7);
  CHECK(karcher_objective(pts, w, c) <= karcher_objective(pts, w, pts[0]));
}
