#include <random>
#include <vector>

#include <doctest.h>

#include "brute.hpp"
#include "sdepth/dataset.hpp"

using namespace sdepth;

namespace {

Dataset rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return Dataset(m);
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Dataset six_points() { return rows({{0, 0.5}, {0, -0.5}, {2, 2}, {2, -2}, {-2, 2}, {-2, -2}}); }

}  // namespace

TEST_CASE("location depth examples") {
  const auto dirs = DirectionBudget::uniform(100, 1);
  CHECK(location_depth(rows({{1}, {2}, {3}}), vec({2}), dirs) == doctest::Approx(2.0 / 3.0));
  CHECK(location_depth(rows({{1}, {2}, {3}}), vec({10}), dirs) == 0.0);
  std::mt19937_64 rng(1);
  const Dataset g(brute::gaussian_rows(50, 3, rng));
  CHECK(location_depth(g, vec({9, 9, 9}), DirectionBudget::uniform(500, 2)) == 0.0);
  const auto cross = rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  CHECK(location_depth(cross, vec({0, 0}), DirectionBudget::exact2d()) == 0.5);
  CHECK(location_depth(cross, vec({5, 5}), DirectionBudget::exact2d()) == 0.0);
}

TEST_CASE("location depth agrees with brute force on shared directions") {
  std::mt19937_64 rng(2);
  const Dataset d(brute::gaussian_rows(80, 3, rng));
  const auto budget = DirectionBudget::uniform(300, 5);
  const Matrix dirs = location_directions(3, budget);
  for (int rep = 0; rep < 5; ++rep) {
    const Vector theta = 0.4 * brute::gaussian_rows(1, 3, rng).row(0).transpose();
    CHECK(location_depth(d, theta, budget) * 80 ==
          doctest::Approx(brute::location_count(brute::center(d.obs(), theta), dirs)));
  }
}

TEST_CASE("Tukey median examples") {
  const auto dirs = DirectionBudget::uniform(200, 3);
  CHECK(tukey_median(rows({{1}, {2}, {3}}), dirs)(0) == 2.0);
  CHECK(tukey_median(rows({{1}, {2}, {3}, {4}}), dirs)(0) == 2.5);
  const auto cross = rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  CHECK(tukey_median(cross, DirectionBudget::exact2d()).norm() < 1e-12);
  CHECK(tukey_median(cross, DirectionBudget::antipodal(200, 1)).norm() < 1e-12);
}

TEST_CASE("Tukey median attains high depth and is translation equivariant") {
  std::mt19937_64 rng(4);
  const Dataset d(brute::gaussian_rows(300, 2, rng));
  const Vector t = tukey_median(d, DirectionBudget::exact2d());
  CHECK(location_depth(d, t, DirectionBudget::exact2d()) >= 0.45);
  CHECK(t.norm() < 0.3);

  const auto budget = DirectionBudget::antipodal(200, 7);
  const Dataset d3(brute::gaussian_rows(200, 3, rng));
  const Vector m = tukey_median(d3, budget);
  const Dataset neg = d3.transformed(-Matrix::Identity(3, 3), Vector::Zero(3));
  CHECK((tukey_median(neg, budget) + m).norm() == 0.0);
}

TEST_CASE("coordinate median and resolve_location") {
  const auto d = rows({{1, 10}, {2, 30}, {3, 20}, {4, 40}});
  CHECK(coordinate_median(d) == vec({2.5, 25}));
  const auto dirs = DirectionBudget::uniform(50, 1);
  CHECK(resolve_location(d, LocationSpec::coord_median(), dirs) == vec({2.5, 25}));
  CHECK(resolve_location(d, LocationSpec::fixed(vec({1, 1})), dirs) == vec({1, 1}));
  CHECK_THROWS_AS(resolve_location(d, LocationSpec::fixed(vec({1})), dirs), DimensionMismatch);
}

TEST_CASE("MSD interval") {
  const std::vector<double> a{-1, 0, 1};
  CHECK(msd_interval(a, 0).lo == 1.0);
  CHECK(msd_interval(a, 0).hi == 1.0);
  const std::vector<double> b{-2, -1, 1, 2};
  CHECK(msd_interval(b, 0).lo == 1.0);
  CHECK(msd_interval(b, 0).hi == 4.0);
  CHECK(msd_interval(b, 0).mid() == 2.5);
  const std::vector<double> z{0, 0, 0};
  CHECK(msd_interval(z, 0).hi == 0.0);

  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(1 + rep);
    for (auto& v : x) v = std::round(4 * g(rng)) / 2;  // ties on purpose
    const double c = rep % 3 ? 0.0 : 0.5;
    const auto [lo, hi] = brute::msd_interval(x, c);
    const auto got = msd_interval(x, c);
    CHECK(got.lo == lo);
    CHECK(got.hi == hi);
  }
}

TEST_CASE("hyperplane mass and alpha") {
  const auto fixed0 = LocationSpec::fixed(vec({0, 0}));
  const auto s6 = estimate_alpha(six_points(), fixed0, DirectionBudget::exact2d());
  CHECK(s6.s == doctest::Approx(1.0 / 3.0));
  CHECK(s6.alpha == doctest::Approx(1.0 / 3.0));
  // Centro-equivariant T lands on the symmetry centre as well.
  CHECK(estimate_alpha(six_points(), LocationSpec::coord_median(), DirectionBudget::exact2d()).s ==
        doctest::Approx(1.0 / 3.0));

  std::mt19937_64 rng(8);
  const Dataset generic(brute::gaussian_rows(40, 2, rng));
  CHECK(estimate_alpha(generic, LocationSpec::fixed(vec({0.123, -0.456})), DirectionBudget::exact2d()).s ==
        doctest::Approx(1.0 / 40));

  const auto same = rows({{1, 1}, {1, 1}, {1, 1}});
  const auto a = estimate_alpha(same, LocationSpec::fixed(vec({1, 1})), DirectionBudget::exact2d());
  CHECK(a.s == 1.0);
  CHECK(a.alpha == 0.0);
}

TEST_CASE("dataset validation") {
  CHECK_THROWS_AS(Dataset(Matrix(0, 2)), DomainError);
  Matrix bad(1, 2);
  bad << 1, INFINITY;
  CHECK_THROWS_AS((Dataset(bad)), DomainError);
  CHECK_THROWS_AS(Dataset(Matrix::Zero(2, 2), {"a"}), DimensionMismatch);
  const auto d = rows({{1, 2}});
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  CHECK(d.transformed(a, vec({1, 1})).obs() == (Matrix(1, 2) << 3, 2).finished());
}
