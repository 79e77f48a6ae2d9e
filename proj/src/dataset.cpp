#include "sdepth/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "sdepth/exact2d.hpp"
#include "sdepth/io.hpp"
#include "sdepth/kernels.hpp"
#include "nelder_mead.hpp"

namespace sdepth {

Dataset::Dataset(Matrix obs, std::vector<std::string> tags) : obs_(std::move(obs)), tags_(std::move(tags)) {
  if (obs_.rows() < 1 || obs_.cols() < 1) throw DomainError("dataset must have at least one row and one column");
  if (!obs_.allFinite()) throw DomainError("dataset contains non-finite values");
  if (!tags_.empty() && static_cast<Eigen::Index>(tags_.size()) != obs_.rows()) {
    throw DimensionMismatch("one tag per row required");
  }
}

Matrix Dataset::centered(const Vector& theta) const {
  if (theta.size() != obs_.cols()) throw DimensionMismatch("location has wrong dimension");
  return obs_.rowwise() - theta.transpose();
}

Dataset Dataset::transformed(const Matrix& a, const Vector& b) const {
  if (a.rows() != obs_.cols() || a.cols() != obs_.cols() || b.size() != obs_.cols()) {
    throw DimensionMismatch("affine map has wrong dimension");
  }
  Matrix out = obs_ * a.transpose();
  out.rowwise() += b.transpose();
  return Dataset(std::move(out), tags_);
}

Dataset load_dataset_csv(const std::string& path) {
  auto table = io::read_table_csv(path);
  if (table.values.rows() == 0) throw io::FormatError(path + ": no data rows");
  return Dataset(std::move(table.values), std::move(table.tags));
}

Matrix location_directions(int k, const DirectionBudget& budget) {
  if (k == 1) {
    Matrix d(1, 2);
    d << 1.0, -1.0;
    return d;
  }
  return generate_directions(k, budget);
}

namespace {

using detail::Candidate;
using detail::nelder_mead;

constexpr int kTopCandidates = 5;
constexpr int kExactScreeningAngles = 360;

// Location depth count at theta with either a fixed direction matrix or the
// exact circular sweep.
class LocationScore {
 public:
  LocationScore(const Dataset& d, const DirectionBudget& budget) : data_(d) {
    budget.validate(d.k());
    exact_ = budget.exact();
    if (!exact_) dirs_ = location_directions(d.k(), budget);
  }

  int operator()(const Vector& theta) const {
    const Matrix y = data_.centered(theta);
    if (exact_) return exact2d::location_min(y).count;
    return kernels::location_min_parallel(y, dirs_).count;
  }

  bool exact() const { return exact_; }
  const Matrix& directions() const { return dirs_; }

 private:
  const Dataset& data_;
  bool exact_ = false;
  Matrix dirs_;
};

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Mean of a point set computed so that negating every point negates the
// result exactly: points with the same absolute values are pooled through
// their sign balance before accumulation in a sign-free order.
Vector sign_symmetric_mean(const std::vector<Vector>& pts) {
  const auto k = pts.front().size();
  std::map<std::vector<double>, std::vector<double>> groups;
  for (const auto& p : pts) {
    std::vector<double> key(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) key[static_cast<std::size_t>(j)] = std::abs(p(j));
    auto& balance = groups[key];
    if (balance.empty()) balance.assign(static_cast<std::size_t>(k), 0.0);
    for (Eigen::Index j = 0; j < k; ++j) {
      if (p(j) > 0) balance[static_cast<std::size_t>(j)] += 1.0;
      if (p(j) < 0) balance[static_cast<std::size_t>(j)] -= 1.0;
    }
  }
  Vector sum = Vector::Zero(k);
  for (const auto& [key, balance] : groups) {
    for (Eigen::Index j = 0; j < k; ++j) sum(j) += key[static_cast<std::size_t>(j)] * balance[static_cast<std::size_t>(j)];
  }
  return sum / static_cast<double>(pts.size());
}

Vector coordinate_spread(const Dataset& d, const Vector& center) {
  Vector s(d.k());
  for (int j = 0; j < d.k(); ++j) {
    std::vector<double> dev(static_cast<std::size_t>(d.n()));
    for (int i = 0; i < d.n(); ++i) dev[static_cast<std::size_t>(i)] = std::abs(d.obs()(i, j) - center(j));
    double m = median_of(std::move(dev));
    if (m <= 0.0) m = (d.obs().col(j).array() - center(j)).abs().maxCoeff();
    s(j) = m > 0.0 ? m : 1.0;
  }
  return s;
}

}  // namespace

double location_depth(const Dataset& d, const Vector& theta, const DirectionBudget& dirs) {
  if (!theta.allFinite()) throw DomainError("location must be finite");
  const LocationScore score(d, dirs);
  return static_cast<double>(score(theta)) / d.n();
}

Vector coordinate_median(const Dataset& d) {
  Vector m(d.k());
  for (int j = 0; j < d.k(); ++j) {
    const auto col = d.obs().col(j);
    m(j) = median_of(std::vector<double>(col.data(), col.data() + col.size()));
  }
  return m;
}

Vector tukey_median(const Dataset& d, const DirectionBudget& dirs) {
  if (d.k() == 1) return coordinate_median(d);
  const LocationScore score(d, dirs);
  const int n = d.n();

  Matrix screen;
  if (score.exact()) {
    screen.resize(2, kExactScreeningAngles);
    for (int i = 0; i < kExactScreeningAngles; ++i) {
      const double t = 2.0 * std::numbers::pi * i / kExactScreeningAngles;
      screen(0, i) = std::cos(t);
      screen(1, i) = std::sin(t);
    }
  } else {
    screen = score.directions();
  }
  const std::vector<int> screened = kernels::sample_location_depths_parallel(d.obs(), screen);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return screened[static_cast<std::size_t>(a)] > screened[static_cast<std::size_t>(b)];
  });

  std::vector<Candidate> evaluated;
  if (score.exact()) {
    const int best_screen = screened[static_cast<std::size_t>(order.front())];
    for (int r = 0; r < n && r < 50; ++r) {
      const int i = order[static_cast<std::size_t>(r)];
      if (r >= kTopCandidates && screened[static_cast<std::size_t>(i)] < best_screen) break;
      Vector x = d.obs().row(i).transpose();
      evaluated.push_back({x, score(x)});
    }
  } else {
    for (int r = 0; r < n; ++r) {
      const int i = order[static_cast<std::size_t>(r)];
      evaluated.push_back({d.obs().row(i).transpose(), screened[static_cast<std::size_t>(i)]});
    }
  }
  const Vector cm = coordinate_median(d);
  evaluated.push_back({cm, score(cm)});

  std::vector<std::size_t> rank(evaluated.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(),
                   [&](std::size_t a, std::size_t b) { return evaluated[a].score > evaluated[b].score; });
  const Vector step = 0.1 * coordinate_spread(d, cm);
  const int max_evals = 10 * (d.k() + 1);
  const std::size_t starts = std::min<std::size_t>(kTopCandidates, rank.size());
  std::vector<Vector> seeds;
  for (std::size_t s = 0; s < starts; ++s) seeds.push_back(evaluated[rank[s]].point);
  for (const auto& seed : seeds) {
    nelder_mead(score, seed, step, max_evals, evaluated);
    nelder_mead(score, seed, -step, max_evals, evaluated);
  }

  int best = 0;
  for (const auto& c : evaluated) best = std::max(best, c.score);
  std::vector<Vector> winners;
  for (const auto& c : evaluated) {
    if (c.score == best) winners.push_back(c.point);
  }
  return sign_symmetric_mean(winners);
}

Vector resolve_location(const Dataset& d, const LocationSpec& spec, const DirectionBudget& dirs) {
  switch (spec.kind) {
    case LocationKind::Fixed:
      if (spec.theta.size() != d.k()) throw DimensionMismatch("fixed location has wrong dimension");
      if (!spec.theta.allFinite()) throw DomainError("fixed location must be finite");
      return spec.theta;
    case LocationKind::CoordMedian:
      return coordinate_median(d);
    case LocationKind::TukeyMedian: {
      DirectionBudget capped = dirs;
      if (!capped.exact()) capped.count = std::min(capped.count, std::max(1, spec.tukey_directions));
      return tukey_median(d, capped);
    }
  }
  throw DomainError("unknown location kind");
}

Interval msd_interval(std::span<const double> x, double center) {
  if (x.empty()) throw DomainError("empty sample");
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - center) * (x[i] - center);
  std::sort(sq.begin(), sq.end());
  const auto n = static_cast<long>(sq.size());
  long best = -1;
  Interval out;
  for (long i = 0; i < n; ++i) {
    const double s = sq[static_cast<std::size_t>(i)];
    const long below = std::upper_bound(sq.begin(), sq.end(), s) - sq.begin();
    const long above = n - (std::lower_bound(sq.begin(), sq.end(), s) - sq.begin());
    const long value = std::min(below, above);
    if (value > best) {
      best = value;
      out = {s, s};
    } else if (value == best) {
      out.hi = s;
    }
  }
  return out;
}

AlphaEstimate estimate_alpha(const Dataset& d, const LocationSpec& spec, const DirectionBudget& dirs) {
  const Vector theta = resolve_location(d, spec, dirs);
  const Matrix y = d.centered(theta);
  const int n = d.n();
  const double scale = y.rowwise().norm().maxCoeff();
  const double tol = 1e-12 * scale;
  int zeros = 0;
  for (int i = 0; i < n; ++i) zeros += y.row(i).norm() <= tol;
  int best = zeros;
  if (zeros < n) {
    if (d.k() == 1) {
      best = zeros;
    } else if (d.k() == 2) {
      for (int i = 0; i < n; ++i) {
        const double len = y.row(i).norm();
        if (len <= tol) continue;
        const double u0 = -y(i, 1) / len;
        const double u1 = y(i, 0) / len;
        int count = 0;
        for (int j = 0; j < n; ++j) count += std::abs(u0 * y(j, 0) + u1 * y(j, 1)) <= tol;
        best = std::max(best, count);
      }
    } else {
      // Any k - 1 observations span a hyperplane through T with the zeros.
      best = std::max(best, std::min(n, zeros + d.k() - 1));
      if (!dirs.exact()) {
        best = std::max(best, kernels::hyperplane_mass_parallel(y, generate_directions(d.k(), dirs), tol));
      }
    }
  }
  AlphaEstimate a;
  a.s = static_cast<double>(best) / n;
  a.alpha = std::min(a.s, 1.0 - a.s);
  return a;
}

}  // namespace sdepth
