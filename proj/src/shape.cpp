#include "sdepth/shape.hpp"

#include <algorithm>
#include <cmath>

namespace sdepth {

std::string to_string(ScaleFunctional s) {
  switch (s) {
    case ScaleFunctional::Str: return "tr";
    case ScaleFunctional::Sdet: return "det";
    case ScaleFunctional::StrStar: return "trstar";
    case ScaleFunctional::S11: return "s11";
  }
  return "unknown";
}

ScaleFunctional scale_functional_from_string(const std::string& name) {
  if (name == "tr") return ScaleFunctional::Str;
  if (name == "det") return ScaleFunctional::Sdet;
  if (name == "trstar") return ScaleFunctional::StrStar;
  if (name == "s11") return ScaleFunctional::S11;
  throw std::invalid_argument("unknown scale functional '" + name + "' (tr|det|trstar|s11)");
}

double scale_of(const SpdMatrix& sigma, ScaleFunctional s) {
  const double k = sigma.dim();
  switch (s) {
    case ScaleFunctional::Str: return sigma.trace() / k;
    case ScaleFunctional::Sdet: return std::exp(sigma.log_det() / k);
    case ScaleFunctional::StrStar: return k / sigma.inverse().trace();
    case ScaleFunctional::S11: return sigma(0, 0);
  }
  throw DomainError("unknown scale functional");
}

ShapeMatrix ShapeMatrix::normalize(const SpdMatrix& sigma, ScaleFunctional s) {
  return {sigma.scaled(1.0 / scale_of(sigma, s)), s};
}

ScaleShape scale_and_shape(const SpdMatrix& sigma, ScaleFunctional s) {
  const double sigma2 = scale_of(sigma, s);
  return {sigma2, {sigma.scaled(1.0 / sigma2), s}};
}

double profile_anchor(const Matrix& centered, const SpdMatrix& v) {
  const Matrix inv = v.inverse().entries();
  std::vector<double> q(static_cast<std::size_t>(centered.rows()));
  for (Eigen::Index i = 0; i < centered.rows(); ++i) {
    const Vector y = centered.row(i).transpose();
    q[static_cast<std::size_t>(i)] = y.dot(inv * y) / static_cast<double>(v.dim());
  }
  const auto mid = q.begin() + static_cast<std::ptrdiff_t>(q.size() / 2);
  std::nth_element(q.begin(), mid, q.end());
  return *mid > 0.0 ? *mid : 1.0;
}

namespace {

constexpr int kGridPoints = 41;
constexpr double kGridDecades = 6.0;
constexpr double kGoldenStop = 1e-6;

ShapeDepthResult profile_exact(const ScatterDepthEvaluator& ev, const SpdMatrix& v) {
  const auto bounds = ev.profile_bounds(v);
  const int n = ev.n();
  // Reachability is monotone in the level, so scan downward.
  int level = 0;
  for (int l = n; l >= 1; --l) {
    const double lo = bounds.lower[static_cast<std::size_t>(l)];
    const double hi = bounds.upper[static_cast<std::size_t>(l)];
    if (lo <= hi && hi > 0.0) {
      level = l;
      break;
    }
  }
  ShapeDepthResult r;
  if (level == 0) {
    r.sigma2 = profile_anchor(ev.centered(), v);
    r.boundary = true;
  } else {
    r.sigma2 = 0.5 * (bounds.lower[static_cast<std::size_t>(level)] + bounds.upper[static_cast<std::size_t>(level)]);
  }
  r.at_sigma2 = ev.evaluate(v.scaled(r.sigma2));
  r.count = std::max(level, r.at_sigma2.count);
  r.value = static_cast<double>(r.count) / n;
  return r;
}

ShapeDepthResult profile_search(const ScatterDepthEvaluator& ev, const SpdMatrix& v) {
  const double anchor = profile_anchor(ev.centered(), v);
  auto f = [&](double log_s2) { return ev.evaluate(v.scaled(std::exp(log_s2))).count; };
  const double log_anchor = std::log(anchor);
  const double step = 2.0 * kGridDecades * std::log(10.0) / (kGridPoints - 1);
  std::vector<double> grid(kGridPoints);
  int best_i = 0;
  int best = -1;
  for (int i = 0; i < kGridPoints; ++i) {
    grid[static_cast<std::size_t>(i)] = log_anchor - kGridDecades * std::log(10.0) + step * i;
    const int c = f(grid[static_cast<std::size_t>(i)]);
    if (c > best) {
      best = c;
      best_i = i;
    }
  }
  ShapeDepthResult r;
  r.boundary = best_i == 0 || best_i == kGridPoints - 1;
  double incumbent = grid[static_cast<std::size_t>(best_i)];
  double a = grid[static_cast<std::size_t>(std::max(best_i - 1, 0))];
  double b = grid[static_cast<std::size_t>(std::min(best_i + 1, kGridPoints - 1))];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double stop = std::log1p(kGoldenStop);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  int fc = f(c);
  int fd = f(d);
  auto track = [&](double x, int fx) {
    if (fx > best) {
      best = fx;
      incumbent = x;
    }
  };
  track(c, fc);
  track(d, fd);
  while (b - a > stop) {
    // Ties keep the side that holds the incumbent.
    const bool keep_left = fc > fd || (fc == fd && incumbent <= 0.5 * (c + d));
    if (keep_left) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      track(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      track(d, fd);
    }
  }
  const double mid = 0.5 * (a + b);
  const int fmid = f(mid);
  r.sigma2 = std::exp(fmid >= best ? mid : incumbent);
  best = std::max(best, fmid);
  r.at_sigma2 = ev.evaluate(v.scaled(r.sigma2));
  r.count = best;
  r.value = static_cast<double>(best) / ev.n();
  return r;
}

}  // namespace

ShapeDepthResult shape_depth(const ScatterDepthEvaluator& ev, const SpdMatrix& v, std::span<const double> probes) {
  if (v.dim() != ev.k()) throw DimensionMismatch("shape matrix dimension differs from data");
  ShapeDepthResult r = ev.exact() ? profile_search(ev, v) : profile_exact(ev, v);
  for (double s2 : probes) {
    if (!(s2 > 0.0) || !std::isfinite(s2)) throw DomainError("scale probes must be positive");
    const auto e = ev.evaluate(v.scaled(s2));
    if (e.count > r.count) {
      r.count = e.count;
      r.value = e.value;
      r.sigma2 = s2;
      r.at_sigma2 = e;
    }
  }
  return r;
}

ShapeDepthResult shape_depth(const Dataset& d, const LocationSpec& t, const ShapeMatrix& v, const DirectionBudget& dirs) {
  if (v.v.dim() != d.k()) throw DimensionMismatch("shape matrix dimension differs from data");
  const Vector theta = resolve_location(d, t, dirs);
  return shape_depth(ScatterDepthEvaluator(d, theta, dirs), v.v);
}

bool shape_region_contains(const Dataset& d, const LocationSpec& t, const ShapeMatrix& v, double alpha,
                           const DirectionBudget& dirs) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  if (alpha == 0.0) return true;
  return shape_depth(d, t, v, dirs).value >= alpha;
}

}  // namespace sdepth
