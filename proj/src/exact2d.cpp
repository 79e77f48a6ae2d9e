#include "sdepth/exact2d.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace sdepth::exact2d {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleTol = 1e-12;

double wrap(double a, double period) {
  a = std::fmod(a, period);
  if (a < 0.0) a += period;
  if (a >= period) a -= period;
  return a;
}

double circular_gap(double a, double b, double period) {
  const double d = std::abs(a - b);
  return std::min(d, period - d);
}

struct PointEvent {
  double angle;
  int point;
  bool flip;
};

// Per-point state: +1 inner (or "inside the halfplane"), -1 outer.
// `both` counts observations that sit on the boundary for every direction.
using StateAt = std::function<signed char(int point, double angle)>;
using Objective = std::function<void(int inner, int outer, int& value, bool& inner_binding)>;

AngleMin sweep(int n, double period, std::vector<PointEvent> events, const std::vector<bool>& has_events,
               const StateAt& state_at, int both, const Objective& objective) {
  AngleMin best;
  best.count = std::numeric_limits<int>::max();

  auto consider = [&](int inner, int outer, double angle) {
    int value = 0;
    bool inner_binding = true;
    objective(inner, outer, value, inner_binding);
    ++best.angles_evaluated;
    if (value < best.count) {
      best.count = value;
      best.angle = wrap(angle, period);
      best.inner = inner;
      best.outer = outer;
      best.inner_binding = inner_binding;
    }
  };

  double reference = 0.0;
  if (!events.empty()) {
    for (auto& e : events) e.angle = wrap(e.angle, period);
    std::sort(events.begin(), events.end(), [](const PointEvent& x, const PointEvent& y) { return x.angle < y.angle; });
    double widest = -1.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const double next = i + 1 < events.size() ? events[i + 1].angle : events.front().angle + period;
      const double gap = next - events[i].angle;
      if (gap > widest) {
        widest = gap;
        reference = events[i].angle + 0.5 * gap;
      }
    }
    reference = wrap(reference, period);
    for (auto& e : events) e.angle = wrap(e.angle - reference, period);
    std::sort(events.begin(), events.end(), [](const PointEvent& x, const PointEvent& y) {
      return x.angle < y.angle || (x.angle == y.angle && x.point < y.point);
    });
  }

  std::vector<signed char> state(static_cast<std::size_t>(n), 0);
  int inner = 0;
  int outer = 0;
  for (int i = 0; i < n; ++i) {
    signed char s = state_at(i, reference);
    state[static_cast<std::size_t>(i)] = s;
    if (s > 0) ++inner;
    if (s < 0) ++outer;
  }
  consider(inner + both, outer + both, reference);
  if (events.empty()) return best;

  std::vector<int> stamp(static_cast<std::size_t>(n), -1);
  std::vector<int> flips(static_cast<std::size_t>(n), 0);
  std::vector<int> members;
  std::size_t pos = 0;
  int group = 0;
  while (pos < events.size()) {
    members.clear();
    const double start = events[pos].angle;
    double last = start;
    while (pos < events.size() && events[pos].angle - last <= kAngleTol) {
      const auto& e = events[pos];
      const auto p = static_cast<std::size_t>(e.point);
      if (stamp[p] != group) {
        stamp[p] = group;
        flips[p] = 0;
        members.push_back(e.point);
      }
      if (e.flip) ++flips[p];
      last = e.angle;
      ++pos;
    }
    for (int m : members) {
      const signed char s = state[static_cast<std::size_t>(m)];
      if (s > 0) --inner;
      if (s < 0) --outer;
    }
    const int zeros = static_cast<int>(members.size());
    consider(inner + zeros + both, outer + zeros + both, reference + start);
    for (int m : members) {
      auto& s = state[static_cast<std::size_t>(m)];
      if (flips[static_cast<std::size_t>(m)] % 2 == 1) s = static_cast<signed char>(-s);
      if (s > 0) ++inner;
      if (s < 0) ++outer;
    }
    const double next = pos < events.size() ? events[pos].angle : period + events.front().angle;
    consider(inner + both, outer + both, reference + 0.5 * (last + next));
    ++group;
  }
  (void)has_events;
  return best;
}

void scatter_objective(int inner, int outer, int& value, bool& inner_binding) {
  value = std::min(inner, outer);
  inner_binding = inner <= outer;
}

void location_objective(int inner, int /*outer*/, int& value, bool& inner_binding) {
  value = inner;
  inner_binding = true;
}

struct QuadForm {
  double m = 0.0;
  double r = 0.0;
  double phi = 0.0;
};

QuadForm quad_form(double y0, double y1, const Matrix& s) {
  const double a = y0 * y0 - s(0, 0);
  const double b = y0 * y1 - s(0, 1);
  const double c = y1 * y1 - s(1, 1);
  QuadForm q;
  q.m = 0.5 * (a + c);
  const double h = 0.5 * (a - c);
  q.r = std::hypot(h, b);
  q.phi = std::atan2(b, h);
  return q;
}

void check_bivariate(const Matrix& centered) {
  if (centered.cols() != 2) throw DimensionMismatch("exact 2D routines need bivariate data");
  if (centered.rows() == 0) throw DomainError("empty dataset");
}

template <class Counter>
AngleMin evaluate_midpoints(std::vector<double> angles, double period, const Counter& count_at) {
  std::sort(angles.begin(), angles.end());
  std::vector<double> distinct;
  for (double a : angles) {
    if (distinct.empty() || a - distinct.back() > kAngleTol) distinct.push_back(a);
  }
  if (distinct.size() > 1 && circular_gap(distinct.front(), distinct.back(), period) <= kAngleTol) {
    distinct.pop_back();
  }
  std::vector<double> probes;
  if (distinct.empty()) {
    probes.push_back(0.0);
  } else {
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      const double next = i + 1 < distinct.size() ? distinct[i + 1] : distinct.front() + period;
      probes.push_back(wrap(0.5 * (distinct[i] + next), period));
    }
  }
  AngleMin best;
  best.count = std::numeric_limits<int>::max();
  for (double t : probes) {
    auto [value, inner, outer] = count_at(t);
    ++best.angles_evaluated;
    if (value < best.count) {
      best.count = value;
      best.angle = t;
      best.inner = inner;
      best.outer = outer;
      best.inner_binding = inner <= outer;
    }
  }
  return best;
}

}  // namespace

std::vector<double> scatter_critical_angles(const Matrix& centered, const SpdMatrix& sigma) {
  check_bivariate(centered);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < centered.rows(); ++i) {
    const QuadForm q = quad_form(centered(i, 0), centered(i, 1), sigma.entries());
    if (q.r == 0.0 || std::abs(q.m) > q.r) continue;
    const double delta = std::acos(std::clamp(-q.m / q.r, -1.0, 1.0));
    out.push_back(wrap(0.5 * (q.phi + delta), kPi));
    out.push_back(wrap(0.5 * (q.phi - delta), kPi));
  }
  std::sort(out.begin(), out.end());
  std::vector<double> distinct;
  for (double a : out) {
    if (distinct.empty() || a - distinct.back() > kAngleTol) distinct.push_back(a);
  }
  return distinct;
}

AngleMin scatter_min(const Matrix& centered, const SpdMatrix& sigma) {
  check_bivariate(centered);
  if (sigma.dim() != 2) throw DimensionMismatch("exact 2D routines need a 2 x 2 scatter");
  const int n = static_cast<int>(centered.rows());
  std::vector<QuadForm> forms(static_cast<std::size_t>(n));
  std::vector<PointEvent> events;
  events.reserve(2 * static_cast<std::size_t>(n));
  std::vector<bool> has_events(static_cast<std::size_t>(n), false);
  int both = 0;
  std::vector<bool> constant_zero(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    const QuadForm q = quad_form(centered(i, 0), centered(i, 1), sigma.entries());
    forms[static_cast<std::size_t>(i)] = q;
    if (q.r == 0.0 && q.m == 0.0) {
      constant_zero[static_cast<std::size_t>(i)] = true;
      ++both;
      continue;
    }
    if (q.r == 0.0 || std::abs(q.m) > q.r) continue;
    const double delta = std::acos(std::clamp(-q.m / q.r, -1.0, 1.0));
    const double t1 = wrap(0.5 * (q.phi + delta), kPi);
    const double t2 = wrap(0.5 * (q.phi - delta), kPi);
    has_events[static_cast<std::size_t>(i)] = true;
    if (circular_gap(t1, t2, kPi) <= kAngleTol) {
      events.push_back({t1, i, false});
    } else {
      events.push_back({t1, i, true});
      events.push_back({t2, i, true});
    }
  }
  const StateAt state_at = [&](int i, double angle) -> signed char {
    if (constant_zero[static_cast<std::size_t>(i)]) return 0;
    const QuadForm& q = forms[static_cast<std::size_t>(i)];
    const double value = q.m + q.r * std::cos(2.0 * angle - q.phi);
    return value <= 0.0 ? 1 : -1;
  };
  return sweep(n, kPi, std::move(events), has_events, state_at, both, scatter_objective);
}

AngleMin scatter_min_reference(const Matrix& centered, const SpdMatrix& sigma) {
  check_bivariate(centered);
  const Matrix& s = sigma.entries();
  std::vector<double> angles;
  for (Eigen::Index i = 0; i < centered.rows(); ++i) {
    const double y0 = centered(i, 0);
    const double y1 = centered(i, 1);
    // a cos^2 + 2b cos sin + c sin^2 = 0  <=>  a + 2b t + c t^2 = 0 with t = tan.
    const double a = y0 * y0 - s(0, 0);
    const double b = y0 * y1 - s(0, 1);
    const double c = y1 * y1 - s(1, 1);
    if (c != 0.0) {
      const double disc = b * b - a * c;
      if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        angles.push_back(wrap(std::atan((-b + root) / c), kPi));
        angles.push_back(wrap(std::atan((-b - root) / c), kPi));
      }
    } else {
      angles.push_back(kPi / 2.0);
      if (b != 0.0) angles.push_back(wrap(std::atan(-a / (2.0 * b)), kPi));
    }
  }
  auto count_at = [&](double t) {
    const double u0 = std::cos(t);
    const double u1 = std::sin(t);
    const double thr = u0 * u0 * s(0, 0) + 2.0 * u0 * u1 * s(0, 1) + u1 * u1 * s(1, 1);
    int inner = 0;
    int outer = 0;
    for (Eigen::Index i = 0; i < centered.rows(); ++i) {
      const double p = u0 * centered(i, 0) + u1 * centered(i, 1);
      inner += p * p <= thr;
      outer += p * p >= thr;
    }
    return std::tuple<int, int, int>{std::min(inner, outer), inner, outer};
  };
  return evaluate_midpoints(std::move(angles), kPi, count_at);
}

AngleMin location_min(const Matrix& centered) {
  check_bivariate(centered);
  const int n = static_cast<int>(centered.rows());
  std::vector<PointEvent> events;
  events.reserve(2 * static_cast<std::size_t>(n));
  std::vector<bool> has_events(static_cast<std::size_t>(n), false);
  std::vector<double> psi(static_cast<std::size_t>(n), 0.0);
  int both = 0;
  for (int i = 0; i < n; ++i) {
    const double y0 = centered(i, 0);
    const double y1 = centered(i, 1);
    if (y0 == 0.0 && y1 == 0.0) {
      ++both;
      continue;
    }
    const double a = std::atan2(y1, y0);
    psi[static_cast<std::size_t>(i)] = a;
    has_events[static_cast<std::size_t>(i)] = true;
    events.push_back({a - kPi / 2.0, i, true});
    events.push_back({a + kPi / 2.0, i, true});
  }
  const StateAt state_at = [&](int i, double angle) -> signed char {
    if (!has_events[static_cast<std::size_t>(i)]) return 0;
    const double p = std::cos(angle) * centered(i, 0) + std::sin(angle) * centered(i, 1);
    return p >= 0.0 ? 1 : -1;
  };
  return sweep(n, 2.0 * kPi, std::move(events), has_events, state_at, both, location_objective);
}

AngleMin location_min_reference(const Matrix& centered) {
  check_bivariate(centered);
  std::vector<double> angles;
  for (Eigen::Index i = 0; i < centered.rows(); ++i) {
    const double y0 = centered(i, 0);
    const double y1 = centered(i, 1);
    if (y0 == 0.0 && y1 == 0.0) continue;
    // Perpendicular directions to y: u'y = 0.
    const double len = std::hypot(y0, y1);
    angles.push_back(wrap(std::atan2(y0 / len, -y1 / len), 2.0 * kPi));
    angles.push_back(wrap(std::atan2(-y0 / len, y1 / len), 2.0 * kPi));
  }
  auto count_at = [&](double t) {
    const double u0 = std::cos(t);
    const double u1 = std::sin(t);
    int inside = 0;
    for (Eigen::Index i = 0; i < centered.rows(); ++i) {
      inside += u0 * centered(i, 0) + u1 * centered(i, 1) >= 0.0;
    }
    return std::tuple<int, int, int>{inside, inside, inside};
  };
  return evaluate_midpoints(std::move(angles), 2.0 * kPi, count_at);
}

}  // namespace sdepth::exact2d
