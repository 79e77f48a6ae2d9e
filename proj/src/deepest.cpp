#include "sdepth/deepest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>

#include "sdepth/directions.hpp"
#include "sdepth/mcd.hpp"

namespace sdepth {

namespace {

struct Scored {
  SpdMatrix sigma;
  int count;
};

std::vector<double> key_of(const SpdMatrix& s) {
  return std::vector<double>(s.entries().data(), s.entries().data() + s.entries().size());
}

bool lex_less(const SpdMatrix& a, const SpdMatrix& b) { return key_of(a) < key_of(b); }

// Objective maps a candidate to (normalized candidate, depth count).
using Objective = std::function<std::optional<Scored>(const Matrix&)>;

class Archive {
 public:
  void record(const Scored& s) {
    if (s.count > best_) {
      best_ = s.count;
      for (auto it = points_.begin(); it != points_.end();) {
        it = it->second.count < best_ - 1 ? points_.erase(it) : std::next(it);
      }
    }
    if (s.count >= best_ - 1) points_.emplace(key_of(s.sigma), s);
  }
  std::vector<Scored> near(std::size_t cap) const {
    std::vector<Scored> out;
    for (const auto& [key, s] : points_) {
      if (s.count >= best_ - 1) out.push_back(s);
    }
    std::stable_sort(out.begin(), out.end(), [](const Scored& a, const Scored& b) { return a.count > b.count; });
    if (out.size() > cap) out.erase(out.begin() + static_cast<std::ptrdiff_t>(cap), out.end());
    return out;
  }

 private:
  int best_ = -1;
  std::map<std::vector<double>, Scored> points_;
};

Matrix build(const Matrix& chol, const Vector& theta, int k) {
  Matrix l = Matrix::Zero(k, k);
  int p = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j <= i; ++j) l(i, j) = i == j ? std::exp(theta(p++)) : theta(p++);
  }
  const Matrix f = chol * l;
  return f * f.transpose();
}

std::optional<Scored> pattern_search(const Objective& objective, const SpdMatrix& start, const SearchOptions& opt,
                                     Archive& archive, int& evaluations) {
  const int k = start.dim();
  const int p = k * (k + 1) / 2;
  const Matrix chol = Eigen::LLT<Matrix>(start.entries()).matrixL();
  Vector theta = Vector::Zero(p);
  auto eval = [&](const Vector& th) -> std::optional<Scored> {
    ++evaluations;
    auto s = objective(build(chol, th, k));
    if (s) archive.record(*s);
    return s;
  };
  auto current = eval(theta);
  if (!current) return std::nullopt;
  double step = opt.initial_step;
  int used = 1;
  while (step >= opt.final_step && used < opt.max_evaluations_per_start) {
    std::optional<Scored> best_poll;
    Vector best_theta;
    for (int c = 0; c < p; ++c) {
      for (double sign : {1.0, -1.0}) {
        Vector th = theta;
        th(c) += sign * step;
        auto s = eval(th);
        ++used;
        if (s && s->count > current->count && (!best_poll || s->count > best_poll->count)) {
          best_poll = s;
          best_theta = th;
        }
      }
    }
    if (best_poll) {
      current = best_poll;
      theta = best_theta;
    } else {
      step *= 0.5;
    }
  }
  return current;
}

DeepestResult run_search(const Objective& objective, std::span<const SpdMatrix> starts, const SearchOptions& opt,
                         int n, const std::function<SpdMatrix(const Matrix&)>& normalize,
                         const std::function<double(const SpdMatrix&)>& sigma2_of) {
  if (starts.empty()) throw DomainError("no start points for the deepest search");
  Archive archive;
  DeepestResult r;
  std::optional<Scored> best;
  for (const auto& s : starts) {
    auto found = pattern_search(objective, s, opt, archive, r.evaluations);
    if (!found) continue;
    if (!best || found->count > best->count ||
        (found->count == best->count && lex_less(found->sigma, best->sigma))) {
      best = found;
    }
  }
  if (!best) throw DomainError("deepest search found no valid candidate");
  r.argmax = best->sigma;
  r.count = best->count;
  r.value = static_cast<double>(best->count) / n;
  r.sigma2 = sigma2_of(r.argmax);

  const auto near = archive.near(opt.max_near);
  for (const auto& s : near) r.near_maximizers.push_back(s.sigma);
  const std::vector<double> weights(r.near_maximizers.size(), 1.0 / static_cast<double>(r.near_maximizers.size()));

  auto depth_of = [&](const Matrix& m) -> std::optional<Scored> { return objective(m); };
  std::optional<Scored> rep;
  try {
    rep = depth_of(karcher_mean(r.near_maximizers, weights).entries());
  } catch (const KarcherNonConvergence& e) {
    rep = depth_of(e.last_iterate.entries());
  }
  r.representative_rule = "karcher";
  if (!rep || rep->count < r.count - 1) {
    Matrix mean = Matrix::Zero(r.argmax.dim(), r.argmax.dim());
    for (const auto& m : r.near_maximizers) mean += m.entries() / static_cast<double>(r.near_maximizers.size());
    rep = depth_of(normalize(mean).entries());
    r.representative_rule = "arithmetic";
  }
  if (!rep || rep->count < r.count - 1) {
    rep = Scored{r.argmax, r.count};
    r.representative_rule = "argmax";
  }
  r.representative = rep->sigma;
  r.representative_value = static_cast<double>(rep->count) / n;
  return r;
}

std::optional<SpdMatrix> try_spd(const Matrix& m) {
  try {
    return SpdMatrix(m);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

DeepestResult deepest_scatter(const ScatterDepthEvaluator& ev, std::span<const SpdMatrix> starts,
                              const SearchOptions& options) {
  const Objective objective = [&](const Matrix& m) -> std::optional<Scored> {
    auto s = try_spd(0.5 * (m + m.transpose()));
    if (!s) return std::nullopt;
    return Scored{*s, ev.evaluate(*s).count};
  };
  return run_search(
      objective, starts, options, ev.n(), [](const Matrix& m) { return SpdMatrix(m); },
      [](const SpdMatrix&) { return 1.0; });
}

DeepestResult deepest_shape(const ScatterDepthEvaluator& ev, ScaleFunctional scale, std::span<const SpdMatrix> starts,
                            const SearchOptions& options) {
  const Objective objective = [&](const Matrix& m) -> std::optional<Scored> {
    auto s = try_spd(0.5 * (m + m.transpose()));
    if (!s) return std::nullopt;
    const SpdMatrix v = ShapeMatrix::normalize(*s, scale).v;
    return Scored{v, shape_depth(ev, v).count};
  };
  return run_search(
      objective, starts, options, ev.n(),
      [scale](const Matrix& m) { return ShapeMatrix::normalize(SpdMatrix(m), scale).v; },
      [&](const SpdMatrix& v) { return shape_depth(ev, v).sigma2; });
}

std::vector<SpdMatrix> default_starts(const Dataset& d, const ScatterDepthEvaluator& ev, const SearchOptions& options,
                                      bool for_shape) {
  const Matrix& y = ev.centered();
  if (y.cwiseAbs().maxCoeff() == 0.0) throw DomainError("degenerate data: every observation equals the location");
  const int k = ev.k();
  std::vector<SpdMatrix> out;
  auto profiled = [&](const SpdMatrix& s) { return for_shape ? s : s.scaled(shape_depth(ev, s).sigma2); };

  if (y.rows() > k) {
    if (auto plug = try_spd(y.transpose() * y / static_cast<double>(y.rows() - 1))) out.push_back(profiled(*plug));
  }
  if (d.n() > k + 1) {
    try {
      McdOptions mcd;
      mcd.n_starts = options.mcd_starts;
      mcd.seed = options.seed;
      out.push_back(profiled(fast_mcd(d, mcd).raw_scatter));
    } catch (const DomainError&) {
      // Singular subsets everywhere: fall back to the remaining starts.
    }
  }
  if (for_shape) {
    out.push_back(SpdMatrix::identity(k));
    auto rng = substream(options.seed, "search");
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (static_cast<int>(out.size()) < options.starts) {
      Matrix g(k, k);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= i; ++j) g(i, j) = g(j, i) = 0.5 * gauss(rng);
      }
      const Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
      out.push_back(SpdMatrix::from_spectrum(eig.eigenvalues().array().exp().matrix(), eig.eigenvectors()));
    }
  } else {
    const double anchor = profile_anchor(y, SpdMatrix::identity(k));
    const int offsets[] = {0, -3, 3, -6, 6, -9, 9, -12, 12, -15, 15};
    for (int j : offsets) {
      if (static_cast<int>(out.size()) >= options.starts) break;
      out.push_back(SpdMatrix::identity(k).scaled(anchor * std::pow(10.0, 0.3 * j)));
    }
  }
  if (static_cast<int>(out.size()) > options.starts) out.erase(out.begin() + std::max(options.starts, 1), out.end());
  return out;
}

DeepestResult deepest_scatter(const Dataset& d, const LocationSpec& t, const DirectionBudget& dirs,
                              const SearchOptions& options) {
  const ScatterDepthEvaluator ev(d, resolve_location(d, t, dirs), dirs);
  const auto starts = default_starts(d, ev, options, false);
  return deepest_scatter(ev, starts, options);
}

DeepestResult deepest_shape(const Dataset& d, const LocationSpec& t, ScaleFunctional s, const DirectionBudget& dirs,
                            const SearchOptions& options) {
  const ScatterDepthEvaluator ev(d, resolve_location(d, t, dirs), dirs);
  const auto starts = default_starts(d, ev, options, true);
  return deepest_shape(ev, s, starts, options);
}

}  // namespace sdepth
