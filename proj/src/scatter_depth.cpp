#include "sdepth/scatter_depth.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <limits>
#include <mutex>
#include <numeric>
#include <unordered_set>

#include "sdepth/exact2d.hpp"
#include "nelder_mead.hpp"

namespace sdepth {

std::string to_string(BindingSide side) { return side == BindingSide::Inner ? "inner" : "outer"; }

namespace {

Matrix default_directions(int k, const DirectionBudget& budget) {
  if (k == 1) return Matrix::Ones(1, 1);  // u and -u give the same objective
  return generate_directions(k, budget);
}

DepthEvaluation from_directional(const kernels::DirectionalMin& m, const Matrix& dirs, int n) {
  DepthEvaluation e;
  e.count = m.count;
  e.value = static_cast<double>(m.count) / n;
  e.argmin_direction = dirs.col(m.direction);
  e.binding_side = m.inner_binding ? BindingSide::Inner : BindingSide::Outer;
  e.n_directions_used = static_cast<int>(dirs.cols());
  return e;
}

// Sorted squared projections are built once the evaluator has been reused a
// few times (or on the first profile query), unless the table would be huge.
constexpr int kTableWarmup = 4;
constexpr double kMaxTableEntries = 2.5e7;

}  // namespace

struct ScatterDepthEvaluator::ProjectionCache {
  std::once_flag once;
  std::atomic<int> uses{0};
  Matrix sorted;
};

const Matrix* ScatterDepthEvaluator::sorted_table(bool force) const {
  if (!cache_) return nullptr;
  if (!force && cache_->uses.fetch_add(1) < kTableWarmup) return nullptr;
  std::call_once(cache_->once, [&] { cache_->sorted = kernels::sorted_square_projections_parallel(centered_, directions_); });
  return &cache_->sorted;
}

ScatterDepthEvaluator::ScatterDepthEvaluator(const Dataset& d, const Vector& theta, const DirectionBudget& budget)
    : ScatterDepthEvaluator(d.centered(theta), budget) {}

ScatterDepthEvaluator::ScatterDepthEvaluator(Matrix centered, const DirectionBudget& budget)
    : centered_(std::move(centered)) {
  if (centered_.rows() == 0) throw DomainError("empty dataset");
  budget.validate(k());
  exact_ = budget.exact();
  if (!exact_) directions_ = default_directions(k(), budget);
  if (!exact_ && static_cast<double>(n()) * static_cast<double>(directions_.cols()) <= kMaxTableEntries) {
    cache_ = std::make_shared<ProjectionCache>();
  }
}

ScatterDepthEvaluator::ScatterDepthEvaluator(Matrix centered, Matrix directions)
    : centered_(std::move(centered)), directions_(std::move(directions)) {
  if (centered_.rows() == 0) throw DomainError("empty dataset");
  if (directions_.rows() != centered_.cols()) throw DimensionMismatch("direction/data dimension mismatch");
  if (directions_.cols() == 0) throw DomainError("no directions supplied");
  if (static_cast<double>(n()) * static_cast<double>(directions_.cols()) <= kMaxTableEntries) {
    cache_ = std::make_shared<ProjectionCache>();
  }
}

int ScatterDepthEvaluator::directions_used() const {
  return exact_ ? -1 : static_cast<int>(directions_.cols());
}

DepthEvaluation ScatterDepthEvaluator::evaluate(const SpdMatrix& sigma) const {
  if (sigma.dim() != k()) throw DimensionMismatch("scatter matrix dimension differs from data");
  if (exact_) {
    const auto m = exact2d::scatter_min(centered_, sigma);
    DepthEvaluation e;
    e.count = m.count;
    e.value = static_cast<double>(m.count) / n();
    e.argmin_direction = Vector(2);
    e.argmin_direction << std::cos(m.angle), std::sin(m.angle);
    e.binding_side = m.inner_binding ? BindingSide::Inner : BindingSide::Outer;
    e.n_directions_used = m.angles_evaluated;
    return e;
  }
  const SpdMatrix one[] = {sigma};
  const Matrix* table = sorted_table(false);
  const auto m = table ? kernels::scatter_min_sorted_parallel(*table, directions_, one).front()
                       : kernels::scatter_min_parallel(centered_, directions_, one).front();
  return from_directional(m, directions_, n());
}

std::vector<DepthEvaluation> ScatterDepthEvaluator::evaluate_batch(std::span<const SpdMatrix> sigmas) const {
  std::vector<DepthEvaluation> out;
  out.reserve(sigmas.size());
  if (exact_) {
    for (const auto& s : sigmas) out.push_back(evaluate(s));
    return out;
  }
  for (const auto& s : sigmas) {
    if (s.dim() != k()) throw DimensionMismatch("scatter matrix dimension differs from data");
  }
  const Matrix* table = sorted_table(false);
  for (const auto& m : table ? kernels::scatter_min_sorted_parallel(*table, directions_, sigmas)
                             : kernels::scatter_min_parallel(centered_, directions_, sigmas)) {
    out.push_back(from_directional(m, directions_, n()));
  }
  return out;
}

kernels::ProfileBounds ScatterDepthEvaluator::profile_bounds(const SpdMatrix& shape) const {
  if (exact_) throw DomainError("profile bounds need a sampled direction set");
  if (shape.dim() != k()) throw DimensionMismatch("shape matrix dimension differs from data");
  if (const Matrix* table = sorted_table(true)) return kernels::profile_bounds_sorted_parallel(*table, directions_, shape);
  return kernels::profile_bounds_parallel(centered_, directions_, shape);
}

DepthEvaluation scatter_depth(const Dataset& d, const LocationSpec& t, const SpdMatrix& sigma,
                              const DirectionBudget& dirs) {
  if (sigma.dim() != d.k()) throw DimensionMismatch("scatter matrix dimension differs from data");
  const Vector theta = resolve_location(d, t, dirs);
  return ScatterDepthEvaluator(d, theta, dirs).evaluate(sigma);
}

DepthEvaluation concentration_depth(const Dataset& d, const LocationSpec& t, const SpdMatrix& gamma,
                                    const DirectionBudget& dirs) {
  return scatter_depth(d, t, gamma.inverse(), dirs);
}

DepthEvaluation scatter_depth_sup_location(const Dataset& d, const SpdMatrix& sigma, const DirectionBudget& dirs,
                                           int theta_budget) {
  if (theta_budget < 1) throw DomainError("theta budget must be positive");
  if (sigma.dim() != d.k()) throw DimensionMismatch("scatter matrix dimension differs from data");
  dirs.validate(d.k());
  const Matrix shared = dirs.exact() ? Matrix() : default_directions(d.k(), dirs);
  auto evaluator_at = [&](const Vector& theta) {
    return dirs.exact() ? ScatterDepthEvaluator(d.centered(theta), dirs)
                        : ScatterDepthEvaluator(d.centered(theta), shared);
  };

  int used = 0;
  DepthEvaluation best;
  best.count = -1;
  auto score = [&](const Vector& theta) -> int {
    if (used >= theta_budget) return -1;
    ++used;
    const auto e = evaluator_at(theta).evaluate(sigma);
    if (e.count > best.count) best = e;
    return e.count;
  };

  std::vector<detail::Candidate> log;
  auto consider = [&](const Vector& theta) { log.push_back({theta, score(theta)}); };
  consider(resolve_location(d, LocationSpec::tukey(), dirs));
  consider(coordinate_median(d));
  for (int i = 0; i < d.n() && used < theta_budget; ++i) consider(d.obs().row(i).transpose());

  if (used < theta_budget) {
    std::vector<std::size_t> rank(log.size());
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return log[a].score > log[b].score; });
    Vector step(d.k());
    for (int j = 0; j < d.k(); ++j) {
      const double range = d.obs().col(j).maxCoeff() - d.obs().col(j).minCoeff();
      step(j) = range > 0.0 ? 0.05 * range : 1.0;
    }
    std::vector<Vector> seeds;
    for (std::size_t s = 0; s < std::min<std::size_t>(5, rank.size()); ++s) seeds.push_back(log[rank[s]].point);
    for (const auto& seed : seeds) {
      if (used >= theta_budget) break;
      detail::nelder_mead(score, seed, step, 10 * (d.k() + 1), log);
    }
  }
  return best;
}

DepthEvaluation pairwise_difference_depth(const Dataset& d, const SpdMatrix& sigma, const DirectionBudget& dirs,
                                          std::int64_t pair_budget) {
  const std::int64_t n = d.n();
  if (n < 2) throw DomainError("pairwise difference depth needs at least two observations");
  if (pair_budget < 1) throw DomainError("pair budget must be positive");
  const std::int64_t total = n * (n - 1);
  std::vector<std::int64_t> pairs;
  if (pair_budget >= total) {
    pairs.resize(static_cast<std::size_t>(total));
    std::iota(pairs.begin(), pairs.end(), 0);
  } else {
    // Floyd's sampling of distinct ordered pairs.
    auto rng = substream(dirs.seed, "pairs");
    std::unordered_set<std::int64_t> chosen;
    for (std::int64_t j = total - pair_budget; j < total; ++j) {
      std::uniform_int_distribution<std::int64_t> pick(0, j);
      const std::int64_t t = pick(rng);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    pairs.assign(chosen.begin(), chosen.end());
    std::sort(pairs.begin(), pairs.end());
  }
  Matrix diffs(static_cast<Eigen::Index>(pairs.size()), d.k());
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const std::int64_t i = pairs[r] / (n - 1);
    const std::int64_t rem = pairs[r] % (n - 1);
    const std::int64_t j = rem < i ? rem : rem + 1;
    diffs.row(static_cast<Eigen::Index>(r)) = d.obs().row(i) - d.obs().row(j);
  }
  return ScatterDepthEvaluator(std::move(diffs), dirs).evaluate(sigma);
}

bool region_contains(const Dataset& d, const LocationSpec& t, const SpdMatrix& sigma, double alpha,
                     const DirectionBudget& dirs) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  if (alpha == 0.0) return true;
  return scatter_depth(d, t, sigma, dirs).value >= alpha;
}

}  // namespace sdepth
