#include "sdepth/mcd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include <boost/math/distributions/chi_squared.hpp>

#include "sdepth/directions.hpp"

namespace sdepth {

int default_mcd_h(int n, int k) { return (n + k + 1) / 2; }

namespace {

struct SubsetFit {
  std::vector<int> idx;
  Vector mean;
  Matrix cov;
  double log_det = 0.0;
};

std::optional<SubsetFit> fit_subset(const Matrix& x, std::vector<int> idx) {
  std::sort(idx.begin(), idx.end());
  const auto m = static_cast<Eigen::Index>(idx.size());
  const Eigen::Index k = x.cols();
  if (m < 2) return std::nullopt;
  Matrix sub(m, k);
  for (Eigen::Index r = 0; r < m; ++r) sub.row(r) = x.row(idx[static_cast<std::size_t>(r)]);
  SubsetFit f;
  f.mean = sub.colwise().mean().transpose();
  const Matrix c = sub.rowwise() - f.mean.transpose();
  f.cov = (c.transpose() * c) / static_cast<double>(m - 1);
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(f.cov, Eigen::EigenvaluesOnly);
  const Vector ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 1e-12 * std::max(ev.maxCoeff(), std::numeric_limits<double>::min()))) return std::nullopt;
  f.log_det = ev.array().log().sum();
  f.idx = std::move(idx);
  return f;
}

Vector mahalanobis_sq(const Matrix& x, const Vector& mean, const Matrix& cov) {
  const Eigen::LLT<Matrix> llt(cov);
  const Matrix c = (x.rowwise() - mean.transpose()).transpose();
  const Matrix z = llt.matrixL().solve(c);
  return z.colwise().squaredNorm().transpose();
}

std::vector<int> smallest(const Vector& d2, int h) {
  std::vector<int> order(static_cast<std::size_t>(d2.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d2(a) < d2(b); });
  order.resize(static_cast<std::size_t>(h));
  return order;
}

double median(Vector v) {
  std::sort(v.data(), v.data() + v.size());
  const auto n = v.size();
  return n % 2 ? v(n / 2) : 0.5 * (v(n / 2 - 1) + v(n / 2));
}

}  // namespace

McdFit fast_mcd(const Dataset& d, const McdOptions& options) {
  const int n = d.n();
  const int k = d.k();
  const int h = options.h == 0 ? default_mcd_h(n, k) : options.h;
  if (h < default_mcd_h(n, k) || h > n) {
    throw DomainError("MCD subset size must lie in [floor((n+k+1)/2), n]");
  }
  if (h < k + 1) throw DomainError("MCD subset size must exceed the dimension");
  if (options.n_starts < 1) throw DomainError("MCD needs at least one start");
  const Matrix& x = d.obs();

  std::optional<SubsetFit> best;
  const int starts = h == n ? 1 : options.n_starts;
  for (int s = 0; s < starts; ++s) {
    std::optional<SubsetFit> fit;
    if (h == n) {
      std::vector<int> all(static_cast<std::size_t>(n));
      std::iota(all.begin(), all.end(), 0);
      fit = fit_subset(x, all);
    } else {
      auto rng = substream(options.seed, "mcd", static_cast<std::uint64_t>(s));
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int m = k + 1; m <= n && !fit; ++m) {
        fit = fit_subset(x, std::vector<int>(perm.begin(), perm.begin() + m));
      }
    }
    if (!fit) continue;
    for (int step = 0; step < options.max_csteps; ++step) {
      auto next = fit_subset(x, smallest(mahalanobis_sq(x, fit->mean, fit->cov), h));
      if (!next) break;
      if (fit->idx.size() != static_cast<std::size_t>(h)) {
        fit = std::move(next);
        continue;
      }
      if (next->idx == fit->idx || !(next->log_det < fit->log_det)) break;
      const double rel_drop = -std::expm1(next->log_det - fit->log_det);
      fit = std::move(next);
      if (rel_drop < 1e-12) break;
    }
    if (fit->idx.size() != static_cast<std::size_t>(h)) continue;
    if (!best || fit->log_det < best->log_det) best = std::move(fit);
  }
  if (!best) throw DomainError("every MCD start produced a singular subset covariance");

  const Vector d2 = mahalanobis_sq(x, best->mean, best->cov);
  const boost::math::chi_squared chi2(static_cast<double>(k));
  const double factor = median(d2) / boost::math::quantile(chi2, 0.5);
  McdFit out{best->idx, best->mean, SpdMatrix(best->cov * factor), factor, best->log_det, h};
  return out;
}

}  // namespace sdepth
