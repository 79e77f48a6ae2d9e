#include "sdepth/kernels.hpp"

#include <algorithm>
#include <limits>

#include <omp.h>

namespace sdepth {

void set_num_threads(int threads) {
  omp_set_num_threads(threads > 0 ? threads : omp_get_num_procs());
}

int num_threads() { return omp_get_max_threads(); }

namespace kernels {

namespace {

// Projections p_i = u'y_i accumulated coordinate by coordinate so that the
// per-element arithmetic is the same in every kernel.
void project(const Matrix& centered, const double* u, std::vector<double>& out) {
  const Eigen::Index n = centered.rows();
  const Eigen::Index k = centered.cols();
  out.assign(static_cast<std::size_t>(n), 0.0);
  double* p = out.data();
  for (Eigen::Index j = 0; j < k; ++j) {
    const double uj = u[j];
    const double* col = centered.col(j).data();
    for (Eigen::Index i = 0; i < n; ++i) p[i] += uj * col[i];
  }
}

double quadratic_form(const Matrix& s, const double* u) {
  const Eigen::Index k = s.rows();
  double acc = 0.0;
  for (Eigen::Index a = 0; a < k; ++a) {
    double row = 0.0;
    for (Eigen::Index b = 0; b < k; ++b) row += s(a, b) * u[b];
    acc += u[a] * row;
  }
  return acc;
}

bool better(const DirectionalMin& a, const DirectionalMin& b) {
  if (a.count != b.count) return a.count < b.count;
  return a.direction < b.direction;
}

DirectionalMin scatter_counts(const std::vector<double>& proj, double threshold, int direction) {
  int inner = 0;
  int outer = 0;
  const std::size_t n = proj.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double q = proj[i] * proj[i];
    inner += q <= threshold;
    outer += q >= threshold;
  }
  DirectionalMin out;
  out.inner = inner;
  out.outer = outer;
  out.inner_binding = inner <= outer;
  out.count = std::min(inner, outer);
  out.direction = direction;
  return out;
}

std::vector<DirectionalMin> initial_minima(std::size_t m) {
  DirectionalMin worst;
  worst.count = std::numeric_limits<int>::max();
  worst.direction = std::numeric_limits<int>::max();
  return std::vector<DirectionalMin>(m, worst);
}

void check_inputs(const Matrix& centered, const Matrix& directions) {
  if (centered.cols() != directions.rows()) throw DimensionMismatch("direction/data dimension mismatch");
  if (directions.cols() == 0) throw DomainError("no directions supplied");
}

void update_profile(std::vector<double>& z, ProfileBounds& bounds) {
  std::sort(z.begin(), z.end());
  const std::size_t n = z.size();
  for (std::size_t l = 1; l <= n; ++l) {
    bounds.lower[l] = std::max(bounds.lower[l], z[l - 1]);
    bounds.upper[l] = std::min(bounds.upper[l], z[n - l]);
  }
}

ProfileBounds empty_bounds(std::size_t n) {
  ProfileBounds b;
  b.lower.assign(n + 1, -std::numeric_limits<double>::infinity());
  b.upper.assign(n + 1, std::numeric_limits<double>::infinity());
  return b;
}

void location_counts_for_sorted(const std::vector<double>& proj, std::vector<double>& sorted, std::vector<int>& best) {
  sorted = proj;
  std::sort(sorted.begin(), sorted.end());
  const int n = static_cast<int>(proj.size());
  for (int j = 0; j < n; ++j) {
    // #{i : p_i >= p_j}
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), proj[static_cast<std::size_t>(j)]);
    const int count = n - static_cast<int>(it - sorted.begin());
    best[static_cast<std::size_t>(j)] = std::min(best[static_cast<std::size_t>(j)], count);
  }
}

DirectionalMin sorted_counts(const double* sorted, std::size_t n, double threshold, int direction) {
  const int inner = static_cast<int>(std::upper_bound(sorted, sorted + n, threshold) - sorted);
  const int outer = static_cast<int>(sorted + n - std::lower_bound(sorted, sorted + n, threshold));
  DirectionalMin out;
  out.inner = inner;
  out.outer = outer;
  out.inner_binding = inner <= outer;
  out.count = std::min(inner, outer);
  out.direction = direction;
  return out;
}

void update_profile_sorted(const double* sorted, std::size_t n, double scale, ProfileBounds& bounds) {
  for (std::size_t l = 1; l <= n; ++l) {
    bounds.lower[l] = std::max(bounds.lower[l], sorted[l - 1] / scale);
    bounds.upper[l] = std::min(bounds.upper[l], sorted[n - l] / scale);
  }
}

void merge_bounds(const ProfileBounds& local, ProfileBounds& bounds) {
  for (std::size_t l = 0; l < bounds.lower.size(); ++l) {
    bounds.lower[l] = std::max(bounds.lower[l], local.lower[l]);
    bounds.upper[l] = std::min(bounds.upper[l], local.upper[l]);
  }
}

void check_table(const Matrix& sorted, const Matrix& directions) {
  if (sorted.cols() != directions.cols()) throw DimensionMismatch("projection table does not match directions");
  if (directions.cols() == 0) throw DomainError("no directions supplied");
}

}  // namespace

std::vector<DirectionalMin> scatter_min_serial(const Matrix& centered, const Matrix& directions,
                                               std::span<const SpdMatrix> scatters) {
  check_inputs(centered, directions);
  auto best = initial_minima(scatters.size());
  std::vector<double> proj;
  for (Eigen::Index d = 0; d < directions.cols(); ++d) {
    const double* u = directions.col(d).data();
    project(centered, u, proj);
    for (std::size_t s = 0; s < scatters.size(); ++s) {
      const auto cand = scatter_counts(proj, quadratic_form(scatters[s].entries(), u), static_cast<int>(d));
      if (better(cand, best[s])) best[s] = cand;
    }
  }
  return best;
}

std::vector<DirectionalMin> scatter_min_parallel(const Matrix& centered, const Matrix& directions,
                                                 std::span<const SpdMatrix> scatters) {
  check_inputs(centered, directions);
  auto best = initial_minima(scatters.size());
  const Eigen::Index n_dirs = directions.cols();
#pragma omp parallel
  {
    auto local = initial_minima(scatters.size());
    std::vector<double> proj;
#pragma omp for schedule(static)
    for (Eigen::Index d = 0; d < n_dirs; ++d) {
      const double* u = directions.col(d).data();
      project(centered, u, proj);
      for (std::size_t s = 0; s < scatters.size(); ++s) {
        const auto cand = scatter_counts(proj, quadratic_form(scatters[s].entries(), u), static_cast<int>(d));
        if (better(cand, local[s])) local[s] = cand;
      }
    }
#pragma omp critical
    for (std::size_t s = 0; s < scatters.size(); ++s) {
      if (better(local[s], best[s])) best[s] = local[s];
    }
  }
  return best;
}

ProfileBounds profile_bounds_serial(const Matrix& centered, const Matrix& directions, const SpdMatrix& shape) {
  check_inputs(centered, directions);
  const auto n = static_cast<std::size_t>(centered.rows());
  ProfileBounds bounds = empty_bounds(n);
  std::vector<double> proj;
  for (Eigen::Index d = 0; d < directions.cols(); ++d) {
    const double* u = directions.col(d).data();
    project(centered, u, proj);
    const double scale = quadratic_form(shape.entries(), u);
    for (double& p : proj) p = p * p / scale;
    update_profile(proj, bounds);
  }
  return bounds;
}

ProfileBounds profile_bounds_parallel(const Matrix& centered, const Matrix& directions, const SpdMatrix& shape) {
  check_inputs(centered, directions);
  const auto n = static_cast<std::size_t>(centered.rows());
  ProfileBounds bounds = empty_bounds(n);
  const Eigen::Index n_dirs = directions.cols();
#pragma omp parallel
  {
    ProfileBounds local = empty_bounds(n);
    std::vector<double> proj;
#pragma omp for schedule(static)
    for (Eigen::Index d = 0; d < n_dirs; ++d) {
      const double* u = directions.col(d).data();
      project(centered, u, proj);
      const double scale = quadratic_form(shape.entries(), u);
      for (double& p : proj) p = p * p / scale;
      update_profile(proj, local);
    }
#pragma omp critical
    merge_bounds(local, bounds);
  }
  return bounds;
}

Matrix sorted_square_projections_serial(const Matrix& centered, const Matrix& directions) {
  check_inputs(centered, directions);
  Matrix out(centered.rows(), directions.cols());
  std::vector<double> proj;
  for (Eigen::Index d = 0; d < directions.cols(); ++d) {
    project(centered, directions.col(d).data(), proj);
    for (double& p : proj) p = p * p;
    std::sort(proj.begin(), proj.end());
    std::copy(proj.begin(), proj.end(), out.col(d).data());
  }
  return out;
}

Matrix sorted_square_projections_parallel(const Matrix& centered, const Matrix& directions) {
  check_inputs(centered, directions);
  Matrix out(centered.rows(), directions.cols());
  const Eigen::Index n_dirs = directions.cols();
#pragma omp parallel
  {
    std::vector<double> proj;
#pragma omp for schedule(static)
    for (Eigen::Index d = 0; d < n_dirs; ++d) {
      project(centered, directions.col(d).data(), proj);
      for (double& p : proj) p = p * p;
      std::sort(proj.begin(), proj.end());
      std::copy(proj.begin(), proj.end(), out.col(d).data());
    }
  }
  return out;
}

std::vector<DirectionalMin> scatter_min_sorted_serial(const Matrix& sorted, const Matrix& directions,
                                                      std::span<const SpdMatrix> scatters) {
  check_table(sorted, directions);
  auto best = initial_minima(scatters.size());
  const auto n = static_cast<std::size_t>(sorted.rows());
  for (Eigen::Index d = 0; d < directions.cols(); ++d) {
    const double* u = directions.col(d).data();
    for (std::size_t s = 0; s < scatters.size(); ++s) {
      const auto cand =
          sorted_counts(sorted.col(d).data(), n, quadratic_form(scatters[s].entries(), u), static_cast<int>(d));
      if (better(cand, best[s])) best[s] = cand;
    }
  }
  return best;
}

std::vector<DirectionalMin> scatter_min_sorted_parallel(const Matrix& sorted, const Matrix& directions,
                                                        std::span<const SpdMatrix> scatters) {
  check_table(sorted, directions);
  auto best = initial_minima(scatters.size());
  const auto n = static_cast<std::size_t>(sorted.rows());
  const Eigen::Index n_dirs = directions.cols();
#pragma omp parallel
  {
    auto local = initial_minima(scatters.size());
#pragma omp for schedule(static)
    for (Eigen::Index d = 0; d < n_dirs; ++d) {
      const double* u = directions.col(d).data();
      for (std::size_t s = 0; s < scatters.size(); ++s) {
        const auto cand =
            sorted_counts(sorted.col(d).data(), n, quadratic_form(scatters[s].entries(), u), static_cast<int>(d));
        if (better(cand, local[s])) local[s] = cand;
      }
    }
#pragma omp critical
    for (std::size_t s = 0; s < scatters.size(); ++s) {
      if (better(local[s], best[s])) best[s] = local[s];
    }
  }
  return best;
}

ProfileBounds profile_bounds_sorted_serial(const Matrix& sorted, const Matrix& directions, const SpdMatrix& shape) {
  check_table(sorted, directions);
  const auto n = static_cast<std::size_t>(sorted.rows());
  ProfileBounds bounds = empty_bounds(n);
  for (Eigen::Index d = 0; d < directions.cols(); ++d) {
    update_profile_sorted(sorted.col(d).data(), n, quadratic_form(shape.entries(), directions.col(d).data()), bounds);
  }
  return bounds;
}

ProfileBounds profile_bounds_sorted_parallel(const Matrix& sorted, const Matrix& directions, const SpdMatrix& shape) {
  check_table(sorted, directions);
  const auto n = static_cast<std::size_t>(sorted.rows());
  ProfileBounds bounds = empty_bounds(n);
  const Eigen::Index n_dirs = directions.cols();
#pragma omp parallel
  {
    ProfileBounds local = empty_bounds(n);
#pragma omp for schedule(static)
    for (Eigen::Index d = 0; d < n_dirs; ++d) {
      update_profile_sorted(sorted.col(d).data(), n, quadratic_form(shape.entries(), directions.col(d).data()), local);
    }
#pragma omp critical
    merge_bounds(local, bounds);
  }
  return bounds;
}

DirectionalMin location_min_serial(const Matrix& centered, const Matrix& directions) {
  check_inputs(centered, directions);
  DirectionalMin best = initial_minima(1).front();
  std::vector<double> proj;
  for (Eigen::Index d = 0; d < directions.cols(); ++d) {
    project(centered, directions.col(d).data(), proj);
    int count = 0;
    for (double p : proj) count += p >= 0.0;
    DirectionalMin cand;
    cand.count = count;
    cand.inner = count;
    cand.outer = count;
    cand.direction = static_cast<int>(d);
    if (better(cand, best)) best = cand;
  }
  return best;
}

DirectionalMin location_min_parallel(const Matrix& centered, const Matrix& directions) {
  check_inputs(centered, directions);
  DirectionalMin best = initial_minima(1).front();
  const Eigen::Index n_dirs = directions.cols();
#pragma omp parallel
  {
    DirectionalMin local = initial_minima(1).front();
    std::vector<double> proj;
#pragma omp for schedule(static)
    for (Eigen::Index d = 0; d < n_dirs; ++d) {
      project(centered, directions.col(d).data(), proj);
      int count = 0;
      for (double p : proj) count += p >= 0.0;
      DirectionalMin cand;
      cand.count = count;
      cand.inner = count;
      cand.outer = count;
      cand.direction = static_cast<int>(d);
      if (better(cand, local)) local = cand;
    }
#pragma omp critical
    if (better(local, best)) best = local;
  }
  return best;
}

std::vector<int> sample_location_depths_serial(const Matrix& points, const Matrix& directions) {
  check_inputs(points, directions);
  const auto n = static_cast<std::size_t>(points.rows());
  std::vector<int> best(n, std::numeric_limits<int>::max());
  std::vector<double> proj;
  std::vector<double> sorted;
  for (Eigen::Index d = 0; d < directions.cols(); ++d) {
    project(points, directions.col(d).data(), proj);
    location_counts_for_sorted(proj, sorted, best);
  }
  return best;
}

std::vector<int> sample_location_depths_parallel(const Matrix& points, const Matrix& directions) {
  check_inputs(points, directions);
  const auto n = static_cast<std::size_t>(points.rows());
  std::vector<int> best(n, std::numeric_limits<int>::max());
  const Eigen::Index n_dirs = directions.cols();
#pragma omp parallel
  {
    std::vector<int> local(n, std::numeric_limits<int>::max());
    std::vector<double> proj;
    std::vector<double> sorted;
#pragma omp for schedule(static)
    for (Eigen::Index d = 0; d < n_dirs; ++d) {
      project(points, directions.col(d).data(), proj);
      location_counts_for_sorted(proj, sorted, local);
    }
#pragma omp critical
    for (std::size_t j = 0; j < n; ++j) best[j] = std::min(best[j], local[j]);
  }
  return best;
}

int hyperplane_mass_parallel(const Matrix& centered, const Matrix& directions, double tol) {
  check_inputs(centered, directions);
  int best = 0;
  const Eigen::Index n_dirs = directions.cols();
#pragma omp parallel
  {
    int local = 0;
    std::vector<double> proj;
#pragma omp for schedule(static)
    for (Eigen::Index d = 0; d < n_dirs; ++d) {
      project(centered, directions.col(d).data(), proj);
      int count = 0;
      for (double p : proj) count += std::abs(p) <= tol;
      local = std::max(local, count);
    }
#pragma omp critical
    best = std::max(best, local);
  }
  return best;
}

}  // namespace kernels
}  // namespace sdepth
