#include "sdepth/spd.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace sdepth {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kDefinitenessTol = 1e-12;
constexpr double kSignTol = 1e-12;

// Eigen returns ascending eigenvalues; reverse and fix signs.
void decompose(const Matrix& sym, Vector& values, Matrix& vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw DomainError("eigendecomposition failed");
  }
  const Eigen::Index k = sym.rows();
  values.resize(k);
  vectors.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    values(i) = solver.eigenvalues()(k - 1 - i);
    vectors.col(i) = solver.eigenvectors().col(k - 1 - i);
    for (Eigen::Index r = 0; r < k; ++r) {
      if (std::abs(vectors(r, i)) > kSignTol) {
        if (vectors(r, i) < 0.0) vectors.col(i) = -vectors.col(i);
        break;
      }
    }
  }
}

Matrix compose(const Matrix& basis, const Vector& values) {
  Matrix out = basis * values.asDiagonal() * basis.transpose();
  return 0.5 * (out + out.transpose());
}

Matrix symmetric_exp(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (sym + sym.transpose()));
  return compose(solver.eigenvectors(), solver.eigenvalues().array().exp().matrix());
}

void require_same_dim(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << "dimension mismatch: " << a.dim() << " vs " << b.dim();
    throw DimensionMismatch(msg.str());
  }
}

}  // namespace

SpdMatrix::SpdMatrix(const Matrix& entries) {
  if (entries.rows() == 0 || entries.rows() != entries.cols()) {
    throw DomainError("scatter matrix must be square and non-empty");
  }
  if (!entries.allFinite()) throw DomainError("scatter matrix has non-finite entries");
  const double scale = entries.cwiseAbs().maxCoeff();
  const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * std::max(scale, 1e-300)) {
    throw DomainError("scatter matrix is not symmetric");
  }
  entries_ = 0.5 * (entries + entries.transpose());
  decompose(entries_, eigenvalues_, eigenvectors_);
  if (!(eigenvalues_(eigenvalues_.size() - 1) > kDefinitenessTol * eigenvalues_(0)) ||
      !(eigenvalues_(0) > 0.0)) {
    throw DomainError("scatter matrix is not positive definite");
  }
}

SpdMatrix::SpdMatrix(Matrix entries, Vector eigenvalues, Matrix eigenvectors)
    : entries_(std::move(entries)),
      eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)) {}

SpdMatrix SpdMatrix::identity(int k) { return SpdMatrix(Matrix::Identity(k, k)); }

SpdMatrix SpdMatrix::diagonal(const Vector& diag) { return SpdMatrix(Matrix(diag.asDiagonal())); }

SpdMatrix SpdMatrix::diagonal(std::initializer_list<double> diag) {
  Vector v(static_cast<Eigen::Index>(diag.size()));
  Eigen::Index i = 0;
  for (double x : diag) v(i++) = x;
  return diagonal(v);
}

SpdMatrix SpdMatrix::from_spectrum(const Vector& values, const Matrix& basis) {
  return SpdMatrix(compose(basis, values));
}

SpdMatrix SpdMatrix::inverse() const {
  return matrix_function(*this, [](double x) { return 1.0 / x; });
}

SpdMatrix SpdMatrix::sqrt() const {
  return matrix_function(*this, [](double x) { return std::sqrt(x); });
}

SpdMatrix SpdMatrix::inv_sqrt() const {
  return matrix_function(*this, [](double x) { return 1.0 / std::sqrt(x); });
}

SpdMatrix SpdMatrix::power(double t) const {
  return matrix_function(*this, [t](double x) { return std::pow(x, t); });
}

SpdMatrix SpdMatrix::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scale factor must be positive");
  return SpdMatrix(entries_ * c, eigenvalues_ * c, eigenvectors_);
}

double SpdMatrix::log_det() const { return eigenvalues_.array().log().sum(); }

double SpdMatrix::det() const { return eigenvalues_.prod(); }

Matrix apply_function(const SpdMatrix& a, const std::function<double(double)>& f) {
  Vector mapped(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    mapped(i) = f(a.eigenvalues()(i));
    if (!std::isfinite(mapped(i))) throw DomainError("matrix function is not finite on the spectrum");
  }
  return compose(a.eigenvectors(), mapped);
}

SpdMatrix matrix_function(const SpdMatrix& a, const std::function<double(double)>& f) {
  return SpdMatrix(apply_function(a, f));
}

double frobenius_distance(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a, b);
  return (b.entries() - a.entries()).norm();
}

double geodesic_distance(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a, b);
  const Matrix s = a.inv_sqrt().entries();
  const Matrix inner = s * b.entries() * s;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (inner + inner.transpose()), Eigen::EigenvaluesOnly);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double l = std::log(solver.eigenvalues()(i));
    acc += l * l;
  }
  return std::sqrt(acc);
}

std::string to_string(PathKind kind) {
  switch (kind) {
    case PathKind::Linear: return "linear";
    case PathKind::Geodesic: return "geodesic";
    case PathKind::Harmonic: return "harmonic";
  }
  return "unknown";
}

PathKind path_kind_from_string(const std::string& name) {
  if (name == "linear") return PathKind::Linear;
  if (name == "geodesic") return PathKind::Geodesic;
  if (name == "harmonic") return PathKind::Harmonic;
  throw std::invalid_argument("unknown path kind '" + name + "'");
}

PathSpec::PathSpec(SpdMatrix a_, SpdMatrix b_, PathKind kind_)
    : a(std::move(a_)), b(std::move(b_)), kind(kind_) {
  require_same_dim(a, b);
}

SpdMatrix path_point(const PathSpec& path, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("path parameter must lie in [0, 1]");
  if (t == 0.0) return path.a;
  if (t == 1.0) return path.b;
  switch (path.kind) {
    case PathKind::Linear:
      return SpdMatrix((1.0 - t) * path.a.entries() + t * path.b.entries());
    case PathKind::Geodesic: {
      const SpdMatrix root = path.a.sqrt();
      const Matrix inv_root = path.a.inv_sqrt().entries();
      const SpdMatrix inner(inv_root * path.b.entries() * inv_root);
      const Matrix mid = inner.power(t).entries();
      return SpdMatrix(root.entries() * mid * root.entries());
    }
    case PathKind::Harmonic: {
      const Matrix conc = (1.0 - t) * path.a.inverse().entries() + t * path.b.inverse().entries();
      return SpdMatrix(conc).inverse();
    }
  }
  throw DomainError("unknown path kind");
}

double karcher_objective(std::span<const SpdMatrix> matrices, std::span<const double> weights,
                         const SpdMatrix& center) {
  double acc = 0.0;
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const double d = geodesic_distance(matrices[i], center);
    acc += weights[i] * d * d;
  }
  return acc;
}

SpdMatrix karcher_mean(std::span<const SpdMatrix> matrices, std::span<const double> weights,
                       const KarcherOptions& options) {
  if (matrices.empty()) throw DomainError("karcher_mean needs at least one matrix");
  if (matrices.size() != weights.size()) throw DimensionMismatch("one weight per matrix required");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("weights must sum to one");
  for (double w : weights) {
    if (w < 0.0) throw DomainError("weights must be non-negative");
  }
  const int k = matrices.front().dim();
  for (const auto& m : matrices) {
    if (m.dim() != k) throw DimensionMismatch("karcher_mean inputs differ in dimension");
  }
  if (matrices.size() == 1) return matrices.front();

  // Start from the log-Euclidean mean, a good initial guess on this manifold.
  Matrix log_sum = Matrix::Zero(k, k);
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    log_sum += weights[i] * apply_function(matrices[i], [](double x) { return std::log(x); });
  }
  SpdMatrix current(symmetric_exp(log_sum));
  double objective = karcher_objective(matrices, weights, current);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const SpdMatrix root = current.sqrt();
    const Matrix inv_root = current.inv_sqrt().entries();
    Matrix tangent = Matrix::Zero(k, k);
    for (std::size_t i = 0; i < matrices.size(); ++i) {
      const SpdMatrix local(inv_root * matrices[i].entries() * inv_root);
      tangent += weights[i] * apply_function(local, [](double x) { return std::log(x); });
    }
    tangent = 0.5 * (tangent + tangent.transpose());
    if (tangent.norm() < options.tolerance) return current;

    double step = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 40; ++halving) {
      const Matrix expo = symmetric_exp(step * tangent);
      SpdMatrix candidate(Matrix(root.entries() * expo * root.entries()));
      const double cand_obj = karcher_objective(matrices, weights, candidate);
      if (cand_obj <= objective) {
        current = std::move(candidate);
        objective = cand_obj;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  throw KarcherNonConvergence("karcher_mean did not converge", current);
}

}  // namespace sdepth
