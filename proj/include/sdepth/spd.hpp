#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sdepth {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when a numeric routine is asked to leave its domain (non-finite
/// matrix function values, non-positive-definite input, bad parameters).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Symmetric positive-definite k x k matrix with a cached eigendecomposition.
///
/// Eigenvalues are stored in descending order. Each eigenvector is signed so
/// that its first component with magnitude above 1e-12 is positive, which
/// makes decompositions reproducible across runs.
///
/// Construction fails with DomainError when the input is not symmetric to
/// 1e-12 relative tolerance, contains non-finite entries, or has
/// lambda_min <= 1e-12 * lambda_max.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Matrix& entries);

  static SpdMatrix identity(int k);
  static SpdMatrix diagonal(const Vector& diag);
  static SpdMatrix diagonal(std::initializer_list<double> diag);
  /// O * diag(values) * O^T, with O assumed orthogonal.
  static SpdMatrix from_spectrum(const Vector& values, const Matrix& basis);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  const Vector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  double lambda_max() const { return eigenvalues_(0); }
  double lambda_min() const { return eigenvalues_(eigenvalues_.size() - 1); }

  SpdMatrix inverse() const;
  SpdMatrix sqrt() const;
  SpdMatrix inv_sqrt() const;
  SpdMatrix power(double t) const;
  SpdMatrix scaled(double c) const;

  double trace() const { return entries_.trace(); }
  double log_det() const;
  double det() const;

 private:
  SpdMatrix(Matrix entries, Vector eigenvalues, Matrix eigenvectors);

  Matrix entries_;
  Vector eigenvalues_;
  Matrix eigenvectors_;
};

/// f(A) = O diag(f(lambda_1), ..., f(lambda_k)) O^T. The result is only
/// guaranteed symmetric (f = log can produce indefinite matrices).
Matrix apply_function(const SpdMatrix& a, const std::function<double(double)>& f);

/// As apply_function, but the result must itself be SPD.
SpdMatrix matrix_function(const SpdMatrix& a, const std::function<double(double)>& f);

double frobenius_distance(const SpdMatrix& a, const SpdMatrix& b);

/// Affine-invariant Riemannian distance || log(a^{-1/2} b a^{-1/2}) ||_F.
double geodesic_distance(const SpdMatrix& a, const SpdMatrix& b);

enum class PathKind { Linear, Geodesic, Harmonic };

std::string to_string(PathKind kind);
PathKind path_kind_from_string(const std::string& name);

struct PathSpec {
  PathSpec(SpdMatrix a, SpdMatrix b, PathKind kind);

  SpdMatrix a;
  SpdMatrix b;
  PathKind kind;
};

/// Point at parameter t in [0, 1] on the linear, geodesic or harmonic path.
SpdMatrix path_point(const PathSpec& path, double t);

struct KarcherOptions {
  int max_iterations = 200;
  double tolerance = 1e-9;
};

class KarcherNonConvergence : public std::runtime_error {
 public:
  KarcherNonConvergence(const std::string& what, SpdMatrix last)
      : std::runtime_error(what), last_iterate(std::move(last)) {}
  SpdMatrix last_iterate;
};

/// Weighted Riemannian center of mass under the geodesic distance.
SpdMatrix karcher_mean(std::span<const SpdMatrix> matrices, std::span<const double> weights,
                       const KarcherOptions& options = {});

/// Sum_i w_i d_g^2(m_i, center).
double karcher_objective(std::span<const SpdMatrix> matrices, std::span<const double> weights,
                         const SpdMatrix& center);

}  // namespace sdepth
