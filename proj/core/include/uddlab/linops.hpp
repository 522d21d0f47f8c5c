#pragma once

#include <complex>

#include <Eigen/Dense>

namespace uddlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Kronecker product; the left factor indexes the coarse blocks.
Matrix kron(const Matrix& a, const Matrix& b);

/// Largest singular value of `a` (the operator norm induced by the
/// Euclidean vector norm). Submultiplicative, unitarily invariant, and
/// invariant under Hermitian conjugation.
double sup_norm(const Matrix& a);

/// Sum of the singular values of the square matrix `a`. Dominates
/// sup_norm for every matrix.
double trace_norm(const Matrix& a);

/// A validated density operator: Hermitian within tolerance, eigenvalues
/// bounded below by -1e-10, trace within 1e-10 of one.
class DensityOperator {
 public:
  /// Validates `m` and throws std::invalid_argument if it is not square,
  /// not Hermitian, has an eigenvalue below -1e-10, or has |trace - 1|
  /// of 1e-10 or more.
  explicit DensityOperator(Matrix m);

  const Matrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  Matrix matrix_;
};

/// Trace-norm distance (1/2)*||rho1 - rho2||_1 in [0, 1]. Vanishes exactly
/// when the states coincide and reaches 1 exactly for orthogonal supports.
/// Throws std::invalid_argument on dimension mismatch.
double trace_distance(const DensityOperator& rho1, const DensityOperator& rho2);

/// Uhlmann fidelity tr sqrt(sqrt(rho1) rho2 sqrt(rho1)) in [0, 1]. Together
/// with the trace distance it obeys 1 - D <= F <= sqrt(1 - D^2). Eigenvalues
/// below 1e-13 of the largest are treated as exact zeros before each square
/// root: they are eigensolver noise, and rooting them would bias the value
/// of any rank-deficient case by ~1e-8 per spurious direction. States whose
/// true spectrum reaches that far down are resolved no finer than the floor.
/// Throws std::invalid_argument on dimension mismatch.
double fidelity(const DensityOperator& rho1, const DensityOperator& rho2);

/// exp(scale*h) for Hermitian h, computed by eigendecomposition. Accepts h
/// with ||h - h^dag|| / max(1, ||h||) < 1e-10 and symmetrizes before
/// diagonalizing; throws std::invalid_argument otherwise. The result is
/// unitary whenever scale is purely imaginary.
Matrix hermitian_exp(const Matrix& h, Complex scale);

/// Reduced qubit state of a density operator on a qubit (x) bath space of
/// total dimension 2*bath_dim, with the qubit as the first tensor factor.
/// Throws std::invalid_argument on dimension mismatch.
DensityOperator partial_trace_bath(const DensityOperator& rho, Eigen::Index bath_dim);

/// Outcome of testing |tr[Q rho Q']| <= ||Q|| * ||Q'||.
struct CorrelationCheck {
  double correlation = 0.0;   ///< |tr[Q rho Q']|
  double norm_product = 0.0;  ///< ||Q|| * ||Q'||
  bool holds = false;         ///< correlation <= norm_product + tolerance
};

/// Evaluates the correlation-function inequality |tr[Q rho Q']| <=
/// ||Q||*||Q'|| with additive tolerance 1e-9. Throws std::invalid_argument
/// on dimension mismatch.
CorrelationCheck correlation_inequality_check(const Matrix& q, const Matrix& qprime,
                                              const DensityOperator& rho);

}  // namespace uddlab
