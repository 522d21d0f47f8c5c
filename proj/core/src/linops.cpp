#include "uddlab/linops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uddlab {
namespace {

constexpr double kHermTol = 1e-10;
constexpr double kDensityTol = 1e-10;
constexpr double kCorrelationTol = 1e-9;

// Singular values of a dense matrix, descending, clamped to be
// non-negative: the square roots of the eigenvalues of a^dag * a.
Eigen::VectorXd singular_values(const Matrix& a) {
  const Matrix gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  Eigen::VectorXd values = solver.eigenvalues();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    values[i] = std::sqrt(std::max(values[i], 0.0));
  }
  return values;
}

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square");
  }
}

// Hermitian part (h + h^dag)/2 of a matrix that is Hermitian up to
// roundoff; rejects inputs whose anti-Hermitian part exceeds tolerance.
Matrix symmetrized_hermitian(const Matrix& h, const char* what) {
  require_square(h, what);
  const double defect = sup_norm(h - h.adjoint());
  if (defect >= kHermTol * std::max(1.0, sup_norm(h))) {
    throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian within tolerance");
  }
  return 0.5 * (h + h.adjoint());
}

// Matrix square root of a positive semidefinite density matrix; eigenvalues
// in [-tol, 0) are clipped to zero and the spectrum renormalized to unit sum
// so the root stays a valid state factor.
// Eigenvalues this far below the largest one are eigensolver noise, not
// spectrum. They must become exact zeros before any square root: sqrt
// amplifies a +1e-16 noise eigenvalue into a +1e-8 contribution, which
// would bias every fidelity involving a rank-deficient state.
constexpr double kSpectrumNoiseFloor = 1e-13;

Matrix clipped_sqrt(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
  Eigen::VectorXd values = solver.eigenvalues();
  const double floor = kSpectrumNoiseFloor * std::max(values.maxCoeff(), 0.0);
  double total = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    values[i] = values[i] > floor ? values[i] : 0.0;
    total += values[i];
  }
  Eigen::VectorXd roots(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    roots[i] = std::sqrt(values[i] / total);
  }
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

double sup_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const Eigen::VectorXd values = singular_values(a);
  return values.maxCoeff();
}

double trace_norm(const Matrix& a) {
  require_square(a, "trace_norm");
  if (a.size() == 0) return 0.0;
  return singular_values(a).sum();
}

DensityOperator::DensityOperator(Matrix m) : matrix_(std::move(m)) {
  require_square(matrix_, "DensityOperator");
  if (matrix_.size() == 0) {
    throw std::invalid_argument("DensityOperator: matrix must be non-empty");
  }
  if (!matrix_.allFinite()) {
    throw std::invalid_argument("DensityOperator: matrix must be finite");
  }
  const double scale = std::max(1.0, sup_norm(matrix_));
  if (sup_norm(matrix_ - matrix_.adjoint()) >= kHermTol * scale) {
    throw std::invalid_argument("DensityOperator: matrix is not Hermitian within tolerance");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) >= kDensityTol) {
    throw std::invalid_argument("DensityOperator: trace must be 1 within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (matrix_ + matrix_.adjoint()),
                                               Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kDensityTol) {
    throw std::invalid_argument("DensityOperator: matrix has a negative eigenvalue beyond tolerance");
  }
}

double trace_distance(const DensityOperator& rho1, const DensityOperator& rho2) {
  if (rho1.dim() != rho2.dim()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  const double d = 0.5 * trace_norm(rho1.matrix() - rho2.matrix());
  return std::clamp(d, 0.0, 1.0);
}

double fidelity(const DensityOperator& rho1, const DensityOperator& rho2) {
  if (rho1.dim() != rho2.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  const Matrix root = clipped_sqrt(rho1.matrix());
  const Matrix sandwich = root * rho2.matrix() * root.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sandwich, Eigen::EigenvaluesOnly);
  const double floor =
      kSpectrumNoiseFloor * std::max(solver.eigenvalues().maxCoeff(), 0.0);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double value = solver.eigenvalues()[i];
    if (value > floor) sum += std::sqrt(value);
  }
  return std::clamp(sum, 0.0, 1.0);
}

Matrix hermitian_exp(const Matrix& h, Complex scale) {
  const Matrix hermitian = symmetrized_hermitian(h, "hermitian_exp");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  Vector phases(solver.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases[i] = std::exp(scale * solver.eigenvalues()[i]);
  }
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

DensityOperator partial_trace_bath(const DensityOperator& rho, Eigen::Index bath_dim) {
  if (bath_dim < 1 || rho.dim() != 2 * bath_dim) {
    throw std::invalid_argument("partial_trace_bath: dimension mismatch");
  }
  Matrix reduced = Matrix::Zero(2, 2);
  const Matrix& full = rho.matrix();
  for (Eigen::Index s = 0; s < 2; ++s) {
    for (Eigen::Index t = 0; t < 2; ++t) {
      Complex sum = 0.0;
      for (Eigen::Index k = 0; k < bath_dim; ++k) {
        sum += full(s * bath_dim + k, t * bath_dim + k);
      }
      reduced(s, t) = sum;
    }
  }
  // Roundoff in the sums can leave the reduced matrix a hair outside the
  // validation tolerances, so re-symmetrize before validating.
  reduced = 0.5 * (reduced + reduced.adjoint().eval());
  return DensityOperator(reduced);
}

CorrelationCheck correlation_inequality_check(const Matrix& q, const Matrix& qprime,
                                              const DensityOperator& rho) {
  require_square(q, "correlation_inequality_check");
  require_square(qprime, "correlation_inequality_check");
  if (q.rows() != rho.dim() || qprime.rows() != rho.dim()) {
    throw std::invalid_argument("correlation_inequality_check: dimension mismatch");
  }
  CorrelationCheck check;
  check.correlation = std::abs((q * rho.matrix() * qprime).trace());
  check.norm_product = sup_norm(q) * sup_norm(qprime);
  check.holds = check.correlation <= check.norm_product + kCorrelationTol;
  return check;
}

}  // namespace uddlab
