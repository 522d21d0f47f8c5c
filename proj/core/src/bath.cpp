#include "uddlab/bath.hpp"

#include <cmath>
#include <stdexcept>

namespace uddlab {
namespace {

constexpr double kNormTol = 1e-10;

void require_norm_target(double value, const char* what) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument(std::string(what) + ": norm targets must be finite and non-negative");
  }
}

// Random Hermitian matrix rescaled so its sup-norm is exactly `target`
// (zero target yields the zero matrix). Always consumes the same number of
// draws from `rng` so sibling operators stay aligned across parameter
// choices.
Matrix rescaled_hermitian(Eigen::Index dim, double target, Rng& rng) {
  const Matrix h = random_hermitian(dim, rng);
  if (target == 0.0) return Matrix::Zero(dim, dim);
  const double norm = sup_norm(h);
  if (norm == 0.0) {
    throw std::runtime_error("random_bath: degenerate zero draw");
  }
  return h * (target / norm);
}

}  // namespace

BathModel make_bath(Eigen::Index dim, Matrix b0, Matrix bz, double j0, double jz) {
  if (dim < 2) {
    throw std::invalid_argument("make_bath: dimension must be at least 2");
  }
  if (b0.rows() != dim || b0.cols() != dim || bz.rows() != dim || bz.cols() != dim) {
    throw std::invalid_argument("make_bath: operator blocks must be dim x dim");
  }
  require_norm_target(j0, "make_bath");
  require_norm_target(jz, "make_bath");
  for (const Matrix* m : {&b0, &bz}) {
    if (!m->allFinite()) {
      throw std::invalid_argument("make_bath: operator entries must be finite");
    }
    const double scale = std::max(1.0, sup_norm(*m));
    if (sup_norm(*m - m->adjoint()) >= kNormTol * scale) {
      throw std::invalid_argument("make_bath: operators must be Hermitian within tolerance");
    }
  }
  const double n0 = sup_norm(b0);
  const double nz = sup_norm(bz);
  if (std::abs(n0 - j0) >= kNormTol * std::max(1.0, j0) ||
      std::abs(nz - jz) >= kNormTol * std::max(1.0, jz)) {
    throw std::invalid_argument("make_bath: certified norms do not match the operators");
  }
  BathModel bath;
  bath.dim = dim;
  bath.b0 = std::move(b0);
  bath.bz = std::move(bz);
  bath.j0 = j0;
  bath.jz = jz;
  return bath;
}

Matrix random_hermitian(Eigen::Index dim, Rng& rng) {
  Matrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      g(r, c) = rng.complex_normal();
    }
  }
  return 0.5 * (g + g.adjoint().eval());
}

BathModel random_bath(Eigen::Index dim, double j0, double jz, std::uint64_t seed) {
  if (dim < 2) {
    throw std::invalid_argument("random_bath: dimension must be at least 2");
  }
  require_norm_target(j0, "random_bath");
  require_norm_target(jz, "random_bath");
  Rng rng(seed);
  Matrix b0 = rescaled_hermitian(dim, j0, rng);
  Matrix bz = rescaled_hermitian(dim, jz, rng);
  return make_bath(dim, std::move(b0), std::move(bz), j0, jz);
}

BathModel commuting_bath(Eigen::Index dim, double j0, double jz, std::uint64_t seed) {
  if (dim < 2) {
    throw std::invalid_argument("commuting_bath: dimension must be at least 2");
  }
  require_norm_target(j0, "commuting_bath");
  require_norm_target(jz, "commuting_bath");
  Rng rng(seed);
  const Matrix h = random_hermitian(dim, rng);
  const Matrix h2 = h * h;
  auto rescale = [dim](const Matrix& m, double target) {
    if (target == 0.0) return Matrix(Matrix::Zero(dim, dim));
    const double norm = sup_norm(m);
    if (norm == 0.0) {
      throw std::runtime_error("commuting_bath: degenerate zero draw");
    }
    return Matrix(m * (target / norm));
  };
  return make_bath(dim, rescale(h, j0), rescale(h2, jz), j0, jz);
}

}  // namespace uddlab
