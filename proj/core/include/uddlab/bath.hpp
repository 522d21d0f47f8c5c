#pragma once

#include <cstdint>

#include "uddlab/linops.hpp"
#include "uddlab/rng.hpp"

namespace uddlab {

/// A finite-dimensional dephasing environment: the qubit couples through
/// sigma_z to `bz` while `b0` acts on the environment alone. `j0` and `jz`
/// certify the sup-norms of the two operators.
struct BathModel {
  Eigen::Index dim = 0;
  Matrix b0;
  Matrix bz;
  double j0 = 0.0;
  double jz = 0.0;
};

/// Validating factory: requires dim >= 2, square dim-sized Hermitian blocks
/// (within relative tolerance 1e-10), and certified norms matching
/// sup_norm(b0) and sup_norm(bz) within 1e-10 relative. Throws
/// std::invalid_argument otherwise.
BathModel make_bath(Eigen::Index dim, Matrix b0, Matrix bz, double j0, double jz);

/// Random Hermitian matrix (G + G^dag)/2 with G drawn entrywise from the
/// standard complex normal distribution of `rng`.
Matrix random_hermitian(Eigen::Index dim, Rng& rng);

/// Draws two independent random Hermitian matrices and rescales them so
/// their sup-norms equal j0 and jz exactly; a zero target yields the zero
/// matrix. Deterministic given the seed. Requires dim >= 2 and finite
/// non-negative norms.
BathModel random_bath(Eigen::Index dim, double j0, double jz, std::uint64_t seed);

/// Bath whose two operators commute ([b0, bz] = 0): both are polynomials of
/// a single random Hermitian matrix, rescaled to the requested norms. Under
/// any balanced switching pattern such a bath refocuses exactly.
BathModel commuting_bath(Eigen::Index dim, double j0, double jz, std::uint64_t seed);

}  // namespace uddlab
