#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "uddlab/bath.hpp"
#include "uddlab/linops.hpp"
#include "uddlab/rng.hpp"
#include "uddlab/sequence.hpp"

namespace uddlab {

/// Absolute tolerance for all simulator inequality assertions, an order
/// above accumulated eigensolver roundoff at the supported dimensions.
inline constexpr double kInequalityTol = 1e-9;

/// The propagator split U = I (x) b_plus + sigma_z (x) b_minus of the joint
/// evolution under a pulse sequence. On every constructed instance
/// b_plus^dag b_plus + b_minus^dag b_minus = I,
/// b_plus^dag b_minus + b_minus^dag b_plus = 0, and ||b_plus|| <= 1.
struct SplitPropagator {
  Matrix b_plus;
  Matrix b_minus;
};

/// Evolves the two toggling-frame branches exp(-i(B0 +/- f_j Bz) dt_j)
/// interval by interval (later intervals multiplied on the left) and
/// returns b_plus/minus as the half sum/difference of the two products.
SplitPropagator toggling_propagator(const BathModel& bath, const PulseSequence& seq);

/// Assembles the joint 2d x 2d propagator from the split, with the qubit as
/// the first tensor factor: block-diagonal (b_plus + b_minus,
/// b_plus - b_minus). Unitary within roundoff.
Matrix full_propagator(const SplitPropagator& split);

/// Lab-frame propagator with explicit sigma_x pulses inserted at the
/// sequence instants. Cross-check: equals (sigma_x^N (x) I) times the
/// assembled toggling propagator.
Matrix schrodinger_propagator(const BathModel& bath, const PulseSequence& seq);

/// The four traces b_ab = tr[B_a rho_B B_b^dag] for a, b in {+, -}.
/// Identities: pp + mm = 1 and pm + mp = 0 within roundoff.
struct CorrelationValues {
  Complex pp;
  Complex pm;
  Complex mp;
  Complex mm;
};

CorrelationValues correlation_functions(const SplitPropagator& split,
                                        const DensityOperator& rho_b);

/// Trace-norm distance between the reduced qubit state after the pulsed
/// joint evolution from the product start psi (x) rho_b and the initial
/// pure state itself. Requires psi of dimension 2 and unit norm within
/// 1e-10 and rho_b of the bath dimension.
double protected_distance(const BathModel& bath, const PulseSequence& seq,
                          const Vector& psi, const DensityOperator& rho_b);

/// Haar-random qubit pure state.
Vector haar_qubit_state(Rng& rng);

/// Haar-random pure state of the given dimension.
Vector haar_state(Eigen::Index dim, Rng& rng);

/// Random full-rank density operator G G^dag / tr[G G^dag] with G drawn
/// entrywise from the standard complex normal distribution.
DensityOperator ginibre_density(Eigen::Index dim, Rng& rng);

/// Choice of the qubit state protected in each verification trial.
enum class InitialStatePolicy {
  haar,  ///< Haar-random pure state per trial
  plus,  ///< the fixed |+> state, maximally exposed to dephasing
};

/// Parameters of a randomized bound-verification experiment. Time is
/// normalized to T = 1, so the physical knobs are the dimensionless
/// epsilon = J0*T and eta = Jz/J0.
struct ExperimentSpec {
  Eigen::Index bath_dim = 4;
  int n_pulses = 4;
  double eta = 1.0;
  double epsilon = 0.1;
  std::uint64_t seed = 7;
  int trials = 100;
  InitialStatePolicy initial_state = InitialStatePolicy::haar;
};

/// Per-trial measurements and margins against the proved bounds.
struct TrialRecord {
  std::uint64_t seed = 0;       ///< substream seed driving this trial
  double distance = 0.0;        ///< measured trace-norm distance D
  double delta = 0.0;           ///< bounding-tail value Delta_N
  double bound = 0.0;           ///< min(1, Delta_N + Delta_N^2)
  double b_minus_norm = 0.0;    ///< measured ||B_minus||
  double margin = 0.0;          ///< min(bound - D, Delta_N - ||B_minus||)
  CorrelationValues b;          ///< the four correlation traces
};

/// Aggregate result of verify_bound. Serializes deterministically.
struct VerificationReport {
  ExperimentSpec spec;
  std::vector<TrialRecord> trials;
  double min_margin = 0.0;
  bool pass = false;

  /// JSON document {spec, trials: [{D, b_norm_minus, bound, delta_N,
  /// margin, seed}], min_margin, pass}; byte-stable across runs and thread
  /// counts for identical specs.
  std::string to_json() const;
};

/// Runs `spec.trials` independent trials: each draws a bath with J0 =
/// epsilon, Jz = eta*epsilon from its own substream, a random initial qubit
/// state and full-rank bath state, and checks D <= min(1, Delta + Delta^2)
/// and ||B_minus|| <= Delta within kInequalityTol. Trials are scheduled
/// over `threads` workers; the report is identical for every thread count.
VerificationReport verify_bound(const ExperimentSpec& spec, int threads = 1);

/// Least-squares fit of log||B_minus(T)|| against log T over a grid of
/// total times. The fitted slope estimates the suppression order N + 1.
struct ScalingFit {
  int n_pulses = 0;
  TimingKind timing = TimingKind::udd;
  double slope = 0.0;
  double intercept = 0.0;
  bool degenerate = false;  ///< fewer than two grid norms above the noise floor
  std::vector<std::pair<double, double>> points;  ///< (T, ||B_minus(T)||)

  std::string to_json() const;
  /// CSV `T,norm_B_minus` with 17-significant-digit values and LF endings.
  std::string to_csv() const;
};

/// Propagates the bath in extended precision over each total time in
/// `t_grid` (strictly increasing, at least two points) and fits the decay
/// order of ||B_minus||. Norms below the extended-precision noise floor are
/// excluded from the fit; if fewer than two survive the fit is flagged
/// degenerate (slope and intercept zero) rather than fabricated.
ScalingFit order_scaling_fit(const BathModel& bath, int n_pulses,
                             const std::vector<double>& t_grid,
                             TimingKind timing = TimingKind::udd);

}  // namespace uddlab
