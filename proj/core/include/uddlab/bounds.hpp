#pragma once

namespace uddlab {

/// Parameters of the dephasing error bound: n_pulses >= 0, eta = J_z/J_0 >= 0,
/// epsilon = J_0 * T >= 0.
struct BoundParams {
  int n_pulses = 0;
  double eta = 1.0;
  double epsilon = 0.0;
};

/// Fixed-first-interval variant: epsilon1 = J_0 * t_1 is held fixed and the
/// total time grows with n as epsilon = epsilon1 * q_factor(n). n_pulses >= 1.
struct FixedIntervalParams {
  int n_pulses = 1;
  double eta = 1.0;
  double epsilon1 = 0.0;
};

/// exp((j0 + jz) * t): the convergent majorant of the full propagator series.
/// Requires j0, jz, t >= 0; throws std::overflow_error when the result is not
/// representable.
double bounding_series_s(double j0, double jz, double t);

/// exp(epsilon) * sinh(epsilon * eta): the majorant of the antisymmetric
/// half of the propagator. Throws std::overflow_error on overflow.
double s_minus(double eta, double epsilon);

/// log of s_minus; finite for all positive arguments, -inf when either is 0.
double log_s_minus(double eta, double epsilon);

/// p_l(eta) = [(1+eta)^l - (1-eta)^l] / (2 * l!); p_0 = 0. Computed without
/// cancellation at small eta. Requires l >= 0, eta >= 0.
double p_coefficient(int l, double eta);

/// log of p_coefficient; -inf where the coefficient vanishes. Usable far
/// beyond double range (large l, large eta).
double log_p_coefficient(int l, double eta);

/// One evaluation of the series remainder Delta_N = sum_{n>N} p_n(eta) eps^n.
/// `used_series` records whether the closed form S_- minus the partial sum
/// had to be abandoned for the direct tail sum because of cancellation.
struct DeltaEval {
  double value = 0.0;      // may be +inf when the true value exceeds double range
  double log_value = 0.0;  // always finite for finite positive values
  bool used_series = false;
};

/// Evaluates Delta_N(eta, epsilon). The closed form
///   Delta_N = s_minus(eta, epsilon) - sum_{n=0}^{N} p_n(eta) epsilon^n
/// is used while the subtraction retains at least 4 significant decimal
/// digits; otherwise the remainder series is summed directly (stop when a
/// term falls below 1e-18 of the partial sum, or after 200 terms). All
/// exponentials are handled in log space so very large eta*epsilon never
/// overflows the evaluation itself.
DeltaEval delta_eval(const BoundParams& p);

double delta_bound(const BoundParams& p);
double log_delta_bound(const BoundParams& p);

/// Delta with the total-time budget implied by a fixed first interval:
/// Delta_{n}(eta, epsilon1 * q_factor(n)).
DeltaEval delta_eval_fixed_interval(const FixedIntervalParams& p);
double delta_bound_fixed_interval(const FixedIntervalParams& p);

/// min(1, Delta + Delta^2): the trace-distance bound. Never overflows; a
/// Delta of 1 or more clamps to the trivial bound 1.
double distance_bound(const BoundParams& p);
double distance_bound_from_delta(double delta);

/// log of the leading fixed-interval term
///   p_{n+1}(eta) * q_factor(n+1)^{n+1} * epsilon1^{n+1},
/// the dominant term of the fixed-t1 remainder. Grows like (n+1)*log(c*n)
/// for large n, so the fixed-interval bound inevitably blows up. Requires
/// n_pulses >= 1, eta > 0, epsilon1 > 0.
double leading_term_growth(int n_pulses, double eta, double epsilon1);

}  // namespace uddlab
