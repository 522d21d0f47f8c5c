#include "uddlab/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "uddlab/sequence.hpp"

namespace uddlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// exp() overflows a double just above this.
constexpr double kMaxExpArg = 709.0;
// Closed form is trusted while Delta >= S_- * 1e-12, i.e. while at least
// ~4 of the ~16 significant decimal digits survive the subtraction.
constexpr double kCancelRatio = 1e-12;
// Series stopping rule: term < 1e-18 * partial sum, or 200 terms.
const double kSeriesStopLog = std::log(1e-18);
constexpr int kSeriesMaxTerms = 200;

double logaddexp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

void check_bound_params(const BoundParams& p) {
  if (p.n_pulses < 0) throw std::invalid_argument("delta bound: n_pulses must be >= 0");
  if (!(p.eta >= 0.0) || !(p.epsilon >= 0.0)) {
    throw std::invalid_argument("delta bound: eta and epsilon must be >= 0");
  }
}

// Tail sum_{n=N+1..} p_n eps^n entirely in log space; immune to overflow
// and to the cancellation that kills the closed form at small epsilon.
double log_delta_series(int n_pulses, double eta, double epsilon) {
  const double log_eps = std::log(epsilon);
  double acc = kNegInf;
  for (int k = 0; k < kSeriesMaxTerms; ++k) {
    const int n = n_pulses + 1 + k;
    const double lt = log_p_coefficient(n, eta) + n * log_eps;
    acc = logaddexp(acc, lt);
    if (lt - acc < kSeriesStopLog) break;
  }
  return acc;
}

}  // namespace

double bounding_series_s(double j0, double jz, double t) {
  if (!(j0 >= 0.0) || !(jz >= 0.0) || !(t >= 0.0)) {
    throw std::invalid_argument("bounding_series_s: arguments must be >= 0");
  }
  const double a = (j0 + jz) * t;
  if (a > kMaxExpArg) {
    throw std::overflow_error("bounding_series_s: exponent exceeds double range");
  }
  return std::exp(a);
}

double log_s_minus(double eta, double epsilon) {
  if (!(eta >= 0.0) || !(epsilon >= 0.0)) {
    throw std::invalid_argument("s_minus: arguments must be >= 0");
  }
  const double x = eta * epsilon;
  if (x == 0.0) return kNegInf;
  // log sinh(x) = x - log 2 + log1p(-exp(-2x))
  return epsilon + x - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * x));
}

double s_minus(double eta, double epsilon) {
  const double ls = log_s_minus(eta, epsilon);
  if (ls > kMaxExpArg) {
    throw std::overflow_error("s_minus: value exceeds double range");
  }
  const double x = eta * epsilon;
  if (x < kMaxExpArg && epsilon < kMaxExpArg) {
    return std::exp(epsilon) * std::sinh(x);
  }
  return std::exp(ls);
}

double log_p_coefficient(int l, double eta) {
  if (l < 0) throw std::invalid_argument("p_coefficient: l must be >= 0");
  if (!(eta >= 0.0)) throw std::invalid_argument("p_coefficient: eta must be >= 0");
  if (l == 0 || eta == 0.0) return kNegInf;
  const double lead = l * std::log1p(eta) - std::numbers::ln2 - std::lgamma(l + 1.0);
  if (eta == 1.0) return lead;  // (1-eta)^l = 0
  // tail = log(1 - rho^l), rho = (1-eta)/(1+eta) in (-1, 1). log|1-eta| must
  // come from log1p below 1: the rounding of 1.0 - eta would otherwise cost
  // ~1e-9 absolute error at eta ~ 1e-8 through the condition of log near 1.
  const double log_abs_1m_eta =
      eta < 1.0 ? std::log1p(-eta) : std::log(eta - 1.0);
  const double abs_log_rho = std::log1p(eta) - log_abs_1m_eta;
  const double l_log_abs_rho = -static_cast<double>(l) * abs_log_rho;
  double tail;
  if (eta < 1.0) {
    // rho > 0: 1 - rho^l loses digits as eta -> 0, so go through expm1.
    tail = std::log(-std::expm1(l_log_abs_rho));
  } else if (l % 2 == 1) {
    // rho < 0, odd power: 1 + |rho|^l
    tail = std::log1p(std::exp(l_log_abs_rho));
  } else {
    tail = std::log(-std::expm1(l_log_abs_rho));
  }
  return lead + tail;
}

double p_coefficient(int l, double eta) {
  if (l < 0) throw std::invalid_argument("p_coefficient: l must be >= 0");
  if (!(eta >= 0.0)) throw std::invalid_argument("p_coefficient: eta must be >= 0");
  if (l == 0 || eta == 0.0) return 0.0;
  return std::exp(log_p_coefficient(l, eta));
}

DeltaEval delta_eval(const BoundParams& p) {
  check_bound_params(p);
  if (p.epsilon == 0.0 || p.eta == 0.0) return {0.0, kNegInf, false};

  const double ls = log_s_minus(p.eta, p.epsilon);
  const double log_eps = std::log(p.epsilon);

  if (ls <= kMaxExpArg) {
    // Closed form in linear arithmetic. Every partial-sum term is a positive
    // term of the series for S_-, so nothing here can overflow if S_- didn't.
    const double s = s_minus(p.eta, p.epsilon);
    double partial = 0.0;
    for (int n = 1; n <= p.n_pulses; ++n) {
      partial += std::exp(log_p_coefficient(n, p.eta) + n * log_eps);
    }
    const double diff = s - partial;
    if (diff >= s * kCancelRatio) {
      return {diff, std::log(diff), false};
    }
  } else {
    // S_- itself exceeds double range; subtract in log space. If the partial
    // sum is negligible against S_- there is no cancellation and the closed
    // form survives as log arithmetic.
    double log_partial = kNegInf;
    for (int n = 1; n <= p.n_pulses; ++n) {
      log_partial = logaddexp(log_partial, log_p_coefficient(n, p.eta) + n * log_eps);
    }
    if (log_partial == kNegInf || ls - log_partial > -std::log(kCancelRatio)) {
      const double lv =
          (log_partial == kNegInf) ? ls : ls + std::log1p(-std::exp(log_partial - ls));
      return {std::exp(lv), lv, false};
    }
  }

  const double lv = log_delta_series(p.n_pulses, p.eta, p.epsilon);
  return {std::exp(lv), lv, true};
}

double delta_bound(const BoundParams& p) { return delta_eval(p).value; }

double log_delta_bound(const BoundParams& p) { return delta_eval(p).log_value; }

DeltaEval delta_eval_fixed_interval(const FixedIntervalParams& p) {
  if (p.n_pulses < 1) {
    throw std::invalid_argument("fixed-interval bound: n_pulses must be >= 1");
  }
  if (!(p.eta >= 0.0) || !(p.epsilon1 >= 0.0)) {
    throw std::invalid_argument("fixed-interval bound: eta and epsilon1 must be >= 0");
  }
  return delta_eval({p.n_pulses, p.eta, p.epsilon1 * q_factor(p.n_pulses)});
}

double delta_bound_fixed_interval(const FixedIntervalParams& p) {
  return delta_eval_fixed_interval(p).value;
}

double distance_bound_from_delta(double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("distance_bound: delta must be >= 0");
  if (delta >= 1.0) return 1.0;
  return std::min(1.0, delta + delta * delta);
}

double distance_bound(const BoundParams& p) {
  const double lv = log_delta_bound(p);
  if (lv >= 0.0) return 1.0;
  return distance_bound_from_delta(std::exp(lv));
}

double leading_term_growth(int n_pulses, double eta, double epsilon1) {
  if (n_pulses < 1) throw std::invalid_argument("leading_term_growth: n_pulses must be >= 1");
  if (!(eta > 0.0) || !(epsilon1 > 0.0)) {
    throw std::invalid_argument("leading_term_growth: eta and epsilon1 must be > 0");
  }
  const int n1 = n_pulses + 1;
  return log_p_coefficient(n1, eta) + n1 * (std::log(q_factor(n1)) + std::log(epsilon1));
}

}  // namespace uddlab
