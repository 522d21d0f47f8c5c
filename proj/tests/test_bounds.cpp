#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "test_support.hpp"
#include "uddlab/bounds.hpp"
#include "uddlab/sequence.hpp"

using namespace uddlab;
using uddlab::test::near_abs;
using uddlab::test::near_rel;

namespace {

// Independent reference for the remainder sum_{n > N} p_n(eta) eps^n, built
// from the factored form of the terms: with u = (1+eta)*eps and
// v = (1-eta)*eps the n-th term is (u^n - v^n) / (2 n!). Summed forward in
// extended precision; every term with n >= 1 is nonnegative because
// |1-eta| <= 1+eta.
long double delta_tail_reference(int n_pulses, long double eta, long double eps) {
  const long double u = (1.0L + eta) * eps;
  const long double v = (1.0L - eta) * eps;
  long double a = 1.0L;
  long double b = 1.0L;
  long double sum = 0.0L;
  for (int n = 1; n <= 20000; ++n) {
    a *= u / n;
    b *= v / n;
    if (n > n_pulses) {
      const long double term = 0.5L * (a - b);
      sum += term;
      if (static_cast<long double>(n) > u && term < 1e-25L * sum) break;
    }
  }
  return sum;
}

long double binomial_ld(int n, int k) {
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// p_l(eta) as the explicit odd-power binomial sum (all terms positive).
long double p_binomial_reference(int l, long double eta) {
  long double factorial = 1.0L;
  for (int i = 2; i <= l; ++i) factorial *= i;
  long double sum = 0.0L;
  long double eta_pow = eta;
  for (int k = 1; k <= l; k += 2) {
    sum += binomial_ld(l, k) * eta_pow;
    eta_pow *= eta * eta;
  }
  return sum / factorial;
}

long double exp_series_ld(long double x) {
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int n = 1; n <= 200; ++n) {
    term *= x / n;
    sum += term;
    if (term < 1e-25L * sum) break;
  }
  return sum;
}

}  // namespace

TEST_CASE("bounding_series_s is the exponential of the total coupling-time product") {
  CHECK(near_rel(bounding_series_s(1.0, 1.0, 1.0), 7.38905609893065, 1e-13));
  CHECK(bounding_series_s(0.0, 0.0, 5.0) == 1.0);

  const struct {
    double j0, jz, t;
  } cases[] = {{1.0, 1.0, 1.0}, {0.5, 0.25, 2.0}, {3.0, 0.0, 0.1}, {0.02, 7.0, 0.3}};
  for (const auto& c : cases) {
    // Product of the two single-coupling series equals the double sum over
    // all mixed powers, which is the quantity being bounded.
    const long double ref =
        exp_series_ld(static_cast<long double>(c.j0) * c.t) *
        exp_series_ld(static_cast<long double>(c.jz) * c.t);
    CHECK(near_rel(bounding_series_s(c.j0, c.jz, c.t), static_cast<double>(ref), 1e-13));
  }

  CHECK_THROWS_AS(bounding_series_s(-1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bounding_series_s(0.0, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bounding_series_s(0.0, 1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(bounding_series_s(400.0, 400.0, 1.0), std::overflow_error);
}

TEST_CASE("s_minus matches exp(eps)*sinh(eps*eta) and its log extension") {
  // (e^2 - 1)/2, the eta = epsilon = 1 value.
  CHECK(near_rel(s_minus(1.0, 1.0), 3.194528049465325, 1e-14));
  CHECK(s_minus(0.0, 1.0) == 0.0);
  CHECK(s_minus(1.0, 0.0) == 0.0);
  CHECK(near_rel(s_minus(0.5, 0.25), std::exp(0.25) * std::sinh(0.125), 1e-14));

  CHECK(near_rel(log_s_minus(1.0, 1.0), std::log(3.194528049465325), 1e-13));
  // Far beyond double range for the value itself: log = eps + eps*eta - log 2
  // up to an exponentially small correction.
  CHECK(near_rel(log_s_minus(1.0, 400.0), 800.0 - std::log(2.0), 1e-13));
  CHECK(std::isinf(log_s_minus(0.0, 1.0)));
  CHECK(log_s_minus(0.0, 1.0) < 0.0);
  CHECK(std::isinf(log_s_minus(1.0, 0.0)));

  CHECK_THROWS_AS(s_minus(-0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(s_minus(1.0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(s_minus(1.0, 400.0), std::overflow_error);
}

TEST_CASE("p_coefficient agrees with the odd-power binomial sum") {
  CHECK(p_coefficient(0, 0.7) == 0.0);
  CHECK(p_coefficient(3, 0.0) == 0.0);
  CHECK(near_rel(p_coefficient(1, 0.3), 0.3, 1e-15));
  CHECK(near_rel(p_coefficient(2, 0.3), 0.3, 1e-15));
  // l = 3: eta/2 + eta^3/6.
  CHECK(near_rel(p_coefficient(3, 0.3), 0.3 / 2 + 0.027 / 6, 1e-14));
  // No cancellation at tiny eta: p_2(eta) = eta exactly.
  CHECK(near_rel(p_coefficient(2, 1e-8), 1e-8, 1e-13));
  CHECK(near_rel(p_coefficient(3, 1e-8), 5.0000000000000005e-9, 1e-12));

  for (int l = 1; l <= 12; ++l) {
    for (double eta : {1e-8, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) {
      CAPTURE(l);
      CAPTURE(eta);
      const long double ref = p_binomial_reference(l, eta);
      CHECK(near_rel(p_coefficient(l, eta), static_cast<double>(ref), 1e-12));
    }
  }

  CHECK_THROWS_AS(p_coefficient(-1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(p_coefficient(2, -1.0), std::invalid_argument);
}

TEST_CASE("log_p_coefficient extends the coefficient far beyond double range") {
  CHECK(std::isinf(log_p_coefficient(0, 0.7)));
  CHECK(log_p_coefficient(0, 0.7) < 0.0);
  CHECK(std::isinf(log_p_coefficient(4, 0.0)));

  for (int l = 1; l <= 12; ++l) {
    for (double eta : {1e-3, 0.5, 1.0, 10.0}) {
      CAPTURE(l);
      CAPTURE(eta);
      CHECK(near_abs(log_p_coefficient(l, eta), std::log(p_coefficient(l, eta)), 1e-12));
    }
  }

  // Large-l references built directly from lgamma in extended precision.
  // Odd l with eta > 1: [(1+eta)^l + (eta-1)^l] / (2 l!).
  {
    const int l = 301;
    const long double lp = l * std::log(101.0L) +
                           std::log1p(std::pow(99.0L / 101.0L, static_cast<long double>(l))) -
                           std::log(2.0L) - std::lgamma(static_cast<long double>(l) + 1.0L);
    CHECK(near_rel(log_p_coefficient(l, 100.0), static_cast<double>(lp), 1e-12));
  }
  // Even l with eta > 1: [(1+eta)^l - (eta-1)^l] / (2 l!).
  {
    const int l = 300;
    const long double lp = l * std::log(101.0L) +
                           std::log1p(-std::pow(99.0L / 101.0L, static_cast<long double>(l))) -
                           std::log(2.0L) - std::lgamma(static_cast<long double>(l) + 1.0L);
    CHECK(near_rel(log_p_coefficient(l, 100.0), static_cast<double>(lp), 1e-12));
  }
  // Large l at small eta, where the value itself underflows double range.
  {
    const int l = 400;
    const long double lp = l * std::log1p(0.01L) +
                           std::log1p(-std::pow(0.99L / 1.01L, static_cast<long double>(l))) -
                           std::log(2.0L) - std::lgamma(static_cast<long double>(l) + 1.0L);
    CHECK(near_rel(log_p_coefficient(l, 0.01), static_cast<double>(lp), 1e-12));
  }

  CHECK_THROWS_AS(log_p_coefficient(-2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(log_p_coefficient(2, -0.1), std::invalid_argument);
}

TEST_CASE("delta_eval matches the extended-precision tail sum over a parameter grid") {
  for (int n : {0, 1, 2, 3, 5, 8, 10}) {
    for (double eta : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      for (double eps : {1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0}) {
        CAPTURE(n);
        CAPTURE(eta);
        CAPTURE(eps);
        const DeltaEval d = delta_eval({n, eta, eps});
        const long double ref = delta_tail_reference(n, eta, eps);
        REQUIRE(ref > 0.0L);
        // The closed form subtracts the partial sum from s_minus, so its
        // roundoff is amplified by s_minus / Delta (kept below 1e12 by the
        // route switch); the direct tail sum has no cancellation.
        const double amplification =
            d.used_series ? 1.0
                          : static_cast<double>(
                                static_cast<long double>(s_minus(eta, eps)) / ref);
        const double tol = std::max(1e-12, 5e-15 * amplification);
        CHECK(near_rel(d.value, static_cast<double>(ref), tol));
        CHECK(near_abs(d.log_value, static_cast<double>(std::log(ref)), tol));
        CHECK(d.value == delta_bound({n, eta, eps}));
        CHECK(d.log_value == log_delta_bound({n, eta, eps}));
      }
    }
  }
}

TEST_CASE("delta_eval picks the tail series exactly when the subtraction cancels") {
  CHECK(delta_eval({10, 1.0, 1e-3}).used_series);
  CHECK_FALSE(delta_eval({1, 1.0, 1.0}).used_series);

  // Remainder after the linear term at eta = epsilon = 1: (e^2 - 1)/2 - 1.
  CHECK(near_rel(delta_bound({1, 1.0, 1.0}), 2.194528049465325, 1e-13));
  // Subtracting the quadratic term too removes another p_2(1) = 1.
  CHECK(near_rel(delta_bound({2, 1.0, 1.0}), 1.194528049465325, 1e-13));
}

TEST_CASE("delta_eval handles the zero and overflow limits") {
  for (const BoundParams p : {BoundParams{3, 0.0, 0.5}, BoundParams{3, 0.5, 0.0}}) {
    const DeltaEval d = delta_eval(p);
    CHECK(d.value == 0.0);
    CHECK(std::isinf(d.log_value));
    CHECK(d.log_value < 0.0);
    CHECK_FALSE(d.used_series);
  }

  // Value beyond double range: the log stays finite and exact.
  const DeltaEval big = delta_eval({0, 1.0, 400.0});
  CHECK(std::isinf(big.value));
  CHECK(big.value > 0.0);
  CHECK(near_rel(big.log_value, 800.0 - std::log(2.0), 1e-12));
  CHECK_FALSE(big.used_series);

  CHECK_THROWS_AS(delta_eval({-1, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(delta_eval({1, -1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(delta_eval({1, 1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("delta_bound is monotone in each parameter") {
  // Increasing in epsilon.
  double prev = 0.0;
  for (double eps : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    const double d = delta_bound({3, 1.0, eps});
    CHECK(d > prev);
    prev = d;
  }
  // Increasing in eta.
  prev = 0.0;
  for (double eta : {0.1, 0.5, 1.0, 5.0, 20.0}) {
    const double d = delta_bound({3, eta, 0.5});
    CHECK(d > prev);
    prev = d;
  }
  // Decreasing in the number of pulses: each step removes one more
  // nonnegative term from the remainder.
  for (double eta : {0.1, 1.0, 10.0}) {
    for (int n = 0; n < 12; ++n) {
      CAPTURE(eta);
      CAPTURE(n);
      CHECK(delta_bound({n, eta, 0.5}) > delta_bound({n + 1, eta, 0.5}));
    }
  }
}

TEST_CASE("long sequences drive the remainder into deep suppression") {
  const DeltaEval d = delta_eval({40, 1.0, 0.1});
  CHECK(d.value > 0.0);
  CHECK(d.value < 1e-78);
  // log of p_41(1) * 0.1^41 plus the tiny higher-term correction.
  CHECK(near_abs(d.log_value, -180.71, 0.05));
}

TEST_CASE("the fixed-interval variant is delta at the q-scaled time budget") {
  for (int n : {1, 2, 5, 10}) {
    for (double eps1 : {0.01, 0.1}) {
      CAPTURE(n);
      CAPTURE(eps1);
      const DeltaEval fixed = delta_eval_fixed_interval({n, 0.3, eps1});
      const DeltaEval direct = delta_eval({n, 0.3, eps1 * q_factor(n)});
      CHECK(near_rel(fixed.value, direct.value, 1e-12));
      CHECK(near_abs(fixed.log_value, direct.log_value, 1e-12));
    }
  }
  CHECK_THROWS_AS(delta_eval_fixed_interval({0, 1.0, 0.1}), std::invalid_argument);
}

TEST_CASE("holding the first interval fixed makes more pulses strictly worse") {
  const double v2 = delta_bound_fixed_interval({2, 0.01, 0.1});
  const double v5 = delta_bound_fixed_interval({5, 0.01, 0.1});
  const double v10 = delta_bound_fixed_interval({10, 0.01, 0.1});
  const double v20 = delta_bound_fixed_interval({20, 0.01, 0.1});
  CHECK(v2 < v5);
  CHECK(v5 < v10);
  CHECK(v10 < v20);
  CHECK(v2 < 1e-3);
  CHECK(v10 > 0.05);
}

TEST_CASE("distance_bound is min(1, delta + delta^2) with a hard clamp") {
  CHECK(distance_bound_from_delta(0.0) == 0.0);
  CHECK(near_rel(distance_bound_from_delta(0.1), 0.11, 1e-15));
  CHECK(near_rel(distance_bound_from_delta(0.5), 0.75, 1e-15));
  CHECK(distance_bound_from_delta(1.0) == 1.0);
  CHECK(distance_bound_from_delta(7.0) == 1.0);
  CHECK(distance_bound_from_delta(std::numeric_limits<double>::infinity()) == 1.0);
  CHECK_THROWS_AS(distance_bound_from_delta(-0.1), std::invalid_argument);

  // Both routes agree where the bound is informative.
  for (double eps : {1e-3, 1e-2, 0.1}) {
    const BoundParams p{2, 1.0, eps};
    CAPTURE(eps);
    CHECK(near_rel(distance_bound(p), distance_bound_from_delta(delta_bound(p)), 1e-12));
  }
  // Saturated regime clamps to the trivial bound even when delta overflows.
  CHECK(distance_bound({0, 100.0, 2.0}) == 1.0);
  CHECK(distance_bound({0, 1.0, 400.0}) == 1.0);
}

TEST_CASE("leading_term_growth matches hand-evaluated small cases") {
  // n = 1: p_2(eta) = eta and q(2) = 4, so the term is eta * 16 * eps1^2.
  CHECK(near_abs(leading_term_growth(1, 1.0, 0.1), std::log(0.16), 1e-12));
  CHECK(near_abs(leading_term_growth(1, 0.5, 0.2), std::log(0.32), 1e-12));

  CHECK_THROWS_AS(leading_term_growth(0, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(leading_term_growth(1, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(leading_term_growth(1, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("leading_term_growth grows superlinearly like (n+1)*log(c*(n+1))") {
  // Convexity: second differences are positive once the factorial-vs-power
  // battle settles.
  double g_prev = leading_term_growth(9, 1.0, 0.1);
  double g_cur = leading_term_growth(10, 1.0, 0.1);
  for (int n = 11; n <= 60; ++n) {
    const double g_next = leading_term_growth(n, 1.0, 0.1);
    CAPTURE(n);
    CHECK(g_next - 2.0 * g_cur + g_prev > 0.0);
    g_prev = g_cur;
    g_cur = g_next;
  }

  // Asymptotic form: (n+1) * log(c*(n+1)) with c = (2/pi)^2 * e * (1+eta) * eps1.
  for (double eta : {0.01, 1.0, 100.0}) {
    const double eps1 = 0.1;
    const int n = 60;
    const double c = std::pow(2.0 / std::numbers::pi, 2) * std::exp(1.0) * (1.0 + eta) * eps1;
    const double approx = (n + 1) * std::log(c * (n + 1));
    CAPTURE(eta);
    CHECK(std::abs(leading_term_growth(n, eta, eps1) / approx - 1.0) < 0.2);
  }
}
