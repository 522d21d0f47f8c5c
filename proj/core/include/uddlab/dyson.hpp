#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "uddlab/bath.hpp"
#include "uddlab/linops.hpp"
#include "uddlab/sequence.hpp"

namespace uddlab {

/// Extended-precision real for the nested switching-function integrals:
/// pulse fractions are irrational, and exact cancellation must be visible
/// far below the reporting tolerance.
using DysonReal = boost::multiprecision::cpp_bin_float_50;

/// Exact rational for symbolic trigonometric coefficients.
using Rational = boost::multiprecision::cpp_rational;

/// Hard cap on nested-integral order: the word count doubles per order.
inline constexpr int kMaxDysonOrder = 8;

/// Reporting tolerance for the vanishing-order checks, two orders above
/// the propagated breakpoint error at the maximum supported order.
inline constexpr double kVanishingTol = 1e-10;

/// A word over the letters '0' (plain time factor) and 'z' (switching
/// factor); letters[0] belongs to the innermost integral. Its length is
/// the expansion order of the term it labels.
struct AlphaWord {
  std::string letters;
};

/// Validates and builds a word: non-empty, only '0'/'z'. Throws
/// std::invalid_argument otherwise.
AlphaWord make_word(std::string letters);

/// Number of 'z' letters; only odd-count words are candidates to vanish.
int z_count(const AlphaWord& word);

/// Relative switching breakpoints 0 = s_0 < s_1 < ... < s_m = 1 carried in
/// extended precision; the switching sign on segment j is +1 for even j.
struct SequenceTiming {
  std::vector<DysonReal> breakpoints;
};

/// sin^2(j*pi/(2n+2)) breakpoints evaluated in extended precision.
SequenceTiming udd_timing(int n_pulses);

/// Equispaced breakpoints j/(n+1) in extended precision.
SequenceTiming periodic_timing(int n_pulses);

SequenceTiming timing_of(TimingKind kind, int n_pulses);

/// Breakpoints instants/total_time taken verbatim from a double-precision
/// sequence; accurate only to double precision, unlike udd_timing.
SequenceTiming timing_from_sequence(const PulseSequence& seq);

/// A piecewise polynomial on [0, 1] over a shared breakpoint grid;
/// segments[j] holds ascending power coefficients valid on
/// [breakpoints[j], breakpoints[j+1]].
struct PiecewisePoly {
  std::vector<DysonReal> breakpoints;
  std::vector<std::vector<DysonReal>> segments;
};

/// Evaluates the piecewise polynomial; throws std::domain_error outside
/// [0, 1].
DysonReal piecewise_value(const PiecewisePoly& poly, const DysonReal& s);

/// The nested integral of the word's switching factors over the simplex
/// s_1 <= ... <= s_n in [0, 1], evaluated exactly by iterated piecewise-
/// polynomial antidifferentiation. Throws std::invalid_argument for words
/// longer than kMaxDysonOrder.
DysonReal f_alpha_exact(const AlphaWord& word, const SequenceTiming& timing);

/// Same integral against a double-precision sequence's relative timing.
double f_alpha_exact(const AlphaWord& word, const PulseSequence& seq);

/// Result of exhaustively checking the odd-z words of bounded order.
struct VanishingReport {
  int n_pulses = 0;
  int max_order = 0;
  TimingKind timing = TimingKind::udd;
  long words_checked = 0;
  double max_abs_f = 0.0;
  std::string argmax_word;
  bool pass = false;

  /// {argmax_word, max_abs_F, max_order, n_pulses, pass, words_checked}
  std::string to_json() const;
};

/// Evaluates every word of length 1..max_order with an odd number of 'z'
/// letters (lexicographic, '0' before 'z') against the chosen timing and
/// reports the largest |F| together with the first word attaining it;
/// passes when that maximum stays below kVanishingTol. Requires
/// 1 <= max_order <= min(n_pulses, kMaxDysonOrder).
VanishingReport verify_vanishing_orders(int n_pulses, int max_order,
                                        TimingKind timing = TimingKind::udd);

/// The order-n contribution to the time expansion of the joint propagator:
/// (-i*total_time)^n times the F-weighted sum of the 2^n operator words in
/// I (x) b0 and sigma_z (x) bz (letters applied innermost-rightmost).
/// Order 0 is the identity. Requires 0 <= order <= kMaxDysonOrder.
Matrix dyson_order_term(const BathModel& bath, const PulseSequence& seq, int order);

/// Partial sum of the expansion through max_order; differs from the exact
/// propagator by O(total_time^(max_order+1)).
Matrix dyson_partial_sum(const BathModel& bath, const PulseSequence& seq, int max_order);

enum class TrigKind { sine, cosine };
enum class Parity { even, odd };

/// One symbolic term c * sin/cos((q + r*n_bar) * theta) of the angular-
/// variable route; q and r are carried separately so the integer frequency
/// never needs to be re-decomposed (|q| stays below n_bar in use).
struct TrigTerm {
  Rational coefficient;
  TrigKind kind = TrigKind::cosine;
  int q = 0;
  int r = 0;
};

/// Numeric value of a term at the given angle.
DysonReal trig_term_value(const TrigTerm& term, int n_bar, const DysonReal& theta);

/// Exact antiderivative of the term's integrand in the angular variable:
/// 2 * c * kind((q + r*n_bar)*theta) * sin(theta) without the switching
/// factor, or 4 * c * kind(...) * sin(r_o*n_bar*theta) * sin(theta) with
/// it. Cosine-type input requires even r, sine-type odd r, and r_o must be
/// odd; violations throw std::invalid_argument. The two vanishing-
/// denominator special cases (cosine-type without the switching factor at
/// |q| = 1, r = 0, and sine-type with it at |q| = 1, |r| = r_o) return
/// their shortened closed forms; any other vanishing denominator throws
/// std::domain_error. Output terms are sign-normalized to non-negative
/// frequency and merged.
std::vector<TrigTerm> trig_integrate(const TrigTerm& term, bool with_fz, int r_o, int n_bar);

/// Trigonometric character of a word's final integrand.
struct WordType {
  TrigKind kind = TrigKind::cosine;
  Parity r_parity = Parity::even;
};

/// Folds the letter table over the word from the start state (cosine,
/// even): '0' preserves both components, 'z' toggles both. The final kind
/// is sine exactly when the 'z' count is odd.
WordType type_automaton(const AlphaWord& word);

}  // namespace uddlab
