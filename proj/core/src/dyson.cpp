#include "uddlab/dyson.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <utility>

#include <boost/math/constants/constants.hpp>
#include <json.hpp>

namespace uddlab {
namespace {

DysonReal horner(const std::vector<DysonReal>& coeffs, const DysonReal& x) {
  DysonReal value = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    value = value * x + *it;
  }
  return value;
}

void validate_timing(const SequenceTiming& timing, const char* what) {
  const auto& bp = timing.breakpoints;
  if (bp.size() < 2 || bp.front() != 0 || bp.back() != 1) {
    throw std::invalid_argument(std::string(what) + ": breakpoints must run from 0 to 1");
  }
  for (std::size_t j = 1; j < bp.size(); ++j) {
    if (!(bp[j] > bp[j - 1])) {
      throw std::invalid_argument(std::string(what) + ": breakpoints must be strictly increasing");
    }
  }
}

void validate_word(const AlphaWord& word, const char* what) {
  if (word.letters.empty()) {
    throw std::invalid_argument(std::string(what) + ": word must be non-empty");
  }
  for (char letter : word.letters) {
    if (letter != '0' && letter != 'z') {
      throw std::invalid_argument(std::string(what) + ": letters must be '0' or 'z'");
    }
  }
}

// Letters of the mask-th word of the given length, lexicographic with
// '0' < 'z' as the mask ascends (leftmost letter is the top bit).
std::string word_letters(unsigned mask, int length) {
  std::string letters(static_cast<std::size_t>(length), '0');
  for (int j = 0; j < length; ++j) {
    if ((mask >> (length - 1 - j)) & 1u) letters[static_cast<std::size_t>(j)] = 'z';
  }
  return letters;
}

long long trig_frequency(int q, int r, int n_bar) {
  return static_cast<long long>(q) + static_cast<long long>(r) * n_bar;
}

// One expanded integrand summand sign * trig((q + r*n_bar) theta), prior
// to antidifferentiation.
struct ExpansionPiece {
  int sign;
  int q;
  int r;
};

// Flip to a non-negative frequency (cosine is even, sine is odd) and
// accumulate into the output list, merging equal arguments.
void emit(std::vector<TrigTerm>& out, Rational coefficient, TrigKind kind, int q, int r,
          int n_bar) {
  if (trig_frequency(q, r, n_bar) < 0) {
    q = -q;
    r = -r;
    if (kind == TrigKind::sine) coefficient = -coefficient;
  }
  for (TrigTerm& term : out) {
    if (term.kind == kind && term.q == q && term.r == r) {
      term.coefficient += coefficient;
      return;
    }
  }
  out.push_back(TrigTerm{std::move(coefficient), kind, q, r});
}

}  // namespace

AlphaWord make_word(std::string letters) {
  AlphaWord word{std::move(letters)};
  validate_word(word, "make_word");
  return word;
}

int z_count(const AlphaWord& word) {
  return static_cast<int>(std::count(word.letters.begin(), word.letters.end(), 'z'));
}

SequenceTiming udd_timing(int n_pulses) {
  if (n_pulses < 1) throw std::invalid_argument("udd_timing: n_pulses must be >= 1");
  const int n = n_pulses;
  std::vector<DysonReal> frac(static_cast<std::size_t>(n));
  const DysonReal pi = boost::math::constants::pi<DysonReal>();
  for (int j = 1; 2 * j < n + 1; ++j) {
    const DysonReal s = sin(j * pi / (2 * n + 2));
    frac[static_cast<std::size_t>(j - 1)] = s * s;
  }
  if (n % 2 == 1) frac[static_cast<std::size_t>((n - 1) / 2)] = DysonReal(1) / 2;
  for (int j = 1; 2 * j < n + 1; ++j) {
    frac[static_cast<std::size_t>(n - j)] = 1 - frac[static_cast<std::size_t>(j - 1)];
  }
  SequenceTiming timing;
  timing.breakpoints.reserve(static_cast<std::size_t>(n) + 2);
  timing.breakpoints.push_back(0);
  for (const DysonReal& f : frac) timing.breakpoints.push_back(f);
  timing.breakpoints.push_back(1);
  validate_timing(timing, "udd_timing");
  return timing;
}

SequenceTiming periodic_timing(int n_pulses) {
  if (n_pulses < 1) throw std::invalid_argument("periodic_timing: n_pulses must be >= 1");
  SequenceTiming timing;
  timing.breakpoints.reserve(static_cast<std::size_t>(n_pulses) + 2);
  for (int j = 0; j <= n_pulses + 1; ++j) {
    timing.breakpoints.push_back(DysonReal(j) / (n_pulses + 1));
  }
  validate_timing(timing, "periodic_timing");
  return timing;
}

SequenceTiming timing_of(TimingKind kind, int n_pulses) {
  switch (kind) {
    case TimingKind::udd: return udd_timing(n_pulses);
    case TimingKind::periodic: return periodic_timing(n_pulses);
  }
  throw std::invalid_argument("timing_of: unknown timing kind");
}

SequenceTiming timing_from_sequence(const PulseSequence& seq) {
  SequenceTiming timing;
  timing.breakpoints.reserve(seq.instants.size() + 2);
  timing.breakpoints.push_back(0);
  for (double t : seq.instants) {
    timing.breakpoints.push_back(DysonReal(t) / DysonReal(seq.total_time));
  }
  timing.breakpoints.push_back(1);
  validate_timing(timing, "timing_from_sequence");
  return timing;
}

DysonReal piecewise_value(const PiecewisePoly& poly, const DysonReal& s) {
  if (s < 0 || s > 1) throw std::domain_error("piecewise_value: s outside [0, 1]");
  const auto& bp = poly.breakpoints;
  std::size_t j = 0;
  while (j + 2 < bp.size() && s >= bp[j + 1]) ++j;
  return horner(poly.segments[j], s);
}

DysonReal f_alpha_exact(const AlphaWord& word, const SequenceTiming& timing) {
  validate_word(word, "f_alpha_exact");
  validate_timing(timing, "f_alpha_exact");
  if (static_cast<int>(word.letters.size()) > kMaxDysonOrder) {
    throw std::invalid_argument("f_alpha_exact: word longer than the supported order");
  }
  const auto& bp = timing.breakpoints;
  const std::size_t segs = bp.size() - 1;
  // Running factor polynomial, initially 1; per letter, multiply by the
  // letter's switching weight and antidifferentiate with continuity.
  std::vector<std::vector<DysonReal>> g(segs, std::vector<DysonReal>{DysonReal(1)});
  DysonReal carry = 0;
  for (char letter : word.letters) {
    if (letter == 'z') {
      for (std::size_t j = 1; j < segs; j += 2) {
        for (DysonReal& c : g[j]) c = -c;
      }
    }
    carry = 0;
    for (std::size_t j = 0; j < segs; ++j) {
      std::vector<DysonReal> anti(g[j].size() + 1);
      anti[0] = 0;
      for (std::size_t i = 0; i < g[j].size(); ++i) {
        anti[i + 1] = g[j][i] / DysonReal(static_cast<unsigned>(i) + 1);
      }
      anti[0] = carry - horner(anti, bp[j]);
      carry = horner(anti, bp[j + 1]);
      g[j] = std::move(anti);
    }
  }
  return carry;
}

double f_alpha_exact(const AlphaWord& word, const PulseSequence& seq) {
  return static_cast<double>(f_alpha_exact(word, timing_from_sequence(seq)));
}

std::string VanishingReport::to_json() const {
  nlohmann::json j;
  j["argmax_word"] = argmax_word;
  j["max_abs_F"] = max_abs_f;
  j["max_order"] = max_order;
  j["n_pulses"] = n_pulses;
  j["pass"] = pass;
  j["words_checked"] = words_checked;
  return j.dump(2);
}

VanishingReport verify_vanishing_orders(int n_pulses, int max_order, TimingKind timing) {
  if (n_pulses < 1) {
    throw std::invalid_argument("verify_vanishing_orders: n_pulses must be >= 1");
  }
  if (max_order < 1 || max_order > n_pulses || max_order > kMaxDysonOrder) {
    throw std::invalid_argument(
        "verify_vanishing_orders: max_order must lie in [1, min(n_pulses, max supported order)]");
  }
  const SequenceTiming t = timing_of(timing, n_pulses);
  VanishingReport report;
  report.n_pulses = n_pulses;
  report.max_order = max_order;
  report.timing = timing;
  DysonReal max_abs = -1;
  for (int length = 1; length <= max_order; ++length) {
    for (unsigned mask = 0; mask < (1u << length); ++mask) {
      if (std::popcount(mask) % 2 == 0) continue;
      const AlphaWord word{word_letters(mask, length)};
      ++report.words_checked;
      const DysonReal magnitude = abs(f_alpha_exact(word, t));
      if (magnitude > max_abs) {
        max_abs = magnitude;
        report.argmax_word = word.letters;
      }
    }
  }
  report.max_abs_f = static_cast<double>(max_abs);
  report.pass = report.max_abs_f < kVanishingTol;
  return report;
}

Matrix dyson_order_term(const BathModel& bath, const PulseSequence& seq, int order) {
  if (order < 0 || order > kMaxDysonOrder) {
    throw std::invalid_argument("dyson_order_term: order outside [0, max supported order]");
  }
  const Eigen::Index full = 2 * bath.dim;
  if (order == 0) return Matrix::Identity(full, full);
  const SequenceTiming timing = timing_from_sequence(seq);
  Matrix sigma_z(2, 2);
  sigma_z << 1, 0, 0, -1;
  const Matrix weight0 = kron(Matrix::Identity(2, 2), bath.b0);
  const Matrix weightz = kron(sigma_z, bath.bz);
  Matrix sum = Matrix::Zero(full, full);
  for (unsigned mask = 0; mask < (1u << order); ++mask) {
    const std::string letters = word_letters(mask, order);
    const double f = static_cast<double>(f_alpha_exact(AlphaWord{letters}, timing));
    Matrix product = Matrix::Identity(full, full);
    for (char letter : letters) {
      product = (letter == 'z' ? weightz : weight0) * product;
    }
    sum += f * product;
  }
  Complex scale(1.0, 0.0);
  for (int k = 0; k < order; ++k) scale *= Complex(0.0, -seq.total_time);
  return scale * sum;
}

Matrix dyson_partial_sum(const BathModel& bath, const PulseSequence& seq, int max_order) {
  if (max_order < 0 || max_order > kMaxDysonOrder) {
    throw std::invalid_argument("dyson_partial_sum: order outside [0, max supported order]");
  }
  Matrix sum = Matrix::Zero(2 * bath.dim, 2 * bath.dim);
  for (int order = 0; order <= max_order; ++order) {
    sum += dyson_order_term(bath, seq, order);
  }
  return sum;
}

DysonReal trig_term_value(const TrigTerm& term, int n_bar, const DysonReal& theta) {
  const DysonReal argument = trig_frequency(term.q, term.r, n_bar) * theta;
  const DysonReal factor = term.kind == TrigKind::sine ? sin(argument) : cos(argument);
  return static_cast<DysonReal>(numerator(term.coefficient)) /
         static_cast<DysonReal>(denominator(term.coefficient)) * factor;
}

std::vector<TrigTerm> trig_integrate(const TrigTerm& term, bool with_fz, int r_o, int n_bar) {
  if (n_bar < 1) throw std::invalid_argument("trig_integrate: n_bar must be >= 1");
  if (term.q <= -n_bar || term.q >= n_bar) {
    throw std::invalid_argument("trig_integrate: |q| must stay below n_bar");
  }
  if (r_o % 2 == 0) throw std::invalid_argument("trig_integrate: r_o must be odd");
  const bool even_r = term.r % 2 == 0;
  if (term.kind == TrigKind::cosine && !even_r) {
    throw std::invalid_argument("trig_integrate: cosine-type input requires even r");
  }
  if (term.kind == TrigKind::sine && even_r) {
    throw std::invalid_argument("trig_integrate: sine-type input requires odd r");
  }

  const int q = term.q;
  const int r = term.r;
  std::vector<ExpansionPiece> pieces;
  bool drop_allowed = false;
  if (!with_fz && term.kind == TrigKind::cosine) {
    // 2 cos((q + r nb) th) sin(th) expands to two sine summands; the
    // shortened form applies when r = 0 and |q| = 1.
    pieces = {{+1, q + 1, r}, {-1, q - 1, r}};
    drop_allowed = r == 0 && (q == 1 || q == -1);
  } else if (!with_fz && term.kind == TrigKind::sine) {
    // 2 sin((q + r nb) th) sin(th) expands to two cosine summands; a zero
    // frequency would integrate to a bare angle, which the term algebra
    // cannot hold, and cannot occur while |q| stays below n_bar - 1.
    pieces = {{+1, q - 1, r}, {-1, q + 1, r}};
  } else if (with_fz && term.kind == TrigKind::cosine) {
    // 4 cos((q + r nb) th) sin(r_o nb th) sin(th): four cosine summands.
    pieces = {{+1, q - 1, r + r_o}, {+1, q + 1, r - r_o}, {-1, q + 1, r + r_o},
              {-1, q - 1, r - r_o}};
  } else {
    // 4 sin((q + r nb) th) sin(r_o nb th) sin(th): four sine summands; the
    // shortened form applies when |q| = 1 and r = +-r_o.
    pieces = {{+1, q - 1, r + r_o}, {+1, q + 1, r - r_o}, {-1, q + 1, r + r_o},
              {-1, q - 1, r - r_o}};
    drop_allowed = (q == 1 || q == -1) && (r == r_o || r == -r_o);
  }
  // Summands are sine functions exactly when the output kind toggles away
  // from sine: those integrate to cosines and a zero-frequency summand is
  // identically zero (the shortened special forms). Cosine summands
  // integrate to sines and must never hit zero frequency.
  const bool sine_pieces = (term.kind == TrigKind::cosine) == !with_fz;
  const TrigKind out_kind = sine_pieces ? TrigKind::cosine : TrigKind::sine;

  std::vector<TrigTerm> out;
  for (const ExpansionPiece& piece : pieces) {
    const long long freq = trig_frequency(piece.q, piece.r, n_bar);
    if (freq == 0) {
      if (sine_pieces && drop_allowed) continue;
      throw std::domain_error(
          "trig_integrate: vanishing denominator outside the shortened special cases");
    }
    if (piece.q <= -n_bar || piece.q >= n_bar) {
      throw std::domain_error("trig_integrate: output q left the unique-representation window");
    }
    Rational coefficient = term.coefficient * (sine_pieces ? -piece.sign : piece.sign);
    coefficient /= Rational(freq);
    emit(out, std::move(coefficient), out_kind, piece.q, piece.r, n_bar);
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const TrigTerm& t) { return t.coefficient == 0; }),
            out.end());
  std::sort(out.begin(), out.end(), [n_bar](const TrigTerm& a, const TrigTerm& b) {
    const long long fa = trig_frequency(a.q, a.r, n_bar);
    const long long fb = trig_frequency(b.q, b.r, n_bar);
    if (fa != fb) return fa < fb;
    return a.kind == TrigKind::cosine && b.kind == TrigKind::sine;
  });
  return out;
}

WordType type_automaton(const AlphaWord& word) {
  validate_word(word, "type_automaton");
  WordType state;
  for (char letter : word.letters) {
    if (letter == 'z') {
      state.kind = state.kind == TrigKind::cosine ? TrigKind::sine : TrigKind::cosine;
      state.r_parity = state.r_parity == Parity::even ? Parity::odd : Parity::even;
    }
  }
  return state;
}

}  // namespace uddlab
