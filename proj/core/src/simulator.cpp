#include "uddlab/simulator.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "uddlab/bounds.hpp"

namespace uddlab {
namespace {

using LongComplex = std::complex<long double>;
using LongMatrix = Eigen::Matrix<LongComplex, Eigen::Dynamic, Eigen::Dynamic>;
using LongRealVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Norms indistinguishable from extended-precision roundoff after a handful
// of matrix products; below this they carry no order information.
constexpr long double kScalingFloor = 100.0L * LDBL_EPSILON;

// Interval durations of a sequence, first interval [0, t_1) through last
// [t_n, T]; the switching sign on interval j is (-1)^j.
std::vector<double> interval_durations(const PulseSequence& seq) {
  std::vector<double> durations;
  durations.reserve(seq.instants.size() + 1);
  double prev = 0.0;
  for (double t : seq.instants) {
    durations.push_back(t - prev);
    prev = t;
  }
  durations.push_back(seq.total_time - prev);
  return durations;
}

struct LongEigenSystem {
  LongRealVector values;
  LongMatrix vectors;
};

LongEigenSystem decompose_long(const LongMatrix& h) {
  Eigen::SelfAdjointEigenSolver<LongMatrix> solver(0.5 * (h + h.adjoint().eval()));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

LongMatrix evolve_long(const LongEigenSystem& sys, long double dt) {
  LongMatrix phases = LongMatrix::Zero(sys.values.size(), sys.values.size());
  for (Eigen::Index i = 0; i < sys.values.size(); ++i) {
    const long double angle = -sys.values[i] * dt;
    phases(i, i) = LongComplex(std::cos(angle), std::sin(angle));
  }
  return sys.vectors * phases * sys.vectors.adjoint();
}

long double sup_norm_long(const LongMatrix& a) {
  Eigen::SelfAdjointEigenSolver<LongMatrix> solver(a.adjoint() * a, Eigen::EigenvaluesOnly);
  const long double top = solver.eigenvalues().maxCoeff();
  return std::sqrt(std::max(top, 0.0L));
}

// Relative pulse positions in extended precision so that timing roundoff
// stays far below the smallest resolvable propagator norm.
std::vector<long double> relative_instants_long(TimingKind timing, int n_pulses) {
  std::vector<long double> frac(n_pulses);
  const long double pi = std::numbers::pi_v<long double>;
  for (int j = 1; j <= n_pulses; ++j) {
    if (timing == TimingKind::udd) {
      const long double s = std::sin(j * pi / (2.0L * n_pulses + 2.0L));
      frac[j - 1] = s * s;
    } else {
      frac[j - 1] = static_cast<long double>(j) / (n_pulses + 1);
    }
  }
  return frac;
}

// The two toggling branch propagators over total time t, in extended
// precision, from pre-diagonalized interval generators. `plus_first`
// selects whether the branch starts on b0 + bz or b0 - bz.
LongMatrix branch_product_long(const LongEigenSystem& gen_plus, const LongEigenSystem& gen_minus,
                               const std::vector<long double>& frac, long double t,
                               bool plus_first) {
  const Eigen::Index dim = gen_plus.values.size();
  LongMatrix u = LongMatrix::Identity(dim, dim);
  long double prev = 0.0L;
  const std::size_t n = frac.size();
  for (std::size_t j = 0; j <= n; ++j) {
    const long double next = (j < n) ? frac[j] * t : t;
    const bool plus = (j % 2 == 0) ? plus_first : !plus_first;
    u = evolve_long(plus ? gen_plus : gen_minus, next - prev) * u;
    prev = next;
  }
  return u;
}

std::string format_g17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

const char* policy_name(InitialStatePolicy policy) {
  switch (policy) {
    case InitialStatePolicy::haar: return "haar";
    case InitialStatePolicy::plus: return "plus";
  }
  throw std::invalid_argument("policy_name: unknown initial-state policy");
}

void validate_spec(const ExperimentSpec& spec) {
  if (spec.bath_dim < 2 || spec.bath_dim > 32) {
    throw std::invalid_argument("verify_bound: bath_dim must be in [2, 32]");
  }
  if (spec.n_pulses < 0) {
    throw std::invalid_argument("verify_bound: n_pulses must be non-negative");
  }
  if (!std::isfinite(spec.eta) || spec.eta < 0.0) {
    throw std::invalid_argument("verify_bound: eta must be finite and non-negative");
  }
  if (!std::isfinite(spec.epsilon) || spec.epsilon < 0.0) {
    throw std::invalid_argument("verify_bound: epsilon must be finite and non-negative");
  }
  if (spec.trials < 1) {
    throw std::invalid_argument("verify_bound: trials must be at least 1");
  }
}

}  // namespace

SplitPropagator toggling_propagator(const BathModel& bath, const PulseSequence& seq) {
  const std::vector<double> durations = interval_durations(seq);
  Matrix u_plus = Matrix::Identity(bath.dim, bath.dim);
  Matrix u_minus = Matrix::Identity(bath.dim, bath.dim);
  int sign = 1;
  for (double dt : durations) {
    u_plus = hermitian_exp(bath.b0 + sign * bath.bz, Complex(0.0, -dt)) * u_plus;
    u_minus = hermitian_exp(bath.b0 - sign * bath.bz, Complex(0.0, -dt)) * u_minus;
    sign = -sign;
  }
  SplitPropagator split;
  split.b_plus = 0.5 * (u_plus + u_minus);
  split.b_minus = 0.5 * (u_plus - u_minus);
  return split;
}

Matrix full_propagator(const SplitPropagator& split) {
  const Eigen::Index dim = split.b_plus.rows();
  Matrix u = Matrix::Zero(2 * dim, 2 * dim);
  u.topLeftCorner(dim, dim) = split.b_plus + split.b_minus;
  u.bottomRightCorner(dim, dim) = split.b_plus - split.b_minus;
  return u;
}

Matrix schrodinger_propagator(const BathModel& bath, const PulseSequence& seq) {
  Matrix sigma_x(2, 2);
  sigma_x << 0, 1, 1, 0;
  Matrix sigma_z(2, 2);
  sigma_z << 1, 0, 0, -1;
  const Matrix identity_qubit = Matrix::Identity(2, 2);
  const Matrix identity_bath = Matrix::Identity(bath.dim, bath.dim);
  const Matrix hamiltonian = kron(identity_qubit, bath.b0) + kron(sigma_z, bath.bz);
  const Matrix pulse = kron(sigma_x, identity_bath);
  const std::vector<double> durations = interval_durations(seq);
  Matrix u = Matrix::Identity(2 * bath.dim, 2 * bath.dim);
  for (std::size_t j = 0; j < durations.size(); ++j) {
    if (j > 0) u = pulse * u;
    u = hermitian_exp(hamiltonian, Complex(0.0, -durations[j])) * u;
  }
  return u;
}

CorrelationValues correlation_functions(const SplitPropagator& split,
                                        const DensityOperator& rho_b) {
  if (split.b_plus.rows() != rho_b.dim()) {
    throw std::invalid_argument("correlation_functions: dimension mismatch");
  }
  const Matrix& rho = rho_b.matrix();
  CorrelationValues b;
  b.pp = (split.b_plus * rho * split.b_plus.adjoint()).trace();
  b.pm = (split.b_plus * rho * split.b_minus.adjoint()).trace();
  b.mp = (split.b_minus * rho * split.b_plus.adjoint()).trace();
  b.mm = (split.b_minus * rho * split.b_minus.adjoint()).trace();
  return b;
}

double protected_distance(const BathModel& bath, const PulseSequence& seq,
                          const Vector& psi, const DensityOperator& rho_b) {
  if (psi.size() != 2) {
    throw std::invalid_argument("protected_distance: psi must be a qubit state");
  }
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) >= 1e-10) {
    throw std::invalid_argument("protected_distance: psi must be normalized");
  }
  if (rho_b.dim() != bath.dim) {
    throw std::invalid_argument("protected_distance: bath state dimension mismatch");
  }
  const Vector unit = psi / norm;
  const Matrix pure = unit * unit.adjoint();
  const Matrix u = full_propagator(toggling_propagator(bath, seq));
  const Matrix joint = u * kron(pure, rho_b.matrix()) * u.adjoint();
  const DensityOperator reduced = partial_trace_bath(DensityOperator(joint), bath.dim);
  return trace_distance(reduced, DensityOperator(pure));
}

Vector haar_qubit_state(Rng& rng) { return haar_state(2, rng); }

Vector haar_state(Eigen::Index dim, Rng& rng) {
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.complex_normal();
  return v / v.norm();
}

DensityOperator ginibre_density(Eigen::Index dim, Rng& rng) {
  Matrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      g(r, c) = rng.complex_normal();
    }
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityOperator(rho);
}

std::string VerificationReport::to_json() const {
  nlohmann::json j;
  j["spec"] = {
      {"bath_dim", spec.bath_dim},     {"epsilon", spec.epsilon},
      {"eta", spec.eta},               {"initial_state", policy_name(spec.initial_state)},
      {"n_pulses", spec.n_pulses},     {"seed", spec.seed},
      {"trials", spec.trials},
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const TrialRecord& r : trials) {
    rows.push_back({
        {"D", r.distance},
        {"b_norm_minus", r.b_minus_norm},
        {"bound", r.bound},
        {"delta_N", r.delta},
        {"margin", r.margin},
        {"seed", r.seed},
    });
  }
  j["trials"] = std::move(rows);
  j["min_margin"] = min_margin;
  j["pass"] = pass;
  return j.dump(2);
}

VerificationReport verify_bound(const ExperimentSpec& spec, int threads) {
  validate_spec(spec);
  if (threads < 1) {
    throw std::invalid_argument("verify_bound: threads must be at least 1");
  }
  const PulseSequence seq = spec.n_pulses >= 1 ? udd_sequence(spec.n_pulses, 1.0)
                                               : make_sequence(1.0, {});
  const BoundParams params{spec.n_pulses, spec.eta, spec.epsilon};
  const double delta = delta_bound(params);
  const double bound = distance_bound(params);

  VerificationReport report;
  report.spec = spec;
  report.trials.resize(static_cast<std::size_t>(spec.trials));

  auto run_range = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      const std::uint64_t trial_seed = Rng::substream_seed(spec.seed, static_cast<std::uint64_t>(i));
      const BathModel bath = random_bath(spec.bath_dim, spec.epsilon, spec.eta * spec.epsilon,
                                         Rng::substream_seed(trial_seed, 0));
      Rng state_rng(Rng::substream_seed(trial_seed, 1));
      Vector psi;
      if (spec.initial_state == InitialStatePolicy::haar) {
        psi = haar_qubit_state(state_rng);
      } else {
        psi = Vector(2);
        psi << std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0;
      }
      const DensityOperator rho_b = ginibre_density(spec.bath_dim, state_rng);

      const SplitPropagator split = toggling_propagator(bath, seq);
      TrialRecord& r = report.trials[static_cast<std::size_t>(i)];
      r.seed = trial_seed;
      r.b_minus_norm = sup_norm(split.b_minus);
      r.distance = protected_distance(bath, seq, psi, rho_b);
      r.delta = delta;
      r.bound = bound;
      r.b = correlation_functions(split, rho_b);
      r.margin = std::min(bound - r.distance, delta - r.b_minus_norm);
    }
  };

  const int workers = std::min(threads, spec.trials);
  if (workers <= 1) {
    run_range(0, spec.trials);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
    const int base = spec.trials / workers;
    const int extra = spec.trials % workers;
    int start = 0;
    for (int w = 0; w < workers; ++w) {
      const int count = base + (w < extra ? 1 : 0);
      const int lo = start;
      const int hi = start + count;
      start = hi;
      pool.emplace_back([&, w, lo, hi] {
        try {
          run_range(lo, hi);
        } catch (...) {
          failures[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : failures) {
      if (e) std::rethrow_exception(e);
    }
  }

  report.min_margin = report.trials.front().margin;
  for (const TrialRecord& r : report.trials) {
    report.min_margin = std::min(report.min_margin, r.margin);
  }
  report.pass = report.min_margin >= -kInequalityTol;
  return report;
}

std::string ScalingFit::to_json() const {
  int used = 0;
  for (const auto& [t, norm] : points) {
    if (norm > static_cast<double>(kScalingFloor)) ++used;
  }
  nlohmann::json j;
  j["degenerate"] = degenerate;
  j["intercept"] = intercept;
  j["n_pulses"] = n_pulses;
  j["points_used"] = used;
  j["slope"] = slope;
  j["timing"] = timing_kind_name(timing);
  return j.dump(2);
}

std::string ScalingFit::to_csv() const {
  std::string out = "T,norm_B_minus\n";
  for (const auto& [t, norm] : points) {
    out += format_g17(t);
    out += ',';
    out += format_g17(norm);
    out += '\n';
  }
  return out;
}

ScalingFit order_scaling_fit(const BathModel& bath, int n_pulses,
                             const std::vector<double>& t_grid, TimingKind timing) {
  if (n_pulses < 1) {
    throw std::invalid_argument("order_scaling_fit: n_pulses must be >= 1");
  }
  if (t_grid.size() < 2) {
    throw std::invalid_argument("order_scaling_fit: need at least two grid times");
  }
  double prev = 0.0;
  for (double t : t_grid) {
    if (!std::isfinite(t) || !(t > prev)) {
      throw std::invalid_argument("order_scaling_fit: grid times must be positive and strictly increasing");
    }
    prev = t;
  }

  const LongMatrix b0 = bath.b0.cast<LongComplex>();
  const LongMatrix bz = bath.bz.cast<LongComplex>();
  const LongEigenSystem gen_plus = decompose_long(b0 + bz);
  const LongEigenSystem gen_minus = decompose_long(b0 - bz);
  const std::vector<long double> frac = relative_instants_long(timing, n_pulses);

  ScalingFit fit;
  fit.n_pulses = n_pulses;
  fit.timing = timing;
  std::vector<double> log_t;
  std::vector<double> log_norm;
  for (double t : t_grid) {
    const LongMatrix u_plus =
        branch_product_long(gen_plus, gen_minus, frac, static_cast<long double>(t), true);
    const LongMatrix u_minus =
        branch_product_long(gen_plus, gen_minus, frac, static_cast<long double>(t), false);
    const long double norm = sup_norm_long(0.5L * (u_plus - u_minus));
    fit.points.emplace_back(t, static_cast<double>(norm));
    if (norm > kScalingFloor) {
      log_t.push_back(std::log(t));
      log_norm.push_back(static_cast<double>(std::log(norm)));
    }
  }

  if (log_t.size() < 2) {
    fit.degenerate = true;
    return fit;
  }
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < log_t.size(); ++i) {
    mean_x += log_t[i];
    mean_y += log_norm[i];
  }
  mean_x /= static_cast<double>(log_t.size());
  mean_y /= static_cast<double>(log_t.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < log_t.size(); ++i) {
    sxx += (log_t[i] - mean_x) * (log_t[i] - mean_x);
    sxy += (log_t[i] - mean_x) * (log_norm[i] - mean_y);
  }
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  return fit;
}

}  // namespace uddlab
