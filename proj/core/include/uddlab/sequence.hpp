#pragma once

#include <string>
#include <vector>

namespace uddlab {

/// Pulse timing families offered as experiment controls.
enum class TimingKind { udd, periodic };

/// An ideal instantaneous-flip schedule: `instants` are the flip times,
/// strictly increasing inside (0, total_time). An empty list is free
/// evolution.
struct PulseSequence {
  double total_time = 1.0;
  std::vector<double> instants;
};

/// Validates and builds a sequence; throws std::invalid_argument on a
/// non-positive duration or instants that are not strictly increasing
/// inside (0, total_time).
PulseSequence make_sequence(double total_time, std::vector<double> instants);

/// Optimized sin^2 timing: t_j = total_time * sin^2(j*pi/(2n+2)), j = 1..n.
/// The schedule is symmetrized explicitly so t_j + t_{n+1-j} equals
/// total_time to working precision. Requires n_pulses >= 1.
PulseSequence udd_sequence(int n_pulses, double total_time);

/// Equispaced control timing: t_j = j*total_time/(n+1). Requires n >= 1.
PulseSequence periodic_sequence(int n_pulses, double total_time);

PulseSequence sequence_of(TimingKind kind, int n_pulses, double total_time);

/// "udd" or "periodic"; the spelling used in reports and CLI flags.
const char* timing_kind_name(TimingKind kind);

/// Inverse of timing_kind_name; throws std::invalid_argument on unknown
/// names.
TimingKind timing_kind_from_name(const std::string& name);

/// Sign of the toggling frame at time t: +1 before the first pulse and
/// flipping at each instant; right-continuous, so the flip has already
/// happened at t == instants[j]. Throws std::domain_error outside
/// [0, total_time].
int switching_function(const PulseSequence& seq, double t);

/// csc^2(pi/(2n+2)): ratio of total time to the first udd interval,
/// i.e. q * t_1 = total_time. Grows like ((2n+2)/pi)^2 + 1/3. n >= 1.
double q_factor(int n_pulses);

/// {"instants": [...], "total_time": ...}
std::string to_json(const PulseSequence& seq);

/// Parses and validates; throws std::invalid_argument on malformed input.
PulseSequence sequence_from_json(const std::string& text);

}  // namespace uddlab
