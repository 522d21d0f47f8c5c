#include "uddlab/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace uddlab {

PulseSequence make_sequence(double total_time, std::vector<double> instants) {
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw std::invalid_argument("pulse sequence: total_time must be positive and finite");
  }
  double prev = 0.0;
  for (double t : instants) {
    if (!(t > prev) || !(t < total_time)) {
      throw std::invalid_argument(
          "pulse sequence: instants must be strictly increasing inside (0, total_time)");
    }
    prev = t;
  }
  return PulseSequence{total_time, std::move(instants)};
}

PulseSequence udd_sequence(int n_pulses, double total_time) {
  if (n_pulses < 1) throw std::invalid_argument("udd_sequence: n_pulses must be >= 1");
  if (!(total_time > 0.0)) throw std::invalid_argument("udd_sequence: total_time must be positive");
  const int n = n_pulses;
  std::vector<double> frac(n);
  // Fill the left half from the sine form and mirror the right half so the
  // symmetry t_j + t_{n+1-j} = T holds to the last bit, not just in theory.
  for (int j = 1; 2 * j < n + 1; ++j) {
    const double s = std::sin(j * std::numbers::pi / (2.0 * n + 2.0));
    frac[j - 1] = s * s;
  }
  if (n % 2 == 1) frac[(n - 1) / 2] = 0.5;
  for (int j = 1; 2 * j < n + 1; ++j) frac[n - j] = 1.0 - frac[j - 1];
  std::vector<double> instants(n);
  for (int j = 0; j < n; ++j) instants[j] = total_time * frac[j];
  return make_sequence(total_time, std::move(instants));
}

PulseSequence periodic_sequence(int n_pulses, double total_time) {
  if (n_pulses < 1) throw std::invalid_argument("periodic_sequence: n_pulses must be >= 1");
  if (!(total_time > 0.0)) {
    throw std::invalid_argument("periodic_sequence: total_time must be positive");
  }
  std::vector<double> instants(n_pulses);
  for (int j = 1; j <= n_pulses; ++j) {
    instants[j - 1] = total_time * static_cast<double>(j) / (n_pulses + 1);
  }
  return make_sequence(total_time, std::move(instants));
}

PulseSequence sequence_of(TimingKind kind, int n_pulses, double total_time) {
  switch (kind) {
    case TimingKind::udd: return udd_sequence(n_pulses, total_time);
    case TimingKind::periodic: return periodic_sequence(n_pulses, total_time);
  }
  throw std::invalid_argument("sequence_of: unknown timing kind");
}

const char* timing_kind_name(TimingKind kind) {
  switch (kind) {
    case TimingKind::udd: return "udd";
    case TimingKind::periodic: return "periodic";
  }
  throw std::invalid_argument("timing_kind_name: unknown timing kind");
}

TimingKind timing_kind_from_name(const std::string& name) {
  if (name == "udd") return TimingKind::udd;
  if (name == "periodic") return TimingKind::periodic;
  throw std::invalid_argument("timing_kind_from_name: expected \"udd\" or \"periodic\"");
}

int switching_function(const PulseSequence& seq, double t) {
  if (!(t >= 0.0) || !(t <= seq.total_time)) {
    throw std::domain_error("switching_function: t outside [0, total_time]");
  }
  const auto flipped =
      std::upper_bound(seq.instants.begin(), seq.instants.end(), t) - seq.instants.begin();
  return (flipped % 2 == 0) ? 1 : -1;
}

double q_factor(int n_pulses) {
  if (n_pulses < 1) throw std::invalid_argument("q_factor: n_pulses must be >= 1");
  const double s = std::sin(std::numbers::pi / (2.0 * n_pulses + 2.0));
  return 1.0 / (s * s);
}

std::string to_json(const PulseSequence& seq) {
  nlohmann::json j;
  j["total_time"] = seq.total_time;
  j["instants"] = seq.instants;
  return j.dump();
}

PulseSequence sequence_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("sequence_from_json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("total_time") || !j.contains("instants") ||
      !j["total_time"].is_number() || !j["instants"].is_array()) {
    throw std::invalid_argument(
        "sequence_from_json: expected {\"total_time\": number, \"instants\": [numbers]}");
  }
  std::vector<double> instants;
  for (const auto& v : j["instants"]) {
    if (!v.is_number()) throw std::invalid_argument("sequence_from_json: non-numeric instant");
    instants.push_back(v.get<double>());
  }
  return make_sequence(j["total_time"].get<double>(), std::move(instants));
}

}  // namespace uddlab
