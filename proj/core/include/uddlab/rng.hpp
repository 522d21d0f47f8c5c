#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace uddlab {

/// Deterministic random source for reproducible experiments.
///
/// The raw stream is std::mt19937_64, which is bit-exact across platforms.
/// Uniform and normal variates are produced by explicit transforms of that
/// stream instead of std::*_distribution (whose output is
/// implementation-defined), so a seed pins every draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Seed for an independent substream, e.g. one per trial. Derived by
  /// splitmix64 mixing so that substreams of a master seed do not overlap
  /// in practice and do not coincide with the master stream itself.
  static std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

  static Rng substream(std::uint64_t master, std::uint64_t index) {
    return Rng(substream_seed(master, index));
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller.
  double normal();

  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace uddlab
