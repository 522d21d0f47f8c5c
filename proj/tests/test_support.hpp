#pragma once

#include <cmath>
#include <filesystem>
#include <string>

#include "uddlab/linops.hpp"
#include "uddlab/rng.hpp"

namespace uddlab::test {

/// |a - b| <= tol, rejecting NaN/inf on either side.
inline bool near_abs(double a, double b, double tol) {
  return std::isfinite(a) && std::isfinite(b) && std::abs(a - b) <= tol;
}

/// |a - b| <= tol * max(|a|, |b|), rejecting NaN/inf.
inline bool near_rel(double a, double b, double tol) {
  return std::isfinite(a) && std::isfinite(b) &&
         std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

inline bool near_abs(const Complex& a, const Complex& b, double tol) {
  return std::isfinite(a.real()) && std::isfinite(a.imag()) && std::isfinite(b.real()) &&
         std::isfinite(b.imag()) && std::abs(a - b) <= tol;
}

/// Matrix with independent standard-complex-normal entries (not Hermitian).
Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Random unitary: the exponential of -i times a random Hermitian generator.
Matrix random_unitary(Eigen::Index dim, Rng& rng);

/// Random density operator G G^dag / tr, full rank with probability one.
Matrix random_density_matrix(Eigen::Index dim, Rng& rng);

/// Largest absolute entry of a - b.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Result of one shell invocation with captured streams.
struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs `command` through the shell with stdout/stderr captured into `dir`.
/// `env_prefix` may hold VAR=value assignments placed before the command.
CommandResult run_command(const std::filesystem::path& dir, const std::string& command,
                          const std::string& env_prefix = "");

std::string read_file(const std::filesystem::path& path);

/// Fresh unique directory under the system temp root.
std::filesystem::path fresh_temp_dir(const std::string& tag);

}  // namespace uddlab::test
