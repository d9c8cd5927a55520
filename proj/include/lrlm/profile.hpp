#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lrlm/task.hpp"

namespace lrlm {

struct OracleProfile {
  std::string name = "custom";
  std::size_t K = 32000;
  double A0 = 0.95;
  double rho = 0.8;
  double c_in = 0.0;
  double c_out = 0.0;
  std::size_t n_out_bar = 64;
  double c_oplus = 0.0;
  double A_oplus = 1.0;
  std::uint64_t seed = 0;
};

// C(n) = c_in * n + c_out * n_out_bar
double cost_of(const OracleProfile& p, std::size_t n) noexcept;

// A(n) = A0 * rho^(n/K), extrapolated past K and clamped to (0, 1].
double accuracy_at(const OracleProfile& p, double n) noexcept;

// Price of one composition over k parts; zero for symbolic operators.
double compose_cost(const OracleProfile& p, std::size_t k, ComposeOp op) noexcept;

// Preservation probability of one composition step.
double compose_accuracy(const OracleProfile& p, ComposeOp op) noexcept;

// Throws ConfigError when a field is outside its domain.
void validate_profile(const OracleProfile& p);

// `key = value` lines; `#` starts a comment.
OracleProfile parse_profile(std::string_view text, std::string name = "custom");
std::string format_profile(const OracleProfile& p);

std::vector<std::string> builtin_profile_names();
OracleProfile builtin_profile(std::string_view name);

// A built-in name or a path to a profile file.
OracleProfile load_profile(const std::string& name_or_path);

}  // namespace lrlm
