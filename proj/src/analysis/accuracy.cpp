#include <cmath>

#include "lrlm/analysis.hpp"

namespace lrlm {

double accuracy_lower_bound(std::size_t n, std::size_t k, std::size_t tau, int d,
                            const OracleProfile& profile) {
  const double a_tau = accuracy_at(profile, static_cast<double>(tau));
  const double a_op = std::pow(profile.A_oplus, d);
  if (a_tau >= 1.0) return a_op;
  const double e = static_cast<double>(n) * static_cast<double>(k) / static_cast<double>(tau);
  return std::pow(a_tau, e) * a_op;
}

double accuracy_power_law(std::size_t n, std::size_t k, std::size_t tau, int d,
                          const OracleProfile& profile) {
  const double a_tau = accuracy_at(profile, static_cast<double>(tau));
  const double c = std::log(a_tau) / std::log(static_cast<double>(k));
  return std::pow(static_cast<double>(n) / static_cast<double>(tau), c) *
         std::pow(profile.A_oplus, d);
}

double direct_accuracy(std::size_t n, const OracleProfile& profile) {
  return profile.A0 * std::pow(profile.rho, static_cast<double>(n) / static_cast<double>(profile.K));
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.96, nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double denom = 1.0 + z * z / nt;
  const double centre = (p + z * z / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nt + z * z / (4.0 * nt * nt)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace lrlm
