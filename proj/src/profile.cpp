#include "wtcpir/profile.hpp"

#include <algorithm>
#include <string>

#include "wtcpir/errors.hpp"

namespace wtcpir {

EavesdropProfile::EavesdropProfile(std::vector<Rational> mu) : mu_(std::move(mu)) {
  if (mu_.empty()) throw UsageError("eavesdropping profile needs at least one database");
  for (std::size_t i = 0; i < mu_.size(); ++i) {
    if (mu_[i] < 0 || mu_[i] > 1) {
      throw UsageError("mu_" + std::to_string(i + 1) + " = " + to_fraction_string(mu_[i]) + " is outside [0, 1]");
    }
    if (i > 0 && mu_[i] < mu_[i - 1]) {
      throw UsageError("mu must be sorted non-decreasing (mu_" + std::to_string(i) + " = " +
                       to_fraction_string(mu_[i - 1]) + " > mu_" + std::to_string(i + 1) + " = " +
                       to_fraction_string(mu_[i]) + "); pass --sort-mu to sort automatically");
    }
  }
}

EavesdropProfile EavesdropProfile::sorted_from(std::vector<Rational> mu) {
  std::sort(mu.begin(), mu.end());
  return EavesdropProfile(std::move(mu));
}

EavesdropProfile EavesdropProfile::zeros(std::size_t n) { return EavesdropProfile(std::vector<Rational>(n)); }

const Rational& EavesdropProfile::of_database(int n) const {
  if (n < 1 || static_cast<std::size_t>(n) > mu_.size()) {
    throw UsageError("database index " + std::to_string(n) + " out of range");
  }
  return mu_[static_cast<std::size_t>(n - 1)];
}

}  // namespace wtcpir
