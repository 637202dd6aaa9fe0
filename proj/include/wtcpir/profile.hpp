#pragma once

#include <cstddef>
#include <vector>

#include "wtcpir/rational.hpp"

namespace wtcpir {

// Per-database tap fractions mu_1 <= ... <= mu_N, each in [0, 1]. A value of
// exactly 1 is representable so that callers get FullyObservedError from the
// scheme code rather than a parse failure.
class EavesdropProfile {
 public:
  explicit EavesdropProfile(std::vector<Rational> mu);

  static EavesdropProfile sorted_from(std::vector<Rational> mu);
  static EavesdropProfile zeros(std::size_t n);

  std::size_t size() const noexcept { return mu_.size(); }
  // 0-based.
  const Rational& operator[](std::size_t i) const { return mu_[i]; }
  // 1-based database index.
  const Rational& of_database(int n) const;
  const std::vector<Rational>& values() const noexcept { return mu_; }

  friend bool operator==(const EavesdropProfile&, const EavesdropProfile&) = default;

 private:
  std::vector<Rational> mu_;
};

}  // namespace wtcpir
