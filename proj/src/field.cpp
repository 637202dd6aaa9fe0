#include "wtcpir/field.hpp"

#include <string>

#include "wtcpir/errors.hpp"

namespace wtcpir {

namespace {

Word pow_mod(Word base, std::uint64_t exponent, Word q) {
  Word result = 1 % q;
  base %= q;
  while (exponent > 0) {
    if (exponent & 1) result = (result * base) % q;
    base = (base * base) % q;
    exponent >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime(Word n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (Word d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

Word next_prime_at_least(Word n) {
  Word p = n < 2 ? 2 : n;
  while (!is_prime(p)) ++p;
  return p;
}

PrimeField::PrimeField(Word modulus) : q_(modulus) {
  if (modulus >= (Word{1} << 31)) {
    throw UsageError("field modulus " + std::to_string(modulus) + " exceeds 2^31");
  }
  if (!is_prime(modulus)) {
    throw UsageError("field modulus " + std::to_string(modulus) + " is not prime");
  }
}

FieldElement PrimeField::element(Word value) const { return FieldElement(value, *this); }
FieldElement PrimeField::zero() const { return FieldElement(FieldElement::Unchecked{}, 0, q_); }
FieldElement PrimeField::one() const { return FieldElement(FieldElement::Unchecked{}, 1, q_); }

Word PrimeField::pow(Word base, std::uint64_t exponent) const noexcept { return pow_mod(base, exponent, q_); }

Word PrimeField::inv(Word a) const {
  if (a % q_ == 0) throw DomainError("inverse of zero in GF(" + std::to_string(q_) + ")");
  return pow(a, q_ - 2);
}

void FieldElement::require_same_field(const FieldElement& other) const {
  if (q_ != other.q_) {
    throw UsageError("field modulus mismatch: " + std::to_string(q_) + " vs " + std::to_string(other.q_));
  }
}

FieldElement& FieldElement::operator+=(const FieldElement& rhs) {
  require_same_field(rhs);
  value_ = value_ + rhs.value_ >= q_ ? value_ + rhs.value_ - q_ : value_ + rhs.value_;
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& rhs) {
  require_same_field(rhs);
  value_ = value_ >= rhs.value_ ? value_ - rhs.value_ : value_ + q_ - rhs.value_;
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& rhs) {
  require_same_field(rhs);
  value_ = (value_ * rhs.value_) % q_;
  return *this;
}

FieldElement FieldElement::operator-() const { return {Unchecked{}, value_ == 0 ? 0 : q_ - value_, q_}; }

FieldElement FieldElement::inverse() const {
  if (value_ == 0) throw DomainError("inverse of zero in GF(" + std::to_string(q_) + ")");
  return {Unchecked{}, pow_mod(value_, q_ - 2, q_), q_};
}

FieldElement FieldElement::pow(std::uint64_t exponent) const {
  return {Unchecked{}, pow_mod(value_, exponent, q_), q_};
}

std::ostream& operator<<(std::ostream& os, const FieldElement& e) { return os << e.value(); }

}  // namespace wtcpir
