#pragma once

#include <compare>
#include <cstdint>
#include <ostream>

namespace wtcpir {

using Word = std::uint64_t;

bool is_prime(Word n);

// Smallest prime p with p >= n.
Word next_prime_at_least(Word n);

class FieldElement;

// GF(q) for a prime q < 2^31, so that products of two residues fit in 64 bits.
class PrimeField {
 public:
  explicit PrimeField(Word modulus);

  Word modulus() const noexcept { return q_; }

  FieldElement element(Word value) const;
  FieldElement zero() const;
  FieldElement one() const;

  // Raw residue arithmetic; operands must already be reduced.
  Word add(Word a, Word b) const noexcept { return a + b >= q_ ? a + b - q_ : a + b; }
  Word sub(Word a, Word b) const noexcept { return a >= b ? a - b : a + q_ - b; }
  Word neg(Word a) const noexcept { return a == 0 ? 0 : q_ - a; }
  Word mul(Word a, Word b) const noexcept { return (a * b) % q_; }
  Word pow(Word base, std::uint64_t exponent) const noexcept;
  Word inv(Word a) const;  // throws DomainError for 0
  Word reduce(Word a) const noexcept { return a % q_; }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  Word q_;
};

class FieldElement {
 public:
  FieldElement(Word value, const PrimeField& field) : value_(field.reduce(value)), q_(field.modulus()) {}

  Word value() const noexcept { return value_; }
  Word modulus() const noexcept { return q_; }
  PrimeField field() const { return PrimeField(q_); }

  FieldElement& operator+=(const FieldElement& rhs);
  FieldElement& operator-=(const FieldElement& rhs);
  FieldElement& operator*=(const FieldElement& rhs);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  FieldElement operator-() const;

  FieldElement inverse() const;
  FieldElement pow(std::uint64_t exponent) const;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  friend class PrimeField;
  struct Unchecked {};
  FieldElement(Unchecked, Word value, Word q) : value_(value), q_(q) {}
  void require_same_field(const FieldElement& other) const;

  Word value_;
  Word q_;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& e);

}  // namespace wtcpir
