#include "wtcpir/mds.hpp"

#include <string>

#include "wtcpir/errors.hpp"

namespace wtcpir {

namespace {

FieldMatrix vandermonde(std::size_t t, std::size_t k, const PrimeField& f) {
  if (t > f.modulus()) {
    throw FieldTooSmallError("code length " + std::to_string(t) + " exceeds field size " +
                             std::to_string(f.modulus()) + "; raise --field-q");
  }
  if (k > t) throw UsageError("code dimension " + std::to_string(k) + " exceeds length " + std::to_string(t));
  FieldMatrix g(f, t, k);
  for (std::size_t i = 0; i < t; ++i) {
    const Word alpha = f.reduce(i + 1);
    Word p = 1;
    for (std::size_t j = 0; j < k; ++j) {
      g.raw(i, j) = p;
      p = f.mul(p, alpha);
    }
  }
  return g;
}

}  // namespace

MdsCode::MdsCode(std::size_t t, std::size_t k, const PrimeField& field)
    : t_(t), k_(k), generator_(vandermonde(t, k, field)) {}

std::vector<FieldElement> MdsCode::eval_points() const {
  std::vector<FieldElement> pts;
  pts.reserve(t_);
  for (std::size_t i = 0; i < t_; ++i) pts.push_back(field().element(i + 1));
  return pts;
}

std::vector<FieldElement> MdsCode::encode(std::span<const FieldElement> key) const {
  if (key.size() != k_) {
    throw UsageError("key length " + std::to_string(key.size()) + " does not match code dimension " +
                     std::to_string(k_));
  }
  return generator_.multiply(key);
}

std::vector<FieldElement> MdsCode::recover_key(std::span<const std::size_t> positions,
                                               std::span<const FieldElement> values) const {
  if (positions.size() != k_ || values.size() != k_) {
    throw UsageError("key recovery needs exactly " + std::to_string(k_) + " codeword symbols");
  }
  const PrimeField& f = field();
  std::vector<Word> x(k_), c(k_);
  for (std::size_t i = 0; i < k_; ++i) {
    if (positions[i] >= t_) throw UsageError("codeword position " + std::to_string(positions[i]) + " out of range");
    if (values[i].modulus() != f.modulus()) throw UsageError("field modulus mismatch in key recovery");
    x[i] = f.reduce(positions[i] + 1);
    c[i] = values[i].value();
  }
  // Divided differences in place.
  for (std::size_t j = 1; j < k_; ++j) {
    for (std::size_t i = k_ - 1; i >= j; --i) {
      const Word den = f.sub(x[i], x[i - j]);
      if (den == 0) throw DomainError("repeated codeword position in key recovery");
      c[i] = f.mul(f.sub(c[i], c[i - 1]), f.inv(den));
    }
  }
  // Expand the Newton form into monomial coefficients (Horner from the top).
  std::vector<Word> poly(k_, 0);
  for (std::size_t step = k_; step-- > 0;) {
    // poly <- poly * (X - x[step]) + c[step]
    for (std::size_t d = k_ - 1; d > 0; --d) poly[d] = f.sub(poly[d - 1], f.mul(poly[d], x[step]));
    poly[0] = f.add(f.neg(f.mul(poly[0], x[step])), c[step]);
  }
  std::vector<FieldElement> key;
  key.reserve(k_);
  for (Word w : poly) key.push_back(f.element(w));
  return key;
}

MdsCode mds_generator(std::size_t t, std::size_t k, const PrimeField& field) { return MdsCode(t, k, field); }

std::vector<FieldElement> mds_encode(const MdsCode& code, std::span<const FieldElement> key) {
  return code.encode(key);
}

}  // namespace wtcpir
