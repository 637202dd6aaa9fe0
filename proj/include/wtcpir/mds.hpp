#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wtcpir/field.hpp"
#include "wtcpir/field_matrix.hpp"

namespace wtcpir {

// (t, k) Vandermonde code over GF(q): G[i][j] = alpha_i^j with alpha_i = i + 1.
class MdsCode {
 public:
  MdsCode(std::size_t t, std::size_t k, const PrimeField& field);

  std::size_t length() const noexcept { return t_; }
  std::size_t dimension() const noexcept { return k_; }
  const PrimeField& field() const noexcept { return generator_.field(); }
  const FieldMatrix& generator() const noexcept { return generator_; }
  std::vector<FieldElement> eval_points() const;

  std::vector<FieldElement> encode(std::span<const FieldElement> key) const;

  // Recovers the key from k codeword symbols at distinct 0-based positions.
  // Runs in O(k^2) by Newton interpolation of the degree < k key polynomial.
  std::vector<FieldElement> recover_key(std::span<const std::size_t> positions,
                                        std::span<const FieldElement> values) const;

 private:
  std::size_t t_;
  std::size_t k_;
  FieldMatrix generator_;
};

// Throws FieldTooSmallError when t > q and UsageError when k > t.
MdsCode mds_generator(std::size_t t, std::size_t k, const PrimeField& field);

std::vector<FieldElement> mds_encode(const MdsCode& code, std::span<const FieldElement> key);

}  // namespace wtcpir
