#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wtcpir/field.hpp"

namespace wtcpir {

// Dense row-major matrix over a prime field. Entries are stored as reduced
// residues; accessors hand out FieldElements.
class FieldMatrix {
 public:
  FieldMatrix(const PrimeField& field, std::size_t rows, std::size_t cols);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  FieldElement at(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const FieldElement& value);

  Word raw(std::size_t r, std::size_t c) const noexcept { return entries_[r * cols_ + c]; }
  Word& raw(std::size_t r, std::size_t c) noexcept { return entries_[r * cols_ + c]; }

  // Copy of the given rows, in the given order. Throws UsageError on a bad index.
  FieldMatrix select_rows(std::span<const std::size_t> row_set) const;

  std::vector<FieldElement> multiply(std::span<const FieldElement> x) const;

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Word> entries_;
};

std::size_t rank(const FieldMatrix& m);

// Rank of the submatrix formed by the listed rows.
std::size_t submatrix_rank(const FieldMatrix& m, std::span<const std::size_t> row_set);

// Solves a x = b for square nonsingular a. Returns nullopt when a is singular.
std::optional<std::vector<FieldElement>> solve(const FieldMatrix& a, std::span<const FieldElement> b);

}  // namespace wtcpir
