#include "wtcpir/field_matrix.hpp"

#include <string>
#include <utility>

#include "wtcpir/errors.hpp"

namespace wtcpir {

FieldMatrix::FieldMatrix(const PrimeField& field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

FieldElement FieldMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw UsageError("matrix index out of range");
  return field_.element(raw(r, c));
}

void FieldMatrix::set(std::size_t r, std::size_t c, const FieldElement& value) {
  if (r >= rows_ || c >= cols_) throw UsageError("matrix index out of range");
  if (value.modulus() != field_.modulus()) throw UsageError("field modulus mismatch in matrix assignment");
  raw(r, c) = value.value();
}

FieldMatrix FieldMatrix::select_rows(std::span<const std::size_t> row_set) const {
  FieldMatrix out(field_, row_set.size(), cols_);
  for (std::size_t i = 0; i < row_set.size(); ++i) {
    if (row_set[i] >= rows_) {
      throw UsageError("row index " + std::to_string(row_set[i]) + " out of range for " + std::to_string(rows_) +
                       " rows");
    }
    for (std::size_t c = 0; c < cols_; ++c) out.raw(i, c) = raw(row_set[i], c);
  }
  return out;
}

std::vector<FieldElement> FieldMatrix::multiply(std::span<const FieldElement> x) const {
  if (x.size() != cols_) {
    throw UsageError("vector length " + std::to_string(x.size()) + " does not match " + std::to_string(cols_) +
                     " columns");
  }
  for (const auto& e : x) {
    if (e.modulus() != field_.modulus()) throw UsageError("field modulus mismatch in matrix-vector product");
  }
  std::vector<FieldElement> y;
  y.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Word acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) acc = field_.add(acc, field_.mul(raw(r, c), x[c].value()));
    y.push_back(field_.element(acc));
  }
  return y;
}

namespace {

// Row-reduces in place and returns the rank.
std::size_t eliminate(const PrimeField& f, std::vector<Word>& a, std::size_t rows, std::size_t cols) {
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
    std::size_t p = pivot_row;
    while (p < rows && a[p * cols + c] == 0) ++p;
    if (p == rows) continue;
    if (p != pivot_row) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[p * cols + j], a[pivot_row * cols + j]);
    }
    const Word inv = f.inv(a[pivot_row * cols + c]);
    for (std::size_t r = pivot_row + 1; r < rows; ++r) {
      const Word factor = f.mul(a[r * cols + c], inv);
      if (factor == 0) continue;
      for (std::size_t j = c; j < cols; ++j) {
        a[r * cols + j] = f.sub(a[r * cols + j], f.mul(factor, a[pivot_row * cols + j]));
      }
    }
    ++pivot_row;
  }
  return pivot_row;
}

}  // namespace

std::size_t rank(const FieldMatrix& m) {
  std::vector<Word> a(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) a[r * m.cols() + c] = m.raw(r, c);
  }
  return eliminate(m.field(), a, m.rows(), m.cols());
}

std::size_t submatrix_rank(const FieldMatrix& m, std::span<const std::size_t> row_set) {
  return rank(m.select_rows(row_set));
}

std::optional<std::vector<FieldElement>> solve(const FieldMatrix& a, std::span<const FieldElement> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw UsageError("solve requires a square matrix");
  if (b.size() != n) throw UsageError("right-hand side length does not match matrix");
  const PrimeField& f = a.field();
  const std::size_t w = n + 1;
  std::vector<Word> aug(n * w);
  for (std::size_t r = 0; r < n; ++r) {
    if (b[r].modulus() != f.modulus()) throw UsageError("field modulus mismatch in solve");
    for (std::size_t c = 0; c < n; ++c) aug[r * w + c] = a.raw(r, c);
    aug[r * w + n] = b[r].value();
  }
  // Gauss-Jordan on the augmented system.
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && aug[p * w + c] == 0) ++p;
    if (p == n) return std::nullopt;
    if (p != c) {
      for (std::size_t j = 0; j < w; ++j) std::swap(aug[p * w + j], aug[c * w + j]);
    }
    const Word inv = f.inv(aug[c * w + c]);
    for (std::size_t j = c; j < w; ++j) aug[c * w + j] = f.mul(aug[c * w + j], inv);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || aug[r * w + c] == 0) continue;
      const Word factor = aug[r * w + c];
      for (std::size_t j = c; j < w; ++j) aug[r * w + j] = f.sub(aug[r * w + j], f.mul(factor, aug[c * w + j]));
    }
  }
  std::vector<FieldElement> x;
  x.reserve(n);
  for (std::size_t r = 0; r < n; ++r) x.push_back(f.element(aug[r * w + n]));
  return x;
}

}  // namespace wtcpir
