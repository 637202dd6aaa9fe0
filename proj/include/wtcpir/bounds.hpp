#pragma once

#include <cstddef>
#include <vector>

#include "wtcpir/profile.hpp"
#include "wtcpir/rational.hpp"

namespace wtcpir {

// One inner-problem constraint R <= coefficients . tau for the sequence
// (n_1, ..., n_{M-1}).
struct SequenceBound {
  std::vector<int> sequence;
  std::vector<Rational> coefficients;
};

// All N^{M-1} constraints in lexicographic order of the sequence. Throws
// EnumerationTooLarge above the budget.
std::vector<SequenceBound> sequence_bounds(int M, int N, const EavesdropProfile& mu, std::size_t budget);

// Drops every constraint that is componentwise no tighter than another one;
// exact duplicates keep their first occurrence.
std::vector<SequenceBound> prune_dominated(std::vector<SequenceBound> bounds);

// Minimum over all sequences at a fixed traffic vector. Throws UsageError
// when tau has negative entries or does not sum to 1.
Rational inner_bound_at(const std::vector<Rational>& tau, const EavesdropProfile& mu, int M);

enum class BoundMethod { Simplex, VertexEnumeration };

struct BoundOptions {
  BoundMethod method = BoundMethod::Simplex;
  std::size_t sequence_budget = 2'000'000;
  std::size_t vertex_budget = 5'000'000;
  bool prune_dominated = true;
  // Among optimal traffic vectors, report the one closest to uniform in the
  // max norm. Otherwise report whichever vertex the solver lands on.
  bool balance_tau = true;
};

struct BoundResult {
  Rational value;
  std::vector<Rational> argmax_tau;
  std::vector<std::vector<int>> active_sequences;
};

BoundResult upper_bound(int M, int N, const EavesdropProfile& mu, const BoundOptions& options = {});

struct ClosedFormCapacity {
  Rational value;
  std::vector<int> argmax;  // (n_0, n_1) or (n_0, n_1, n_2)
};

// M in {2, 3} only; maximizes the explicit capacity expressions over monotone
// sequences, ties to the lexicographically largest.
ClosedFormCapacity closed_form_capacity(int M, int N, const EavesdropProfile& mu);

// upper_bound - best_scheme rate.
Rational gap(int M, int N, const EavesdropProfile& mu, const BoundOptions& options = {});

}  // namespace wtcpir
