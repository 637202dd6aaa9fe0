#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wtcpir/field.hpp"
#include "wtcpir/group_sequence.hpp"
#include "wtcpir/profile.hpp"
#include "wtcpir/rates.hpp"

namespace wtcpir {

// One symbol of message `message` (1-based) at stored position `slot`.
struct Term {
  int message = 0;
  std::size_t slot = 0;

  friend auto operator<=>(const Term&, const Term&) = default;
};

struct Query {
  int database = 0;          // 1-based
  std::vector<Term> terms;   // sorted by message; empty for a pure-noise download
  std::size_t noise_slot = 0;
  int repetition = -1;       // -1 for pure noise
  std::size_t order = 0;     // position before shuffling

  bool pure_noise() const noexcept { return terms.empty(); }
  friend bool operator==(const Query&, const Query&) = default;
};

struct QueryPlan {
  int M = 0;
  int N = 0;
  Word field_q = 0;
  GroupSequence sequence;
  EavesdropProfile mu;
  PlanDimensions dims;
  int desired = 1;
  std::uint64_t seed = 0;
  // permutations[m-1][logical index] = stored slot.
  std::vector<std::vector<std::size_t>> permutations;
  // queries[n-1] in answer order.
  std::vector<std::vector<Query>> queries;

  std::size_t message_length() const { return static_cast<std::size_t>(dims.message_length()); }
};

struct PlanOptions {
  std::optional<Word> field_q;  // default: smallest prime above max t_n
  std::size_t max_total_queries = 1'000'000;
  bool shuffle = true;
};

// Throws FullyObservedError, FieldTooSmallError, UsageError for bad input or
// oversized plans, and ConstructionError if the side-information wiring does
// not line up with the stage counts.
QueryPlan build_plan(const GroupSequence& g, const EavesdropProfile& mu, int desired, std::uint64_t seed,
                     const PlanOptions& options = {});

// Markdown table: one column per active database, rows grouped by repetition,
// pure-noise downloads in a final row. Message symbols are labelled a, b, c...
// by their pre-permutation index and noise symbols u, v, w... per database.
std::string plan_to_table(const QueryPlan& plan);

struct PlanStats {
  std::vector<Count> answer_lengths;
  std::vector<Count> pure_noise;
  Count desired_symbols = 0;
  Rational rate;
  // stages[n-1][k]: k-sum queries at database n divided by binom(M, k).
  std::vector<std::vector<Count>> stages;
};

PlanStats plan_stats(const QueryPlan& plan);

// Per database, how often each message set occurs; pure noise is the empty set.
using SignatureCounts = std::map<std::vector<int>, Count>;
std::vector<SignatureCounts> query_signatures(const QueryPlan& plan);

// Structural invariants of a plan. Returns one message per violation.
std::vector<std::string> check_plan_structure(const QueryPlan& plan);

std::string symbol_label(int message, std::size_t index);
std::string noise_label(int database, std::size_t index);

}  // namespace wtcpir
