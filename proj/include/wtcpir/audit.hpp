#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wtcpir/plan.hpp"
#include "wtcpir/plan_io.hpp"

namespace wtcpir {

inline constexpr std::size_t kDefaultAuditBudget = 10'000;
inline constexpr std::size_t kRandomObservationSets = 10'000;

struct SecurityDatabaseReport {
  int database = 0;
  std::size_t answer_length = 0;
  std::size_t observed = 0;       // |S_n| = mu_n t_n
  std::size_t key_dimension = 0;
  std::size_t tested_sets = 0;
  bool exhaustive = false;
  bool pass = true;
  std::optional<std::vector<std::size_t>> failing_set;
  std::size_t failing_rank = 0;
};

struct SecurityReport {
  bool pass = true;
  bool vacuous = true;  // no database is observed at all
  std::vector<SecurityDatabaseReport> databases;
};

// For every tested observation set S of mu_n t_n answer positions, the rows of
// the noise generator bound to S must have full rank |S|. Exhaustive when
// C(t_n, |S|) <= budget; otherwise every cyclic window, the pure-noise set and
// its one-swap neighbours, and kRandomObservationSets seeded random sets.
SecurityReport audit_security(const QueryPlan& plan, std::size_t budget = kDefaultAuditBudget);

struct PrivacyReport {
  bool pass = true;
  int desired_checked = 0;
  std::string first_difference;  // empty on PASS
};

// Builds a plan for every desired index and compares, per database, the
// multiset of query signatures (message sets, empty for pure noise).
PrivacyReport audit_privacy(const GroupSequence& g, const EavesdropProfile& mu, std::uint64_t seed);

// Same comparison for a given plan against plans rebuilt for every other
// desired index, plus a per-round check that each message subset occurs
// equally often at each database.
PrivacyReport audit_privacy(const QueryPlan& plan);

struct DecodabilityReport {
  bool pass = true;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::string first_failure;  // empty on PASS
};

DecodabilityReport audit_decodability(const QueryPlan& plan, std::size_t trials, std::uint64_t seed);

Json to_json(const SecurityReport& r);
Json to_json(const PrivacyReport& r);
Json to_json(const DecodabilityReport& r);

}  // namespace wtcpir
