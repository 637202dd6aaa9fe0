#include <doctest.h>

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "../faults.hpp"
#include "../oracles.hpp"
#include "wtcpir/errors.hpp"
#include "wtcpir/plan.hpp"
#include "wtcpir/plan_io.hpp"
#include "wtcpir/random.hpp"

using namespace wtcpir;

namespace {

EavesdropProfile worked_mu() { return EavesdropProfile({Rational(1, 4), Rational(1, 2)}); }
GroupSequence worked_g() { return GroupSequence(3, 2, {1, 2, 2}); }

PlanOptions unshuffled() {
  PlanOptions o;
  o.shuffle = false;
  return o;
}

// Queries of one database in construction order.
std::vector<Query> in_order(const QueryPlan& p, int db) {
  auto qs = p.queries[static_cast<std::size_t>(db - 1)];
  std::sort(qs.begin(), qs.end(), [](const Query& a, const Query& b) { return a.order < b.order; });
  return qs;
}

std::vector<int> signature(const Query& q) {
  std::vector<int> s;
  for (const auto& t : q.terms) s.push_back(t.message);
  return s;
}

bool has_desired(const QueryPlan& p, const Query& q) { return faults::has_desired(p, q); }

}  // namespace

TEST_CASE("worked example plan: lengths, repetitions and per-repetition shape") {
  const QueryPlan p = build_plan(worked_g(), worked_mu(), 1, 2024);
  CHECK(p.dims.answer_lengths == std::vector<Count>{16, 18});
  CHECK(p.dims.key_lengths == std::vector<Count>{4, 9});
  CHECK(p.dims.repetitions == 3);
  CHECK(p.message_length() == 12);
  CHECK(p.queries[0].size() == 16);
  CHECK(p.queries[1].size() == 18);
  CHECK(p.field_q == 19);
  CHECK(check_plan_structure(p).empty());

  const auto db1 = in_order(p, 1);
  const auto db2 = in_order(p, 2);
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<std::vector<int>> s1, s2;
    for (const auto& q : db1) {
      if (q.repetition == rep) s1.push_back(signature(q));
    }
    for (const auto& q : db2) {
      if (q.repetition == rep) s2.push_back(signature(q));
    }
    CHECK(s1 == std::vector<std::vector<int>>{{1}, {2}, {3}, {1, 2, 3}});
    CHECK(s2 == std::vector<std::vector<int>>{{1, 2}, {1, 3}, {2, 3}});
  }
  CHECK(std::count_if(db1.begin(), db1.end(), [](const Query& q) { return q.pure_noise(); }) == 4);
  CHECK(std::count_if(db2.begin(), db2.end(), [](const Query& q) { return q.pure_noise(); }) == 9);
}

TEST_CASE("worked example plan: side information wiring") {
  const QueryPlan p = build_plan(worked_g(), worked_mu(), 1, 5, unshuffled());
  const auto db1 = in_order(p, 1);
  const auto db2 = in_order(p, 2);
  for (int rep = 0; rep < 3; ++rep) {
    const auto b = [&](const std::vector<Query>& qs, std::size_t i) { return qs[static_cast<std::size_t>(rep) * 4 + i]; };
    const Query single_b = db1[static_cast<std::size_t>(rep) * 4 + 1];
    const Query single_c = db1[static_cast<std::size_t>(rep) * 4 + 2];
    const Query ab = db2[static_cast<std::size_t>(rep) * 3 + 0];
    const Query ac = db2[static_cast<std::size_t>(rep) * 3 + 1];
    const Query bc = db2[static_cast<std::size_t>(rep) * 3 + 2];
    const Query abc = b(db1, 3);
    // DB2 pairs a with DB1's b and c singles; DB1 pairs a with DB2's b+c.
    CHECK(ab.terms[1] == single_b.terms[0]);
    CHECK(ac.terms[1] == single_c.terms[0]);
    CHECK(abc.terms[1] == bc.terms[0]);
    CHECK(abc.terms[2] == bc.terms[1]);
  }
}

TEST_CASE("worked example renders as a per-repetition table") {
  const QueryPlan p = build_plan(worked_g(), worked_mu(), 1, 5, unshuffled());
  const std::string expected =
      "| Rep | Database 1 | Database 2 |\n"
      "|---|---|---|\n"
      "| 1 | a1+u1 | a2+b1+v1 |\n"
      "|  | b1+u2 | a3+c1+v2 |\n"
      "|  | c1+u3 | b2+c2+v3 |\n"
      "|  | a4+b2+c2+u4 |  |\n"
      "| 2 | a5+u5 | a6+b3+v4 |\n"
      "|  | b3+u6 | a7+c3+v5 |\n"
      "|  | c3+u7 | b4+c4+v6 |\n"
      "|  | a8+b4+c4+u8 |  |\n"
      "| 3 | a9+u9 | a10+b5+v7 |\n"
      "|  | b5+u10 | a11+c5+v8 |\n"
      "|  | c5+u11 | b6+c6+v9 |\n"
      "|  | a12+b6+c6+u12 |  |\n"
      "| noise | u13, u14, u15, u16 | v10, v11, v12, v13, v14, v15, v16, v17, v18 |\n";
  CHECK(plan_to_table(p) == expected);
}

TEST_CASE("trivial sequence downloads singles from database 1 only") {
  const GroupSequence g(3, 3, {1, 1, 1});
  const EavesdropProfile mu({Rational(1, 3), Rational(1, 2), Rational(1, 2)});
  const QueryPlan p = build_plan(g, mu, 2, 1);
  CHECK(p.queries[1].empty());
  CHECK(p.queries[2].empty());
  // nu = 2, so 6 singles and key 3 of t = 9.
  CHECK(p.dims.repetitions == 2);
  CHECK(p.queries[0].size() == 9);
  Count singles = 0;
  for (const auto& q : p.queries[0]) singles += q.terms.size() == 1;
  CHECK(singles == 6);
  CHECK(check_plan_structure(p).empty());
  const std::string table = plan_to_table(p);
  CHECK(table.find("Database 1") != std::string::npos);
  CHECK(table.find("Database 2") == std::string::npos);
  CHECK(table.find("Database 3") == std::string::npos);
}

TEST_CASE("plan shape for M=4, N=2, (1,2,2,2) at mu=0") {
  const QueryPlan p = build_plan(GroupSequence(4, 2, {1, 2, 2, 2}), EavesdropProfile::zeros(2), 1, 9, unshuffled());
  CHECK(p.dims.repetitions == 1);
  std::map<std::pair<std::size_t, bool>, int> db1, db2;
  for (const auto& q : p.queries[0]) ++db1[{q.terms.size(), has_desired(p, q)}];
  for (const auto& q : p.queries[1]) ++db2[{q.terms.size(), has_desired(p, q)}];
  CHECK(db1 == std::map<std::pair<std::size_t, bool>, int>{{{1, true}, 1}, {{1, false}, 3}, {{3, true}, 3}, {{3, false}, 1}});
  CHECK(db2 == std::map<std::pair<std::size_t, bool>, int>{{{2, true}, 3}, {{2, false}, 3}, {{4, true}, 1}});
  CHECK(plan_stats(p).rate == Rational(8, 15));
}

TEST_CASE("plan shape for M=4, N=2, (1,1,2,2): composite stage at database 2") {
  const QueryPlan p = build_plan(GroupSequence(4, 2, {1, 1, 2, 2}), EavesdropProfile::zeros(2), 1, 3, unshuffled());
  const auto db1 = in_order(p, 1);
  const auto db2 = in_order(p, 2);
  std::vector<std::vector<int>> sigs1, sigs2;
  for (const auto& q : db1) sigs1.push_back(signature(q));
  for (const auto& q : db2) sigs2.push_back(signature(q));
  CHECK(sigs1 == std::vector<std::vector<int>>{{1}, {2}, {3}, {4}, {1}, {2}, {3}, {4}, {1, 2, 3, 4}});
  CHECK(sigs2 == std::vector<std::vector<int>>{{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}});
  // The 3-sums at database 2 borrow database 1's round-1 singles, first in
  // first out per message.
  CHECK(db2[0].terms[1] == db1[1].terms[0]);
  CHECK(db2[0].terms[2] == db1[2].terms[0]);
  CHECK(db2[1].terms[1] == db1[5].terms[0]);
  CHECK(db2[1].terms[2] == db1[3].terms[0]);
  CHECK(db2[2].terms[1] == db1[6].terms[0]);
  CHECK(db2[2].terms[2] == db1[7].terms[0]);
  // Database 1's 4-sum uses database 2's undesired 3-sum.
  CHECK(std::vector<Term>(db1[8].terms.begin() + 1, db1[8].terms.end()) == db2[3].terms);
  CHECK(plan_stats(p).rate == Rational(6, 13));
  CHECK(check_plan_structure(p).empty());
}

TEST_CASE("plan_stats recomputes rate and stage counts") {
  const QueryPlan worked = build_plan(worked_g(), worked_mu(), 1, 4);
  const PlanStats s = plan_stats(worked);
  CHECK(s.answer_lengths == std::vector<Count>{16, 18});
  CHECK(s.pure_noise == std::vector<Count>{4, 9});
  CHECK(s.desired_symbols == 12);
  CHECK(s.rate == Rational(6, 17));

  const QueryPlan classic = build_plan(GroupSequence(2, 2, {2, 2}), EavesdropProfile::zeros(2), 1, 4);
  CHECK(plan_stats(classic).rate == Rational(2, 3));

  const GroupSequence g(4, 2, {1, 1, 2, 2});
  const EavesdropProfile mu({Rational(1, 3), Rational(1, 2)});
  const QueryPlan p = build_plan(g, mu, 3, 4);
  const StageCounts y = stage_counts(g);
  const PlanStats ps = plan_stats(p);
  for (int db = 1; db <= 2; ++db) {
    const int l = g.group_of_database(db);
    for (int k = 1; k <= 4; ++k) {
      CHECK(ps.stages[static_cast<std::size_t>(db - 1)][static_cast<std::size_t>(k)] ==
            p.dims.repetitions * y.at(l, k));
    }
  }
}

TEST_CASE("every sequence with M <= 5, N <= 4 builds a valid plan for every desired index") {
  for (int M = 1; M <= 5; ++M) {
    for (int N = 1; N <= 4; ++N) {
      for (const auto& g : monotone_sequences(M, N)) {
        const StageCounts y = stage_counts(g);
        for (int i = 1; i <= M; ++i) {
          const QueryPlan p = build_plan(g, EavesdropProfile::zeros(static_cast<std::size_t>(N)), i, 77);
          INFO("M=" << M << " N=" << N << " i=" << i);
          const auto issues = check_plan_structure(p);
          CHECK_MESSAGE(issues.empty(), (issues.empty() ? "" : issues.front()));
          const PlanStats s = plan_stats(p);
          CHECK(s.rate == achievable_rate(g, EavesdropProfile::zeros(static_cast<std::size_t>(N))));
          for (int db = 1; db <= N; ++db) {
            const int l = g.group_of_database(db);
            for (int k = 1; k <= M; ++k) {
              CHECK(s.stages[static_cast<std::size_t>(db - 1)][static_cast<std::size_t>(k)] ==
                    (l < 0 ? 0 : y.at(l, k)));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("random rational mu: counts agree with the rates module") {
  std::mt19937_64 rng(31);
  int built = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int M = 1 + static_cast<int>(rng() % 4);
    const int N = 1 + static_cast<int>(rng() % 3);
    const EavesdropProfile mu = oracle::random_profile(rng, N, 6);
    const auto seqs = monotone_sequences(M, N);
    const GroupSequence& g = seqs[rng() % seqs.size()];
    const int desired = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(M));
    std::optional<QueryPlan> p;
    try {
      p = build_plan(g, mu, desired, static_cast<std::uint64_t>(trial));
    } catch (const FullyObservedError&) {
      continue;
    }
    ++built;
    INFO("trial " << trial);
    CHECK(check_plan_structure(*p).empty());
    const PlanStats s = plan_stats(*p);
    CHECK(s.answer_lengths == p->dims.answer_lengths);
    CHECK(s.pure_noise == p->dims.key_lengths);
    CHECK(s.rate == achievable_rate(g, mu));
  }
  CHECK(built >= 40);
}

TEST_CASE("relabeling privacy: signature multisets do not depend on the desired index") {
  for (const auto& g : monotone_sequences(4, 3)) {
    const EavesdropProfile mu({Rational(0), Rational(1, 5), Rational(1, 2)});
    const auto base = query_signatures(build_plan(g, mu, 1, 8));
    for (int i = 2; i <= 4; ++i) CHECK(query_signatures(build_plan(g, mu, i, 8)) == base);
  }
}

TEST_CASE("permutations are seeded bijections and the shuffle keeps the multiset") {
  const QueryPlan a = build_plan(worked_g(), worked_mu(), 1, 100);
  const QueryPlan b = build_plan(worked_g(), worked_mu(), 1, 100);
  const QueryPlan c = build_plan(worked_g(), worked_mu(), 1, 101);
  CHECK(plan_to_json(a) == plan_to_json(b));
  CHECK(a.permutations != c.permutations);
  for (const auto& perm : a.permutations) {
    std::vector<std::size_t> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 0; j < sorted.size(); ++j) CHECK(sorted[j] == j);
  }
  const QueryPlan flat = build_plan(worked_g(), worked_mu(), 1, 100, unshuffled());
  CHECK(query_signatures(flat) == query_signatures(a));
  for (std::size_t n = 0; n < a.queries.size(); ++n) {
    for (std::size_t j = 0; j < a.queries[n].size(); ++j) {
      CHECK(a.queries[n][j].noise_slot == j);
      CHECK(a.queries[n][j].terms == flat.queries[n][a.queries[n][j].order].terms);
    }
  }
  // Pure-noise downloads are not all at the end once shuffled.
  bool interleaved = false;
  for (std::size_t j = 0; j + 1 < a.queries[1].size(); ++j) {
    interleaved = interleaved || (a.queries[1][j].pure_noise() && !a.queries[1][j + 1].pure_noise());
  }
  CHECK(interleaved);
}

TEST_CASE("build_plan argument errors") {
  CHECK_THROWS_AS(build_plan(worked_g(), worked_mu(), 0, 1), UsageError);
  CHECK_THROWS_AS(build_plan(worked_g(), worked_mu(), 4, 1), UsageError);
  PlanOptions small;
  small.field_q = 17;
  CHECK_THROWS_AS(build_plan(worked_g(), worked_mu(), 1, 1, small), FieldTooSmallError);
  small.field_q = 18;
  CHECK_THROWS_AS(build_plan(worked_g(), worked_mu(), 1, 1, small), UsageError);
  small.field_q = 23;
  CHECK(build_plan(worked_g(), worked_mu(), 1, 1, small).field_q == 23);
  CHECK_THROWS_AS(build_plan(worked_g(), EavesdropProfile({Rational(1, 4), Rational(1)}), 1, 1), FullyObservedError);
  PlanOptions tiny;
  tiny.max_total_queries = 20;
  CHECK_THROWS_AS(build_plan(worked_g(), worked_mu(), 1, 1, tiny), UsageError);
}

TEST_CASE("structure check reports injected faults") {
  const QueryPlan p = build_plan(worked_g(), worked_mu(), 1, 12);
  CHECK(check_plan_structure(p).empty());
  CHECK_FALSE(check_plan_structure(faults::break_symmetry(p)).empty());
  CHECK_FALSE(check_plan_structure(faults::rewire_side_information(p)).empty());
  CHECK_FALSE(check_plan_structure(faults::shorten_key(p, 1)).empty());
  QueryPlan dup = p;
  dup.queries[0][0].noise_slot = dup.queries[0][1].noise_slot;
  CHECK_FALSE(check_plan_structure(dup).empty());
}

TEST_CASE("plan JSON round trip and loader validation") {
  const QueryPlan p = build_plan(worked_g(), worked_mu(), 2, 55);
  const Json j = plan_to_json(p);
  CHECK(j["version"] == kPlanFormatVersion);
  CHECK(j["meta"]["t"] == Json({16, 18}));
  CHECK(j["meta"]["mu"] == Json({"1/4", "1/2"}));
  const QueryPlan back = plan_from_json(j);
  CHECK(back.queries == p.queries);
  CHECK(back.permutations == p.permutations);
  CHECK(back.dims.key_lengths == p.dims.key_lengths);
  CHECK(plan_to_json(back) == j);

  Json bad = j;
  bad["version"] = 99;
  CHECK_THROWS_AS(plan_from_json(bad), UsageError);
  bad = j;
  bad["meta"].erase("desired");
  CHECK_THROWS_AS(plan_from_json(bad), UsageError);
  bad = j;
  bad["databases"][0]["queries"][0]["terms"] = Json::array({Json::array({7, 0})});
  CHECK_THROWS_AS(plan_from_json(bad), UsageError);
  bad = j;
  bad["meta"]["q"] = 20;
  CHECK_THROWS_AS(plan_from_json(bad), UsageError);
}
