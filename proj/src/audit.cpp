#include "wtcpir/audit.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "wtcpir/errors.hpp"
#include "wtcpir/field_matrix.hpp"
#include "wtcpir/mds.hpp"
#include "wtcpir/random.hpp"
#include "wtcpir/simulator.hpp"

namespace wtcpir {

namespace {

constexpr std::uint64_t kSampleStream = 21;
constexpr std::uint64_t kTrialStream = 22;

// C(n, k), or cap + 1 when it exceeds cap.
std::size_t capped_binomial(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > cap) return cap + 1;
  }
  return static_cast<std::size_t>(c);
}

std::string join(const std::vector<int>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

std::string describe(const SignatureCounts& a, const SignatureCounts& b) {
  std::set<std::vector<int>> keys;
  for (const auto& [k, v] : a) keys.insert(k);
  for (const auto& [k, v] : b) keys.insert(k);
  for (const auto& k : keys) {
    const Count x = a.count(k) ? a.at(k) : 0;
    const Count y = b.count(k) ? b.at(k) : 0;
    if (x != y) return "signature " + join(k) + " occurs " + std::to_string(x) + " vs " + std::to_string(y) + " times";
  }
  return "";
}

std::string compare_signatures(const std::vector<SignatureCounts>& a, int ia, const std::vector<SignatureCounts>& b,
                               int ib) {
  for (std::size_t n = 0; n < std::max(a.size(), b.size()); ++n) {
    const SignatureCounts empty;
    const auto& x = n < a.size() ? a[n] : empty;
    const auto& y = n < b.size() ? b[n] : empty;
    if (x != y) {
      return "database " + std::to_string(n + 1) + ", desired " + std::to_string(ia) + " vs " + std::to_string(ib) +
             ": " + describe(x, y);
    }
  }
  return "";
}

class SetTester {
 public:
  SetTester(const FieldMatrix& rows, std::size_t key_dim, SecurityDatabaseReport& report)
      : rows_(rows), key_dim_(key_dim), report_(report) {}

  // Returns false once a deficient set has been recorded.
  bool test(const std::vector<std::size_t>& set) {
    ++report_.tested_sets;
    const std::size_t r = key_dim_ == 0 ? 0 : submatrix_rank(rows_, set);
    if (r == set.size()) return true;
    report_.pass = false;
    report_.failing_set = set;
    report_.failing_rank = r;
    return false;
  }

 private:
  const FieldMatrix& rows_;
  std::size_t key_dim_;
  SecurityDatabaseReport& report_;
};

}  // namespace

SecurityReport audit_security(const QueryPlan& plan, std::size_t budget) {
  SecurityReport out;
  const PrimeField field(plan.field_q);
  for (int db = 1; db <= plan.N; ++db) {
    const auto& qs = plan.queries[static_cast<std::size_t>(db - 1)];
    SecurityDatabaseReport rep;
    rep.database = db;
    rep.answer_length = qs.size();
    const Rational obs = plan.mu.of_database(db) * static_cast<Count>(qs.size());
    if (denominator_of(obs) != 1) throw UsageError("mu_n t_n is not an integer at database " + std::to_string(db));
    rep.observed = static_cast<std::size_t>(to_int64(obs));
    rep.key_dimension = static_cast<std::size_t>(std::max<Count>(0, plan.dims.key_lengths[static_cast<std::size_t>(db - 1)]));
    const std::size_t t = qs.size();
    const std::size_t s = rep.observed;
    if (s == 0 || t == 0) {
      rep.exhaustive = true;
      out.databases.push_back(std::move(rep));
      continue;
    }
    out.vacuous = false;
    if (rep.key_dimension > t) throw UsageError("key longer than the answer at database " + std::to_string(db));
    // Row j: key coefficients of the noise symbol added at answer position j.
    const MdsCode code = mds_generator(t, rep.key_dimension, field);
    FieldMatrix rows(field, t, rep.key_dimension);
    for (std::size_t j = 0; j < t; ++j) {
      for (std::size_t c = 0; c < rep.key_dimension; ++c) rows.raw(j, c) = code.generator().raw(qs[j].noise_slot, c);
    }
    SetTester tester(rows, rep.key_dimension, rep);

    if (capped_binomial(t, s, budget) <= budget) {
      rep.exhaustive = true;
      std::vector<std::size_t> set(s);
      std::iota(set.begin(), set.end(), 0);
      while (tester.test(set)) {
        std::size_t i = s;
        while (i > 0 && set[i - 1] == t - s + i - 1) --i;
        if (i == 0) break;
        ++set[i - 1];
        for (std::size_t j = i; j < s; ++j) set[j] = set[j - 1] + 1;
      }
    } else {
      bool ok = true;
      for (std::size_t start = 0; ok && start < t; ++start) {
        std::vector<std::size_t> set;
        for (std::size_t j = 0; j < s; ++j) set.push_back((start + j) % t);
        std::sort(set.begin(), set.end());
        ok = tester.test(set);
      }
      std::vector<std::size_t> noise, other;
      for (std::size_t j = 0; j < t; ++j) (qs[j].pure_noise() ? noise : other).push_back(j);
      if (ok) {
        // As many pure-noise positions as fit, topped up from the front.
        std::vector<std::size_t> base(noise.begin(), noise.begin() + static_cast<std::ptrdiff_t>(std::min(s, noise.size())));
        for (std::size_t j = 0; base.size() < s; ++j) base.push_back(other[j]);
        std::sort(base.begin(), base.end());
        ok = tester.test(base);
        for (std::size_t drop = 0; ok && drop < base.size(); ++drop) {
          for (std::size_t add = 0; ok && add < t; ++add) {
            if (std::binary_search(base.begin(), base.end(), add)) continue;
            auto set = base;
            set[drop] = add;
            std::sort(set.begin(), set.end());
            ok = tester.test(set);
          }
        }
      }
      Rng rng(derive_seed(plan.seed, kSampleStream, static_cast<std::uint64_t>(db)));
      std::vector<std::size_t> all(t);
      std::iota(all.begin(), all.end(), 0);
      for (std::size_t i = 0; ok && i < kRandomObservationSets; ++i) {
        // Partial Fisher-Yates for the first s entries.
        for (std::size_t j = 0; j < s; ++j) std::swap(all[j], all[j + rng.below(t - j)]);
        std::vector<std::size_t> set(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(s));
        std::sort(set.begin(), set.end());
        ok = tester.test(set);
      }
    }
    out.pass = out.pass && rep.pass;
    out.databases.push_back(std::move(rep));
  }
  return out;
}

PrivacyReport audit_privacy(const GroupSequence& g, const EavesdropProfile& mu, std::uint64_t seed) {
  PrivacyReport r;
  std::vector<SignatureCounts> first;
  for (int i = 1; i <= g.messages(); ++i) {
    PlanOptions opts;
    opts.shuffle = false;
    const auto sig = query_signatures(build_plan(g, mu, i, seed, opts));
    ++r.desired_checked;
    if (i == 1) {
      first = sig;
    } else if (auto diff = compare_signatures(first, 1, sig, i); !diff.empty()) {
      r.pass = false;
      r.first_difference = diff;
      return r;
    }
  }
  return r;
}

PrivacyReport audit_privacy(const QueryPlan& plan) {
  PrivacyReport r;
  const auto own = query_signatures(plan);
  // Within a database, each k-subset must occur equally often.
  for (std::size_t n = 0; n < own.size(); ++n) {
    std::map<std::size_t, Count> per_size;
    for (const auto& [sig, count] : own[n]) {
      if (sig.empty()) continue;
      auto [it, inserted] = per_size.emplace(sig.size(), count);
      if (!inserted && it->second != count) {
        r.pass = false;
        r.first_difference = "database " + std::to_string(n + 1) + ": signature " + join(sig) + " occurs " +
                             std::to_string(count) + " times, other " + std::to_string(sig.size()) +
                             "-subsets occur " + std::to_string(it->second) + " times";
        return r;
      }
    }
    for (const auto& [k, count] : per_size) {
      if (static_cast<Count>(own[n].size()) > 0 && count > 0) {
        Count subsets = 0;
        for (const auto& [sig, c] : own[n]) subsets += sig.size() == k;
        if (subsets != binomial(plan.M, static_cast<int>(k))) {
          r.pass = false;
          r.first_difference = "database " + std::to_string(n + 1) + ": only " + std::to_string(subsets) + " of " +
                               std::to_string(binomial(plan.M, static_cast<int>(k))) + " " + std::to_string(k) +
                               "-subsets are downloaded";
          return r;
        }
      }
    }
  }
  r.desired_checked = 1;
  for (int i = 1; i <= plan.M; ++i) {
    if (i == plan.desired) continue;
    PlanOptions opts;
    opts.field_q = plan.field_q;
    const auto other = query_signatures(build_plan(plan.sequence, plan.mu, i, plan.seed, opts));
    ++r.desired_checked;
    if (auto diff = compare_signatures(own, plan.desired, other, i); !diff.empty()) {
      r.pass = false;
      r.first_difference = diff;
      return r;
    }
  }
  return r;
}

DecodabilityReport audit_decodability(const QueryPlan& plan, std::size_t trials, std::uint64_t seed) {
  DecodabilityReport r;
  const PrimeField field(plan.field_q);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    ++r.trials;
    const std::uint64_t s = derive_seed(seed, kTrialStream, trial);
    const MessageStore store = random_store(plan.M, plan.message_length(), field, s);
    try {
      const Transcript tr = run_retrieval(plan, store, splitmix64(s));
      if (tr.correct) {
        ++r.successes;
        continue;
      }
      const auto& w = store.messages[static_cast<std::size_t>(plan.desired - 1)];
      std::size_t slot = 0;
      while (slot < w.size() && tr.decoded[slot] == w[slot]) ++slot;
      std::string where;
      for (std::size_t n = 0; n < plan.queries.size() && where.empty(); ++n) {
        for (std::size_t j = 0; j < plan.queries[n].size(); ++j) {
          for (const auto& t : plan.queries[n][j].terms) {
            if (t.message == plan.desired && t.slot == slot) {
              where = " (database " + std::to_string(n + 1) + " position " + std::to_string(j) + ")";
            }
          }
        }
      }
      if (r.first_failure.empty()) {
        r.first_failure = "trial " + std::to_string(trial) + ": desired symbol " + std::to_string(slot) +
                          " decoded wrongly" + where;
      }
    } catch (const DecodeError& e) {
      if (r.first_failure.empty()) r.first_failure = "trial " + std::to_string(trial) + ": " + e.what();
    }
  }
  r.pass = r.successes == r.trials;
  return r;
}

Json to_json(const SecurityReport& r) {
  Json dbs = Json::array();
  for (const auto& d : r.databases) {
    dbs.push_back({{"database", d.database},
                   {"answer_length", d.answer_length},
                   {"observed", d.observed},
                   {"key_dimension", d.key_dimension},
                   {"tested_sets", d.tested_sets},
                   {"exhaustive", d.exhaustive},
                   {"verdict", d.pass ? "PASS" : "FAIL"},
                   {"failing_set", d.failing_set ? Json(*d.failing_set) : Json(nullptr)},
                   {"failing_rank", d.failing_set ? Json(d.failing_rank) : Json(nullptr)}});
  }
  return {{"verdict", r.pass ? "PASS" : "FAIL"}, {"vacuous", r.vacuous}, {"databases", dbs}};
}

Json to_json(const PrivacyReport& r) {
  return {{"verdict", r.pass ? "PASS" : "FAIL"},
          {"desired_checked", r.desired_checked},
          {"first_difference", r.first_difference.empty() ? Json(nullptr) : Json(r.first_difference)}};
}

Json to_json(const DecodabilityReport& r) {
  return {{"verdict", r.pass ? "PASS" : "FAIL"},
          {"trials", r.trials},
          {"successes", r.successes},
          {"first_failure", r.first_failure.empty() ? Json(nullptr) : Json(r.first_failure)}};
}

}  // namespace wtcpir
