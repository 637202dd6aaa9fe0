#include "wtcpir/plan.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "wtcpir/errors.hpp"
#include "wtcpir/random.hpp"

namespace wtcpir {

namespace {

constexpr std::uint64_t kPermutationStream = 1;
constexpr std::uint64_t kShuffleStream = 2;

// Lexicographic k-subsets of {1..M}.
std::vector<std::vector<int>> subsets(int M, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  std::iota(cur.begin(), cur.end(), 1);
  if (k > M || k < 1) return out;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == M - k + i + 1) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

// One complete stage: sums[u] is the query for the u-th k-subset.
struct Stage {
  std::vector<std::vector<Term>> sums;
};

class Builder {
 public:
  Builder(const QueryPlan& plan) : plan_(plan), counters_(static_cast<std::size_t>(plan.M), 0) {
    for (int k = 1; k <= plan.M; ++k) subsets_.push_back(subsets(plan.M, k));
  }

  std::vector<std::vector<Query>> run() {
    std::vector<std::vector<Query>> queries(static_cast<std::size_t>(plan_.N));
    const StageCounts y = stage_counts(plan_.sequence);
    for (int rep = 0; rep < plan_.dims.repetitions; ++rep) {
      // stages[n-1][k-1] for this repetition.
      std::vector<std::vector<std::vector<Stage>>> stages(
          static_cast<std::size_t>(plan_.N), std::vector<std::vector<Stage>>(static_cast<std::size_t>(plan_.M)));
      for (int k = 1; k <= plan_.M; ++k) {
        for (int db = 1; db <= plan_.N; ++db) {
          const int l = plan_.sequence.group_of_database(db);
          if (l < 0 || k < l + 1) continue;
          auto built = round_at(db, l, k, stages);
          if (static_cast<Count>(built.size()) != y.at(l, k)) {
            throw ConstructionError("built " + std::to_string(built.size()) + " stages in round " +
                                        std::to_string(k) + " at database " + std::to_string(db) + " (group " +
                                        std::to_string(l) + "), expected " + std::to_string(y.at(l, k)),
                                    k, l, db);
          }
          for (const auto& st : built) {
            for (const auto& sum : st.sums) {
              Query q;
              q.database = db;
              q.terms = sum;
              q.repetition = rep;
              queries[static_cast<std::size_t>(db - 1)].push_back(std::move(q));
            }
          }
          stages[static_cast<std::size_t>(db - 1)][static_cast<std::size_t>(k - 1)] = std::move(built);
        }
      }
    }
    const Count used = counters_[static_cast<std::size_t>(plan_.desired - 1)];
    if (used != plan_.dims.message_length()) {
      throw ConstructionError("plan uses " + std::to_string(used) + " desired symbols, expected " +
                                  std::to_string(plan_.dims.message_length()),
                              plan_.M, -1, -1);
    }
    return queries;
  }

 private:
  Term fresh(int m) {
    auto& c = counters_[static_cast<std::size_t>(m - 1)];
    const auto& perm = plan_.permutations[static_cast<std::size_t>(m - 1)];
    if (static_cast<std::size_t>(c) >= perm.size()) {
      throw ConstructionError("message " + std::to_string(m) + " ran out of symbols", -1, -1, -1);
    }
    return Term{m, perm[static_cast<std::size_t>(c++)]};
  }

  const std::vector<std::vector<int>>& of_size(int k) const { return subsets_[static_cast<std::size_t>(k - 1)]; }

  std::size_t subset_index(const std::vector<int>& s) const {
    const auto& all = of_size(static_cast<int>(s.size()));
    return static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), s) - all.begin());
  }

  // Builds a stage whose desired-bearing sums borrow side information from
  // `side(U \ {i})`, and whose other sums are fresh.
  template <class SideFn>
  Stage make_stage(int k, SideFn&& side) {
    Stage st;
    const int i = plan_.desired;
    for (const auto& u : of_size(k)) {
      std::vector<Term> sum;
      if (std::find(u.begin(), u.end(), i) != u.end()) {
        std::vector<int> rest;
        for (int m : u) {
          if (m != i) rest.push_back(m);
        }
        sum = side(rest);
        sum.push_back(fresh(i));
      } else {
        for (int m : u) sum.push_back(fresh(m));
      }
      std::sort(sum.begin(), sum.end());
      st.sums.push_back(std::move(sum));
    }
    return st;
  }

  std::vector<Stage> round_at(int db, int l, int k, const std::vector<std::vector<std::vector<Stage>>>& stages) {
    std::vector<Stage> out;
    if (k == 1) {
      for (Count s = 0; s < plan_.sequence.seed_stages(); ++s) {
        out.push_back(make_stage(1, [](const std::vector<int>&) { return std::vector<Term>{}; }));
      }
      return out;
    }
    // Every previous-round stage of every other database, used once here.
    for (int other = 1; other <= plan_.N; ++other) {
      if (other == db) continue;
      for (const Stage& src : stages[static_cast<std::size_t>(other - 1)][static_cast<std::size_t>(k - 2)]) {
        out.push_back(make_stage(k, [&](const std::vector<int>& rest) { return src.sums[subset_index(rest)]; }));
      }
    }
    if (l >= 2 && k == l + 1) {
      // Extra stages whose side information is assembled from the round-1
      // singles of group 0, consumed first-in first-out per message.
      std::vector<std::deque<Term>> singles(static_cast<std::size_t>(plan_.M));
      for (int src_db = 1; src_db <= plan_.sequence[0]; ++src_db) {
        for (const Stage& st : stages[static_cast<std::size_t>(src_db - 1)][0]) {
          for (int m = 1; m <= plan_.M; ++m) {
            if (m != plan_.desired) singles[static_cast<std::size_t>(m - 1)].push_back(st.sums[static_cast<std::size_t>(m - 1)][0]);
          }
        }
      }
      const Count extra = plan_.sequence[0] * plan_.sequence.xi(l);
      for (Count c = 0; c < extra; ++c) {
        out.push_back(make_stage(k, [&](const std::vector<int>& rest) {
          std::vector<Term> side;
          for (int m : rest) {
            auto& q = singles[static_cast<std::size_t>(m - 1)];
            if (q.empty()) {
              throw ConstructionError("ran out of group-0 singles of message " + std::to_string(m) + " in round " +
                                          std::to_string(k) + " at database " + std::to_string(db),
                                      k, l, db);
            }
            side.push_back(q.front());
            q.pop_front();
          }
          return side;
        }));
      }
    }
    return out;
  }

  const QueryPlan& plan_;
  std::vector<Count> counters_;
  std::vector<std::vector<std::vector<int>>> subsets_;
};

std::string letters(int message) {
  if (message >= 1 && message <= 26) return std::string(1, static_cast<char>('a' + message - 1));
  return "m" + std::to_string(message) + "_";
}

}  // namespace

std::string symbol_label(int message, std::size_t index) { return letters(message) + std::to_string(index); }

std::string noise_label(int database, std::size_t index) {
  static const std::string names = "uvwxyz";
  const std::string stem = database >= 1 && database <= 6 ? std::string(1, names[static_cast<std::size_t>(database - 1)])
                                                         : "n" + std::to_string(database) + "_";
  return stem + std::to_string(index);
}

QueryPlan build_plan(const GroupSequence& g, const EavesdropProfile& mu, int desired, std::uint64_t seed,
                     const PlanOptions& options) {
  if (desired < 1 || desired > g.messages()) {
    throw UsageError("desired message " + std::to_string(desired) + " outside 1.." + std::to_string(g.messages()));
  }
  PlanDimensions dims = repetition_factor(g, mu);
  const Count total = dims.total_download();
  if (total < 0 || static_cast<std::size_t>(total) > options.max_total_queries) {
    throw UsageError("plan would need " + std::to_string(total) + " downloads, above the limit of " +
                     std::to_string(options.max_total_queries));
  }
  const Count max_t = *std::max_element(dims.answer_lengths.begin(), dims.answer_lengths.end());
  const Word q = options.field_q ? *options.field_q : next_prime_at_least(static_cast<Word>(max_t) + 1);
  const PrimeField field(q);
  if (static_cast<Word>(max_t) >= field.modulus()) {
    throw FieldTooSmallError("field size " + std::to_string(q) + " must exceed the longest answer (" +
                             std::to_string(max_t) + " symbols)");
  }

  QueryPlan plan{.M = g.messages(),
                 .N = g.databases(),
                 .field_q = q,
                 .sequence = g,
                 .mu = mu,
                 .dims = std::move(dims),
                 .desired = desired,
                 .seed = seed,
                 .permutations = {},
                 .queries = {}};
  const std::size_t L = plan.message_length();
  for (int m = 1; m <= plan.M; ++m) {
    std::vector<std::size_t> perm(L);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(derive_seed(seed, kPermutationStream, static_cast<std::uint64_t>(m)));
    rng.shuffle(perm);
    plan.permutations.push_back(std::move(perm));
  }

  plan.queries = Builder(plan).run();
  for (int db = 1; db <= plan.N; ++db) {
    auto& qs = plan.queries[static_cast<std::size_t>(db - 1)];
    for (Count j = 0; j < plan.dims.key_lengths[static_cast<std::size_t>(db - 1)]; ++j) {
      Query noise;
      noise.database = db;
      qs.push_back(std::move(noise));
    }
    for (std::size_t j = 0; j < qs.size(); ++j) qs[j].order = j;
    if (options.shuffle) {
      Rng rng(derive_seed(seed, kShuffleStream, static_cast<std::uint64_t>(db)));
      rng.shuffle(qs);
    }
    for (std::size_t j = 0; j < qs.size(); ++j) qs[j].noise_slot = j;
  }
  return plan;
}

std::string plan_to_table(const QueryPlan& plan) {
  std::vector<std::vector<std::size_t>> inverse(plan.permutations.size());
  for (std::size_t m = 0; m < plan.permutations.size(); ++m) {
    inverse[m].assign(plan.permutations[m].size(), 0);
    for (std::size_t j = 0; j < plan.permutations[m].size(); ++j) inverse[m][plan.permutations[m][j]] = j;
  }
  auto logical = [&](const Term& t) {
    const auto& inv = inverse[static_cast<std::size_t>(t.message - 1)];
    return t.slot < inv.size() ? inv[t.slot] : t.slot;
  };

  std::vector<int> columns;
  for (int db = 1; db <= plan.N; ++db) {
    if (!plan.queries[static_cast<std::size_t>(db - 1)].empty()) columns.push_back(db);
  }
  // cells[column][rep] = rendered meaningful queries in construction order.
  const int reps = static_cast<int>(plan.dims.repetitions);
  std::vector<std::vector<std::vector<std::string>>> cells(columns.size(),
                                                           std::vector<std::vector<std::string>>(static_cast<std::size_t>(reps)));
  std::vector<std::vector<std::string>> noise(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    std::vector<const Query*> ordered;
    for (const auto& q : plan.queries[static_cast<std::size_t>(columns[c] - 1)]) ordered.push_back(&q);
    std::stable_sort(ordered.begin(), ordered.end(), [](const Query* a, const Query* b) { return a->order < b->order; });
    for (const Query* q : ordered) {
      const std::string u = noise_label(columns[c], q->noise_slot + 1);
      if (q->pure_noise() || q->repetition < 0 || q->repetition >= reps) {
        noise[c].push_back(q->pure_noise() ? u : "?" + u);
        continue;
      }
      std::string cell;
      for (const auto& t : q->terms) cell += symbol_label(t.message, logical(t) + 1) + "+";
      cells[c][static_cast<std::size_t>(q->repetition)].push_back(cell + u);
    }
  }

  std::ostringstream out;
  out << "| Rep |";
  for (int db : columns) out << " Database " << db << " |";
  out << "\n|---|";
  for (std::size_t c = 0; c < columns.size(); ++c) out << "---|";
  out << "\n";
  for (int r = 0; r < reps; ++r) {
    std::size_t rows = 0;
    for (std::size_t c = 0; c < columns.size(); ++c) rows = std::max(rows, cells[c][static_cast<std::size_t>(r)].size());
    for (std::size_t i = 0; i < rows; ++i) {
      out << "| " << (i == 0 ? std::to_string(r + 1) : "") << " |";
      for (std::size_t c = 0; c < columns.size(); ++c) {
        const auto& col = cells[c][static_cast<std::size_t>(r)];
        out << " " << (i < col.size() ? col[i] : "") << " |";
      }
      out << "\n";
    }
  }
  bool any_noise = false;
  for (const auto& n : noise) any_noise = any_noise || !n.empty();
  if (any_noise) {
    out << "| noise |";
    for (const auto& n : noise) {
      std::string joined;
      for (std::size_t i = 0; i < n.size(); ++i) joined += (i ? ", " : "") + n[i];
      out << " " << joined << " |";
    }
    out << "\n";
  }
  return out.str();
}

PlanStats plan_stats(const QueryPlan& plan) {
  PlanStats s;
  Count total = 0;
  for (int db = 1; db <= plan.N; ++db) {
    const auto& qs = plan.queries[static_cast<std::size_t>(db - 1)];
    s.answer_lengths.push_back(static_cast<Count>(qs.size()));
    total += static_cast<Count>(qs.size());
    std::vector<Count> by_k(static_cast<std::size_t>(plan.M + 1), 0);
    Count noise = 0;
    for (const auto& q : qs) {
      if (q.pure_noise()) {
        ++noise;
        continue;
      }
      if (q.terms.size() <= static_cast<std::size_t>(plan.M)) ++by_k[q.terms.size()];
      for (const auto& t : q.terms) s.desired_symbols += t.message == plan.desired;
    }
    for (int k = 1; k <= plan.M; ++k) by_k[static_cast<std::size_t>(k)] /= binomial(plan.M, k);
    s.pure_noise.push_back(noise);
    s.stages.push_back(std::move(by_k));
  }
  s.rate = total == 0 ? Rational(0) : Rational(s.desired_symbols) / total;
  return s;
}

std::vector<SignatureCounts> query_signatures(const QueryPlan& plan) {
  std::vector<SignatureCounts> out;
  for (const auto& qs : plan.queries) {
    SignatureCounts counts;
    for (const auto& q : qs) {
      std::vector<int> sig;
      for (const auto& t : q.terms) sig.push_back(t.message);
      std::sort(sig.begin(), sig.end());
      ++counts[sig];
    }
    out.push_back(std::move(counts));
  }
  return out;
}

std::vector<std::string> check_plan_structure(const QueryPlan& plan) {
  std::vector<std::string> issues;
  auto add = [&](std::string s) { issues.push_back(std::move(s)); };
  const std::size_t L = plan.message_length();
  if (plan.queries.size() != static_cast<std::size_t>(plan.N)) {
    add("plan lists " + std::to_string(plan.queries.size()) + " databases, expected " + std::to_string(plan.N));
    return issues;
  }
  const StageCounts y = stage_counts(plan.sequence);

  // Sums of undesired symbols and undesired singles available at each database.
  std::vector<std::set<std::vector<Term>>> undesired_sums(static_cast<std::size_t>(plan.N));
  std::vector<std::set<Term>> undesired_singles(static_cast<std::size_t>(plan.N));
  for (int db = 1; db <= plan.N; ++db) {
    for (const auto& q : plan.queries[static_cast<std::size_t>(db - 1)]) {
      const bool desired = std::any_of(q.terms.begin(), q.terms.end(), [&](const Term& t) { return t.message == plan.desired; });
      if (q.pure_noise() || desired) continue;
      undesired_sums[static_cast<std::size_t>(db - 1)].insert(q.terms);
      if (q.terms.size() == 1) undesired_singles[static_cast<std::size_t>(db - 1)].insert(q.terms[0]);
    }
  }

  std::set<std::size_t> desired_slots;
  std::size_t desired_total = 0;
  for (int db = 1; db <= plan.N; ++db) {
    const auto& qs = plan.queries[static_cast<std::size_t>(db - 1)];
    const std::size_t i = static_cast<std::size_t>(db - 1);
    const std::string where = "database " + std::to_string(db);
    if (static_cast<Count>(qs.size()) != plan.dims.answer_lengths[i]) {
      add(where + ": " + std::to_string(qs.size()) + " queries, expected t = " + std::to_string(plan.dims.answer_lengths[i]));
    }
    std::vector<bool> noise_used(qs.size(), false);
    std::set<Term> seen;
    Count pure = 0;
    std::map<std::vector<int>, Count> per_subset;
    for (std::size_t j = 0; j < qs.size(); ++j) {
      const Query& q = qs[j];
      const std::string at = where + " position " + std::to_string(j);
      if (q.noise_slot >= qs.size() || noise_used[q.noise_slot]) {
        add(at + ": noise slot " + std::to_string(q.noise_slot) + " is out of range or reused");
      } else {
        noise_used[q.noise_slot] = true;
      }
      if (q.pure_noise()) {
        ++pure;
        continue;
      }
      std::vector<int> sig;
      const Term* desired_term = nullptr;
      for (const auto& t : q.terms) {
        if (t.message < 1 || t.message > plan.M || t.slot >= L) {
          add(at + ": term (" + std::to_string(t.message) + ", " + std::to_string(t.slot) + ") out of range");
          continue;
        }
        sig.push_back(t.message);
        if (!seen.insert(t).second) {
          add(at + ": symbol " + std::to_string(t.slot) + " of message " + std::to_string(t.message) +
              " appears twice at this database");
        }
        if (t.message == plan.desired) desired_term = &t;
      }
      if (std::adjacent_find(sig.begin(), sig.end()) != sig.end() || !std::is_sorted(sig.begin(), sig.end())) {
        add(at + ": terms must name distinct messages in increasing order");
      }
      ++per_subset[sig];
      if (!desired_term) continue;
      ++desired_total;
      if (!desired_slots.insert(desired_term->slot).second) {
        add(at + ": desired symbol " + std::to_string(desired_term->slot) + " is downloaded more than once");
      }
      std::vector<Term> side;
      for (const auto& t : q.terms) {
        if (t.message != plan.desired) side.push_back(t);
      }
      if (side.empty()) continue;
      bool closed = false;
      for (int other = 1; other <= plan.N && !closed; ++other) {
        if (other != db && undesired_sums[static_cast<std::size_t>(other - 1)].count(side)) closed = true;
      }
      if (!closed) {
        closed = std::all_of(side.begin(), side.end(), [&](const Term& t) {
          for (int other = 1; other <= plan.N; ++other) {
            if (other != db && undesired_singles[static_cast<std::size_t>(other - 1)].count(t)) return true;
          }
          return false;
        });
      }
      if (!closed) add(at + ": side information is not available from any other database");
    }
    if (pure != plan.dims.key_lengths[i]) {
      add(where + ": " + std::to_string(pure) + " pure-noise downloads, expected " + std::to_string(plan.dims.key_lengths[i]));
    }
    const int l = plan.sequence.group_of_database(db);
    for (int k = 1; k <= plan.M; ++k) {
      const Count expected = l < 0 ? 0 : plan.dims.repetitions * y.at(l, k);
      for (const auto& u : subsets(plan.M, k)) {
        const auto it = per_subset.find(u);
        const Count got = it == per_subset.end() ? 0 : it->second;
        if (got != expected) {
          std::string name;
          for (int m : u) name += letters(m);
          add(where + ": message set {" + name + "} occurs " + std::to_string(got) + " times, expected " +
              std::to_string(expected));
        }
      }
    }
  }
  if (desired_total != L) {
    add("plan downloads " + std::to_string(desired_total) + " desired symbols, expected L = " + std::to_string(L));
  }
  return issues;
}

}  // namespace wtcpir
