#include "wtcpir/simulator.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>

#include "wtcpir/errors.hpp"
#include "wtcpir/mds.hpp"
#include "wtcpir/random.hpp"

namespace wtcpir {

namespace {

constexpr std::uint64_t kStoreStream = 11;
constexpr std::uint64_t kKeyStream = 12;
constexpr std::uint64_t kViewStream = 13;

void require_plan_store(const QueryPlan& plan, const MessageStore& store) {
  if (store.field_q != plan.field_q) {
    throw UsageError("message store is over GF(" + std::to_string(store.field_q) + ") but the plan uses GF(" +
                     std::to_string(plan.field_q) + ")");
  }
  if (static_cast<int>(store.messages.size()) != plan.M) {
    throw UsageError("message store holds " + std::to_string(store.messages.size()) + " messages, plan needs " +
                     std::to_string(plan.M));
  }
  for (const auto& w : store.messages) {
    if (w.size() != plan.message_length()) {
      throw UsageError("message length " + std::to_string(w.size()) + " does not match L = " +
                       std::to_string(plan.message_length()));
    }
  }
}

std::size_t key_length(const QueryPlan& plan, int db) {
  const Count k = plan.dims.key_lengths.at(static_cast<std::size_t>(db - 1));
  if (k < 0) throw UsageError("negative key length at database " + std::to_string(db));
  return static_cast<std::size_t>(k);
}

std::size_t observed_count(const QueryPlan& plan, int db) {
  const std::size_t t = plan.queries[static_cast<std::size_t>(db - 1)].size();
  const Rational obs = plan.mu.of_database(db) * static_cast<Count>(t);
  if (denominator_of(obs) != 1) {
    throw UsageError("mu_" + std::to_string(db) + " * t_" + std::to_string(db) + " is not an integer");
  }
  return static_cast<std::size_t>(to_int64(obs));
}

}  // namespace

MessageStore random_store(int M, std::size_t L, const PrimeField& field, std::uint64_t seed) {
  MessageStore s{.field_q = field.modulus(), .messages = {}};
  for (int m = 1; m <= M; ++m) {
    Rng rng(derive_seed(seed, kStoreStream, static_cast<std::uint64_t>(m)));
    std::vector<FieldElement> w;
    w.reserve(L);
    for (std::size_t j = 0; j < L; ++j) w.push_back(field.element(rng.below(field.modulus())));
    s.messages.push_back(std::move(w));
  }
  return s;
}

MessageStore zero_store(int M, std::size_t L, const PrimeField& field) {
  return MessageStore{.field_q = field.modulus(),
                      .messages = std::vector<std::vector<FieldElement>>(static_cast<std::size_t>(M),
                                                                         std::vector<FieldElement>(L, field.zero()))};
}

KeyMaterial generate_keys(const QueryPlan& plan, std::uint64_t key_seed) {
  const PrimeField field(plan.field_q);
  KeyMaterial km;
  for (int db = 1; db <= plan.N; ++db) {
    const std::size_t t = plan.queries[static_cast<std::size_t>(db - 1)].size();
    const std::size_t k = key_length(plan, db);
    Rng rng(derive_seed(key_seed, kKeyStream, static_cast<std::uint64_t>(db)));
    std::vector<FieldElement> key;
    for (std::size_t j = 0; j < k; ++j) key.push_back(field.element(rng.below(field.modulus())));
    const MdsCode code = mds_generator(t, k, field);
    km.noise.push_back(mds_encode(code, key));
    km.keys.push_back(std::move(key));
  }
  return km;
}

KeyMaterial zero_keys(const QueryPlan& plan) {
  const PrimeField field(plan.field_q);
  KeyMaterial km;
  for (int db = 1; db <= plan.N; ++db) {
    km.keys.emplace_back(key_length(plan, db), field.zero());
    km.noise.emplace_back(plan.queries[static_cast<std::size_t>(db - 1)].size(), field.zero());
  }
  return km;
}

std::vector<std::vector<FieldElement>> compute_answers(const QueryPlan& plan, const MessageStore& store,
                                                       const KeyMaterial& keys) {
  require_plan_store(plan, store);
  const PrimeField field(plan.field_q);
  std::vector<std::vector<FieldElement>> answers;
  for (int db = 1; db <= plan.N; ++db) {
    const auto& qs = plan.queries[static_cast<std::size_t>(db - 1)];
    const auto& u = keys.noise.at(static_cast<std::size_t>(db - 1));
    std::vector<FieldElement> a;
    a.reserve(qs.size());
    for (const auto& q : qs) {
      if (q.noise_slot >= u.size()) throw UsageError("noise slot out of range at database " + std::to_string(db));
      FieldElement v = u[q.noise_slot];
      for (const auto& t : q.terms) {
        const auto& w = store.messages.at(static_cast<std::size_t>(t.message - 1));
        if (t.slot >= w.size()) throw UsageError("symbol slot out of range at database " + std::to_string(db));
        v += w[t.slot];
      }
      a.push_back(v);
    }
    answers.push_back(std::move(a));
  }
  return answers;
}

std::vector<FieldElement> decode(const QueryPlan& plan, const std::vector<std::vector<FieldElement>>& answers) {
  const PrimeField field(plan.field_q);
  if (answers.size() != static_cast<std::size_t>(plan.N)) throw UsageError("need one answer string per database");

  // Plain sums after the noise has been removed, per database and position.
  std::vector<std::vector<FieldElement>> plain;
  for (int db = 1; db <= plan.N; ++db) {
    const auto& qs = plan.queries[static_cast<std::size_t>(db - 1)];
    const auto& a = answers[static_cast<std::size_t>(db - 1)];
    if (a.size() != qs.size()) {
      throw UsageError("database " + std::to_string(db) + " returned " + std::to_string(a.size()) +
                       " symbols, plan expects " + std::to_string(qs.size()));
    }
    const std::size_t k = key_length(plan, db);
    std::vector<std::size_t> slots;
    std::vector<FieldElement> values;
    for (std::size_t j = 0; j < qs.size(); ++j) {
      if (qs[j].pure_noise()) {
        slots.push_back(qs[j].noise_slot);
        values.push_back(a[j]);
      }
    }
    if (slots.size() < k) {
      throw DecodeError("database " + std::to_string(db) + " has " + std::to_string(slots.size()) +
                            " pure-noise downloads but the key has " + std::to_string(k) + " symbols",
                        db, qs.size());
    }
    slots.resize(k);
    values.resize(k, field.zero());
    const MdsCode code = mds_generator(qs.size(), k, field);
    std::vector<FieldElement> u;
    try {
      u = code.encode(code.recover_key(slots, values));
    } catch (const DomainError& e) {
      throw DecodeError(std::string("noise interpolation failed: ") + e.what(), db, qs.size());
    }
    std::vector<FieldElement> p;
    for (std::size_t j = 0; j < qs.size(); ++j) p.push_back(a[j] - u.at(qs[j].noise_slot));
    plain.push_back(std::move(p));
  }

  // Undesired sums and singles known to the user, from any database.
  std::map<std::vector<Term>, FieldElement> sums;
  std::map<Term, FieldElement> singles;
  auto has_desired = [&](const Query& q) {
    return std::any_of(q.terms.begin(), q.terms.end(), [&](const Term& t) { return t.message == plan.desired; });
  };
  for (int db = 1; db <= plan.N; ++db) {
    const auto& qs = plan.queries[static_cast<std::size_t>(db - 1)];
    for (std::size_t j = 0; j < qs.size(); ++j) {
      if (qs[j].pure_noise() || has_desired(qs[j])) continue;
      const FieldElement& v = plain[static_cast<std::size_t>(db - 1)][j];
      sums.emplace(qs[j].terms, v);
      if (qs[j].terms.size() == 1) singles.emplace(qs[j].terms[0], v);
    }
  }

  const std::size_t L = plan.message_length();
  std::vector<std::optional<FieldElement>> out(L);
  for (int db = 1; db <= plan.N; ++db) {
    const auto& qs = plan.queries[static_cast<std::size_t>(db - 1)];
    for (std::size_t j = 0; j < qs.size(); ++j) {
      if (!has_desired(qs[j])) continue;
      std::vector<Term> side;
      std::size_t slot = 0;
      for (const auto& t : qs[j].terms) {
        if (t.message == plan.desired) {
          slot = t.slot;
        } else {
          side.push_back(t);
        }
      }
      FieldElement known = field.zero();
      if (!side.empty()) {
        if (auto it = sums.find(side); it != sums.end()) {
          known = it->second;
        } else {
          for (const auto& t : side) {
            auto s = singles.find(t);
            if (s == singles.end()) {
              throw DecodeError("side information for database " + std::to_string(db) + " position " +
                                    std::to_string(j) + " was never downloaded",
                                db, j);
            }
            known += s->second;
          }
        }
      }
      if (slot >= L) throw DecodeError("desired slot out of range", db, j);
      out[slot] = plain[static_cast<std::size_t>(db - 1)][j] - known;
    }
  }
  std::vector<FieldElement> decoded;
  decoded.reserve(L);
  for (std::size_t s = 0; s < L; ++s) {
    if (!out[s]) throw DecodeError("desired symbol " + std::to_string(s) + " is never downloaded", -1, s);
    decoded.push_back(*out[s]);
  }
  return decoded;
}

Transcript run_retrieval(const QueryPlan& plan, const MessageStore& store, const KeyMaterial& keys,
                         std::uint64_t view_seed) {
  Transcript tr;
  tr.answers = compute_answers(plan, store, keys);
  for (int db = 1; db <= plan.N; ++db) {
    const std::size_t t = tr.answers[static_cast<std::size_t>(db - 1)].size();
    std::vector<std::size_t> all(t);
    std::iota(all.begin(), all.end(), 0);
    Rng rng(derive_seed(view_seed, kViewStream, static_cast<std::uint64_t>(db)));
    rng.shuffle(all);
    all.resize(observed_count(plan, db));
    std::sort(all.begin(), all.end());
    std::vector<FieldElement> seen;
    for (std::size_t p : all) seen.push_back(tr.answers[static_cast<std::size_t>(db - 1)][p]);
    tr.eavesdropper.positions.push_back(std::move(all));
    tr.eavesdropper.values.push_back(std::move(seen));
  }
  tr.decoded = decode(plan, tr.answers);
  tr.correct = tr.decoded == store.messages[static_cast<std::size_t>(plan.desired - 1)];
  return tr;
}

Transcript run_retrieval(const QueryPlan& plan, const MessageStore& store, std::uint64_t key_seed) {
  require_plan_store(plan, store);
  return run_retrieval(plan, store, generate_keys(plan, key_seed), key_seed);
}

Json transcript_to_json(const Transcript& transcript) {
  auto values = [](const std::vector<FieldElement>& v) {
    Json a = Json::array();
    for (const auto& e : v) a.push_back(e.value());
    return a;
  };
  Json answers = Json::array();
  for (const auto& a : transcript.answers) answers.push_back(values(a));
  Json view = Json::array();
  for (std::size_t n = 0; n < transcript.eavesdropper.positions.size(); ++n) {
    view.push_back({{"positions", transcript.eavesdropper.positions[n]},
                    {"values", values(transcript.eavesdropper.values[n])}});
  }
  return {{"version", kPlanFormatVersion},
          {"answers", answers},
          {"decoded", values(transcript.decoded)},
          {"eavesdropper", view},
          {"correct", transcript.correct}};
}

}  // namespace wtcpir
