#include "wtcpir/plan_io.hpp"

#include <fstream>

#include "wtcpir/errors.hpp"

namespace wtcpir {

namespace {

template <class T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw UsageError(std::string("plan JSON is missing \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw UsageError(std::string("plan JSON field \"") + key + "\" has the wrong type");
  }
}

std::vector<Count> counts_of(const Json& j, const char* key, int expected) {
  auto v = get<std::vector<Count>>(j, key);
  if (static_cast<int>(v.size()) != expected) {
    throw UsageError(std::string("plan JSON field \"") + key + "\" must have " + std::to_string(expected) + " entries");
  }
  return v;
}

}  // namespace

Json plan_to_json(const QueryPlan& plan) {
  Json mu = Json::array();
  for (const auto& m : plan.mu.values()) mu.push_back(to_fraction_string(m));
  Json meta = {{"M", plan.M},
               {"N", plan.N},
               {"q", plan.field_q},
               {"mu", mu},
               {"n", plan.sequence.values()},
               {"nu", plan.dims.repetitions},
               {"t", plan.dims.answer_lengths},
               {"key_len", plan.dims.key_lengths},
               {"desired", plan.desired},
               {"seed", plan.seed}};
  Json dbs = Json::array();
  for (const auto& qs : plan.queries) {
    Json list = Json::array();
    for (const auto& q : qs) {
      Json terms = Json::array();
      for (const auto& t : q.terms) terms.push_back({t.message, t.slot});
      list.push_back({{"terms", terms},
                      {"noise_slot", q.noise_slot},
                      {"rep", q.repetition < 0 ? Json(nullptr) : Json(q.repetition)},
                      {"order", q.order}});
    }
    dbs.push_back({{"queries", list}});
  }
  return {{"version", kPlanFormatVersion}, {"meta", meta}, {"permutations", plan.permutations}, {"databases", dbs}};
}

QueryPlan plan_from_json(const Json& doc) {
  if (get<int>(doc, "version") != kPlanFormatVersion) {
    throw UsageError("unsupported plan format version " + doc.at("version").dump());
  }
  const Json& meta = doc.at("meta");
  const int M = get<int>(meta, "M");
  const int N = get<int>(meta, "N");
  if (M < 1 || N < 1) throw UsageError("plan JSON needs M >= 1 and N >= 1");
  std::vector<Rational> mu;
  for (const auto& s : get<std::vector<std::string>>(meta, "mu")) mu.push_back(parse_rational(s));
  if (static_cast<int>(mu.size()) != N) throw UsageError("plan JSON mu must have N entries");
  GroupSequence g(M, N, get<std::vector<int>>(meta, "n"));
  EavesdropProfile profile(std::move(mu));
  PlanDimensions dims = repetition_factor(g, profile);
  // Lengths come from the document so that edited plans load as written.
  dims.repetitions = get<Count>(meta, "nu");
  dims.answer_lengths = counts_of(meta, "t", N);
  dims.key_lengths = counts_of(meta, "key_len", N);
  const int desired = get<int>(meta, "desired");
  if (desired < 1 || desired > M) throw UsageError("plan JSON desired index out of range");
  const Word q = get<Word>(meta, "q");
  PrimeField field_check(q);

  QueryPlan plan{.M = M,
                 .N = N,
                 .field_q = q,
                 .sequence = std::move(g),
                 .mu = std::move(profile),
                 .dims = std::move(dims),
                 .desired = desired,
                 .seed = get<std::uint64_t>(meta, "seed"),
                 .permutations = get<std::vector<std::vector<std::size_t>>>(doc, "permutations"),
                 .queries = {}};
  if (static_cast<int>(plan.permutations.size()) != M) throw UsageError("plan JSON needs one permutation per message");

  const Json& dbs = doc.at("databases");
  if (!dbs.is_array() || static_cast<int>(dbs.size()) != N) throw UsageError("plan JSON needs one entry per database");
  for (int db = 1; db <= N; ++db) {
    std::vector<Query> list;
    const Json& qs = dbs[static_cast<std::size_t>(db - 1)].at("queries");
    if (!qs.is_array()) throw UsageError("plan JSON queries must be an array");
    for (const auto& jq : qs) {
      Query q;
      q.database = db;
      for (const auto& jt : jq.at("terms")) {
        if (!jt.is_array() || jt.size() != 2) throw UsageError("plan JSON terms must be [message, slot] pairs");
        const int m = jt[0].get<int>();
        if (m < 1 || m > M) throw UsageError("plan JSON term names message " + std::to_string(m));
        q.terms.push_back(Term{m, jt[1].get<std::size_t>()});
      }
      q.noise_slot = get<std::size_t>(jq, "noise_slot");
      q.repetition = jq.contains("rep") && !jq.at("rep").is_null() ? jq.at("rep").get<int>() : -1;
      q.order = jq.contains("order") ? jq.at("order").get<std::size_t>() : list.size();
      list.push_back(std::move(q));
    }
    plan.queries.push_back(std::move(list));
  }
  return plan;
}

void save_plan(const QueryPlan& plan, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << plan_to_json(plan).dump(2) << "\n";
}

QueryPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("cannot parse " + path + ": " + e.what());
  }
  try {
    return plan_from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("malformed plan " + path + ": " + e.what());
  }
}

}  // namespace wtcpir
