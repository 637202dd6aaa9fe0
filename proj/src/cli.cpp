#include "wtcpir/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <thread>

#include "wtcpir/audit.hpp"
#include "wtcpir/bounds.hpp"
#include "wtcpir/errors.hpp"
#include "wtcpir/plan.hpp"
#include "wtcpir/plan_io.hpp"
#include "wtcpir/rates.hpp"
#include "wtcpir/simulator.hpp"

namespace wtcpir::cli {

namespace {

constexpr int kReportVersion = 1;

struct Config {
  int M = 0;
  int N = 0;
  std::string mu_text;
  bool sort_mu = false;
  std::optional<Word> field_q;
  std::uint64_t seed = 1;
  std::optional<std::size_t> budget;
  std::string format = "table";
  std::string out_path;
  std::string n_text;
  int desired = 1;
  std::string plan_path;
  std::size_t trials = 100;
  std::string step = "1/20";
  std::string min = "0";
  std::string max = "19/20";
  bool exact = false;
  std::string method = "simplex";
  unsigned threads = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    parts.push_back(item);
  }
  return parts;
}

void require_shape(const Config& c) {
  if (c.M < 1) throw UsageError("-M must be at least 1");
  if (c.N < 1) throw UsageError("-N must be at least 1");
}

EavesdropProfile parse_mu(const Config& c) {
  require_shape(c);
  std::vector<Rational> mu;
  if (c.mu_text.empty()) {
    mu.assign(static_cast<std::size_t>(c.N), Rational(0));
  } else {
    for (const auto& part : split(c.mu_text, ',')) mu.push_back(parse_rational(part));
  }
  if (static_cast<int>(mu.size()) != c.N) {
    throw UsageError("--mu lists " + std::to_string(mu.size()) + " values but -N is " + std::to_string(c.N));
  }
  for (const auto& m : mu) {
    if (m < 0 || m >= 1) {
      throw UsageError("eavesdropping ratio " + to_fraction_string(m) +
                       " is outside [0, 1); a fully observed database cannot return anything useful");
    }
  }
  if (!std::is_sorted(mu.begin(), mu.end())) {
    if (!c.sort_mu) throw UsageError("--mu must be non-decreasing; reorder the databases or pass --sort-mu");
    std::sort(mu.begin(), mu.end());
  }
  return EavesdropProfile(std::move(mu));
}

GroupSequence parse_sequence(const Config& c) {
  std::vector<int> n;
  for (const auto& part : split(c.n_text, ',')) {
    try {
      std::size_t used = 0;
      n.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::logic_error&) {
      throw UsageError("--n entry \"" + part + "\" is not an integer");
    }
  }
  return GroupSequence(c.M, c.N, n);
}

std::size_t audit_budget(const Config& c) {
  if (c.budget) return *c.budget;
  if (const char* env = std::getenv("WTCPIR_BUDGET")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
    }
    throw UsageError(std::string("WTCPIR_BUDGET=\"") + env + "\" is not a count");
  }
  return kDefaultAuditBudget;
}

std::string tuple(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

template <class T>
std::string tuple_counts(const std::vector<T>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

std::string tuple_rationals(const std::vector<Rational>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_fraction_string(v[i]);
  return s + ")";
}

Json number(const Rational& r) { return {{"exact", to_fraction_string(r)}, {"decimal", to_decimal_string(r)}}; }

Json rationals(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(to_fraction_string(r));
  return a;
}

void emit(const Config& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path);
  if (!f) throw UsageError("cannot write " + c.out_path);
  f << text;
}

BoundOptions bound_options(const Config& c) {
  BoundOptions o;
  if (c.method == "simplex") {
    o.method = BoundMethod::Simplex;
  } else if (c.method == "vertex") {
    o.method = BoundMethod::VertexEnumeration;
  } else {
    throw UsageError("--method must be simplex or vertex");
  }
  return o;
}

Json header(const char* command, const Config& c, const EavesdropProfile& mu) {
  return {{"version", kReportVersion}, {"command", command}, {"M", c.M}, {"N", c.N}, {"mu", rationals(mu.values())}};
}

int cmd_capacity(const Config& c, std::ostream& out) {
  const EavesdropProfile mu = parse_mu(c);
  const BoundResult ub = upper_bound(c.M, c.N, mu, bound_options(c));
  const SchemeChoice best = best_scheme(c.M, c.N, mu);
  const Rational g = ub.value - best.rate;
  if (c.format == "json") {
    Json active = Json::array();
    for (const auto& s : ub.active_sequences) active.push_back(s);
    Json j = header("capacity", c, mu);
    j["upper_bound"] = number(ub.value);
    j["best_rate"] = number(best.rate);
    j["gap"] = number(g);
    j["argmax_tau"] = rationals(ub.argmax_tau);
    j["best_n"] = best.sequence.values();
    j["best_index"] = best.index;
    j["active_sequences"] = active;
    emit(c, j.dump(2) + "\n", out);
  } else if (c.format == "csv") {
    std::string s = "upper,lower,gap,best_n\n";
    s += to_fraction_string(ub.value) + "," + to_fraction_string(best.rate) + "," + to_fraction_string(g) + ",\"" +
         tuple(best.sequence.values()) + "\"\n";
    emit(c, s, out);
  } else {
    std::ostringstream s;
    s << "upper bound   " << to_fraction_string(ub.value) << "  (" << to_decimal_string(ub.value) << ")\n"
      << "best rate     " << to_fraction_string(best.rate) << "  (" << to_decimal_string(best.rate) << ")\n"
      << "gap           " << to_fraction_string(g) << "  (" << to_decimal_string(g) << ")\n"
      << "argmax tau    " << tuple_rationals(ub.argmax_tau) << "\n"
      << "best n        " << tuple(best.sequence.values()) << "\n";
    emit(c, s.str(), out);
  }
  return kExitOk;
}

int cmd_scheme(const Config& c, std::ostream& out) {
  const EavesdropProfile mu = parse_mu(c);
  const GroupSequence g = c.n_text.empty() ? best_scheme(c.M, c.N, mu).sequence : parse_sequence(c);
  const PlanDimensions d = repetition_factor(g, mu);
  const Rational rate = achievable_rate(g, mu);
  const auto meaningful = traffic_vector(g);
  std::vector<Rational> tau;
  const Count total = d.total_download();
  for (Count t : d.answer_lengths) tau.push_back(total == 0 ? Rational(0) : Rational(t) / total);
  if (c.format == "json") {
    Json j = header("scheme", c, mu);
    j["n"] = g.values();
    j["nu"] = d.repetitions;
    j["t"] = d.answer_lengths;
    j["key_len"] = d.key_lengths;
    j["L"] = d.message_length();
    j["tau"] = rationals(tau);
    j["tau_meaningful"] = rationals(meaningful);
    j["rate"] = number(rate);
    emit(c, j.dump(2) + "\n", out);
  } else {
    std::ostringstream s;
    s << "n             " << tuple(g.values()) << "\n"
      << "nu            " << d.repetitions << "\n"
      << "t             " << tuple_counts(d.answer_lengths) << "\n"
      << "key lengths   " << tuple_counts(d.key_lengths) << "\n"
      << "L             " << d.message_length() << "\n"
      << "tau           " << tuple_rationals(tau) << "\n"
      << "meaningful    " << tuple_rationals(meaningful) << "\n"
      << "rate          " << to_fraction_string(rate) << "  (" << to_decimal_string(rate) << ")\n";
    emit(c, s.str(), out);
  }
  return kExitOk;
}

QueryPlan plan_from_config(const Config& c) {
  const EavesdropProfile mu = parse_mu(c);
  const GroupSequence g = c.n_text.empty() ? best_scheme(c.M, c.N, mu).sequence : parse_sequence(c);
  PlanOptions o;
  o.field_q = c.field_q;
  return build_plan(g, mu, c.desired, c.seed, o);
}

int cmd_plan(const Config& c, std::ostream& out) {
  const QueryPlan plan = plan_from_config(c);
  if (!c.out_path.empty()) {
    save_plan(plan, c.out_path);
    std::ofstream table(c.out_path + ".md");
    if (!table) throw UsageError("cannot write " + c.out_path + ".md");
    table << plan_to_table(plan);
    out << "wrote " << c.out_path << " and " << c.out_path << ".md\n";
  } else if (c.format == "json") {
    out << plan_to_json(plan).dump(2) << "\n";
  } else {
    out << plan_to_table(plan);
  }
  return kExitOk;
}

QueryPlan plan_for_audit(const Config& c) {
  if (!c.plan_path.empty()) return load_plan(c.plan_path);
  return plan_from_config(c);
}

int cmd_simulate(const Config& c, std::ostream& out) {
  const QueryPlan plan = plan_for_audit(c);
  const PrimeField field(plan.field_q);
  const MessageStore store = random_store(plan.M, plan.message_length(), field, c.seed);
  Transcript tr;
  try {
    tr = run_retrieval(plan, store, c.seed + 1);
  } catch (const DecodeError& e) {
    Json j = {{"version", kReportVersion}, {"command", "simulate"}, {"verdict", "FAIL"}, {"error", e.what()},
              {"database", e.database()}, {"position", e.position()}};
    emit(c, j.dump(2) + "\n", out);
    return kExitAuditFail;
  }
  Json j = {{"version", kReportVersion}, {"command", "simulate"}, {"verdict", tr.correct ? "PASS" : "FAIL"}};
  j["transcript"] = transcript_to_json(tr);
  if (c.format == "json" || !c.out_path.empty()) {
    emit(c, j.dump(2) + "\n", out);
  } else {
    out << "decoded " << tr.decoded.size() << " symbols of message " << plan.desired << ": "
        << (tr.correct ? "PASS" : "FAIL") << "\n";
  }
  return tr.correct ? kExitOk : kExitAuditFail;
}

int cmd_audit(const Config& c, std::ostream& out) {
  const QueryPlan plan = plan_for_audit(c);
  const PrivacyReport privacy = audit_privacy(plan);
  const SecurityReport security = audit_security(plan, audit_budget(c));
  const DecodabilityReport decodability = audit_decodability(plan, c.trials, c.seed);
  const bool pass = privacy.pass && security.pass && decodability.pass;
  if (c.format == "json" || !c.out_path.empty()) {
    Json j = {{"version", kReportVersion}, {"command", "audit"}, {"verdict", pass ? "PASS" : "FAIL"}};
    j["privacy"] = to_json(privacy);
    j["security"] = to_json(security);
    j["decodability"] = to_json(decodability);
    emit(c, j.dump(2) + "\n", out);
  } else {
    out << "privacy       " << (privacy.pass ? "PASS" : "FAIL");
    if (!privacy.pass) out << "  " << privacy.first_difference;
    out << "\nsecurity      " << (security.pass ? "PASS" : "FAIL") << (security.vacuous ? "  (nothing observed)" : "")
        << "\n";
    for (const auto& d : security.databases) {
      out << "  database " << d.database << ": " << d.tested_sets << " sets of " << d.observed << " positions, "
          << (d.exhaustive ? "exhaustive" : "sampled") << ", " << (d.pass ? "full rank" : "rank deficient") << "\n";
    }
    out << "decodability  " << (decodability.pass ? "PASS" : "FAIL") << "  " << decodability.successes << "/"
        << decodability.trials;
    if (!decodability.pass) out << "  " << decodability.first_failure;
    out << "\n";
  }
  return pass ? kExitOk : kExitAuditFail;
}

struct SweepRow {
  std::vector<Rational> mu;
  Rational upper, lower;
  std::size_t active = 0;
};

int cmd_sweep(const Config& c, std::ostream& out) {
  require_shape(c);
  const Rational step = parse_rational(c.step);
  const Rational lo = parse_rational(c.min);
  const Rational hi = parse_rational(c.max);
  if (step <= 0) throw UsageError("--step must be positive");
  if (lo < 0 || hi >= 1 || lo > hi) throw UsageError("sweep range must satisfy 0 <= --min <= --max < 1");
  std::vector<Rational> axis;
  for (Rational x = lo; x <= hi; x += step) axis.push_back(x);

  // Non-decreasing index tuples into the axis.
  std::vector<std::vector<Rational>> points;
  std::vector<std::size_t> idx(static_cast<std::size_t>(c.N), 0);
  while (true) {
    std::vector<Rational> mu;
    for (std::size_t i : idx) mu.push_back(axis[i]);
    points.push_back(std::move(mu));
    int k = c.N - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] + 1 == axis.size()) --k;
    if (k < 0) break;
    const std::size_t v = ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < c.N; ++j) idx[static_cast<std::size_t>(j)] = v;
  }

  const BoundOptions options = bound_options(c);
  std::vector<SweepRow> rows(points.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t p = begin; p < points.size(); p += stride) {
      const EavesdropProfile mu(points[p]);
      const SchemeChoice best = best_scheme(c.M, c.N, mu);
      rows[p] = SweepRow{points[p], upper_bound(c.M, c.N, mu, options).value, best.rate, best.index};
    }
  };
  const unsigned threads =
      std::max(1u, std::min<unsigned>(c.threads ? c.threads : std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(points.size())));
  std::vector<std::future<void>> jobs;
  for (unsigned t = 0; t < threads; ++t) jobs.push_back(std::async(std::launch::async, work, t, threads));
  for (auto& j : jobs) j.get();

  auto render = [&](const Rational& r) { return c.exact ? to_fraction_string(r) : to_decimal_string(r); };
  if (c.format == "json") {
    Json list = Json::array();
    for (const auto& r : rows) {
      list.push_back({{"mu", rationals(r.mu)},
                      {"upper", number(r.upper)},
                      {"lower", number(r.lower)},
                      {"gap", number(r.upper - r.lower)},
                      {"active_idx", r.active}});
    }
    Json j = {{"version", kReportVersion}, {"command", "sweep"}, {"M", c.M}, {"N", c.N}, {"points", list}};
    emit(c, j.dump(2) + "\n", out);
    return kExitOk;
  }
  std::ostringstream s;
  for (int n = 1; n <= c.N; ++n) s << "mu_" << n << ",";
  s << "upper,lower,gap,active_idx\n";
  for (const auto& r : rows) {
    for (const auto& m : r.mu) s << render(m) << ",";
    s << render(r.upper) << "," << render(r.lower) << "," << render(r.upper - r.lower) << "," << r.active << "\n";
  }
  emit(c, s.str(), out);
  return kExitOk;
}

void add_shape(CLI::App* sub, Config& c) {
  sub->add_option("-M,--messages", c.M, "number of messages")->required();
  sub->add_option("-N,--databases", c.N, "number of databases")->required();
}

void add_mu(CLI::App* sub, Config& c) {
  sub->add_option("--mu", c.mu_text, "comma-separated eavesdropping ratios, e.g. 1/4,1/2 (default all 0)");
  sub->add_flag("--sort-mu", c.sort_mu, "sort --mu instead of rejecting an unsorted list");
}

void add_format(CLI::App* sub, Config& c, std::vector<std::string> formats) {
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember(std::move(formats)));
  sub->add_option("--out", c.out_path, "write output to this file");
}

void add_plan_source(CLI::App* sub, Config& c) {
  sub->add_option("--plan", c.plan_path, "plan JSON written by the plan command");
  sub->add_option("-M,--messages", c.M, "number of messages (when no --plan)");
  sub->add_option("-N,--databases", c.N, "number of databases (when no --plan)");
  add_mu(sub, c);
  sub->add_option("--n", c.n_text, "group sequence, e.g. 1,2,2 (default: best scheme)");
  sub->add_option("--desired", c.desired, "desired message index");
  sub->add_option("--field-q", c.field_q, "prime field size");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Capacity bounds, schemes, query plans and audits for PIR through wiretap channel II", "wtcpir"};
  app.require_subcommand(1);

  auto* capacity = app.add_subcommand("capacity", "upper bound, best achievable rate and their gap");
  add_shape(capacity, c);
  add_mu(capacity, c);
  add_format(capacity, c, {"table", "json", "csv"});
  capacity->add_option("--method", c.method, "upper-bound LP solver: simplex or vertex");

  auto* scheme = app.add_subcommand("scheme", "group sequence, repetitions and lengths of the best scheme");
  add_shape(scheme, c);
  add_mu(scheme, c);
  add_format(scheme, c, {"table", "json"});
  scheme->add_option("--n", c.n_text, "evaluate this group sequence instead of the best one");

  auto* plan = app.add_subcommand("plan", "build a query plan; --out writes JSON plus a markdown table");
  add_shape(plan, c);
  add_mu(plan, c);
  add_format(plan, c, {"table", "json"});
  plan->add_option("--n", c.n_text, "group sequence, e.g. 1,2,2 (default: best scheme)");
  plan->add_option("--desired", c.desired, "desired message index");
  plan->add_option("--field-q", c.field_q, "prime field size (default: smallest prime above max t)");
  plan->add_option("--seed", c.seed, "seed for permutations and shuffling");

  auto* simulate = app.add_subcommand("simulate", "run one retrieval and decode it");
  add_plan_source(simulate, c);
  add_format(simulate, c, {"table", "json"});
  simulate->add_option("--seed", c.seed, "seed for messages, keys and the eavesdropper's choice");

  auto* audit = app.add_subcommand("audit", "privacy, security and decodability audits; exit 1 on FAIL");
  add_plan_source(audit, c);
  add_format(audit, c, {"table", "json"});
  audit->add_option("--seed", c.seed, "seed for plan construction and decodability trials");
  audit->add_option("--budget", c.budget, "exhaustive security check up to this many sets per database");
  audit->add_option("--trials", c.trials, "decodability trials");

  auto* sweep = app.add_subcommand("sweep", "bounds over a grid of sorted mu vectors, as CSV");
  add_shape(sweep, c);
  add_format(sweep, c, {"csv", "json"});
  sweep->add_option("--step", c.step, "grid step (exact rational)");
  sweep->add_option("--min", c.min, "smallest grid value");
  sweep->add_option("--max", c.max, "largest grid value, below 1");
  sweep->add_flag("--exact", c.exact, "print exact fractions instead of 6-decimal values");
  sweep->add_option("--method", c.method, "upper-bound LP solver: simplex or vertex");
  sweep->add_option("--threads", c.threads, "worker threads (default: hardware concurrency)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\nrun with --help for usage\n";
    return kExitUsage;
  }

  if (sweep->parsed() && sweep->count("--format") == 0) c.format = "csv";

  try {
    if (capacity->parsed()) return cmd_capacity(c, out);
    if (scheme->parsed()) return cmd_scheme(c, out);
    if (plan->parsed()) return cmd_plan(c, out);
    if (simulate->parsed()) return cmd_simulate(c, out);
    if (audit->parsed()) return cmd_audit(c, out);
    if (sweep->parsed()) return cmd_sweep(c, out);
  } catch (const ConstructionError& e) {
    err << "construction error (round " << e.round() << ", group " << e.group() << ", database " << e.database()
        << "): " << e.what() << "\n";
    return kExitConstruction;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const EnumerationTooLarge& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace wtcpir::cli
