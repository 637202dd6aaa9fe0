#include "wtcpir/rates.hpp"

#include <numeric>
#include <optional>
#include <string>

#include "wtcpir/errors.hpp"

namespace wtcpir {

std::size_t StageCounts::index(int l, int k) const {
  if (l < 0 || l >= M_ || k < 0 || k > M_) {
    throw UsageError("stage index (" + std::to_string(l) + ", " + std::to_string(k) + ") out of range");
  }
  return static_cast<std::size_t>(l * (M_ + 1) + k);
}

StageCounts stage_counts(const GroupSequence& g) {
  const int M = g.messages();
  StageCounts y(M);
  const auto& S = g.group_set();
  y.at(0, 1) = g.seed_stages();
  for (int k = 2; k <= M; ++k) {
    Count pooled = 0;
    for (int j : S) pooled += g.group_size(j) * y.at(j, k - 1);
    for (int l : S) {
      if (k <= l) continue;
      Count v = pooled - y.at(l, k - 1);
      if (l >= 2 && k == l + 1) v += g[0] * g.xi(l);
      y.at(l, k) = v;
    }
  }
  return y;
}

RepDimensions plan_dimensions_per_rep(const GroupSequence& g) {
  const int M = g.messages();
  const StageCounts y = stage_counts(g);
  RepDimensions out;
  out.downloads.assign(static_cast<std::size_t>(g.databases()), 0);
  for (int l : g.group_set()) {
    Count d = 0, desired = 0;
    for (int k = 1; k <= M; ++k) {
      d += binomial(M, k) * y.at(l, k);
      desired += binomial(M - 1, k - 1) * y.at(l, k);
    }
    for (int db = g[l - 1] + 1; db <= g[l]; ++db) out.downloads[static_cast<std::size_t>(db - 1)] = d;
    out.desired_per_rep += desired * g.group_size(l);
  }
  return out;
}

Count PlanDimensions::total_download() const { return std::accumulate(answer_lengths.begin(), answer_lengths.end(), Count{0}); }

namespace {

void require_profile(const GroupSequence& g, const EavesdropProfile& mu) {
  if (mu.size() != static_cast<std::size_t>(g.databases())) {
    throw UsageError("profile has " + std::to_string(mu.size()) + " entries but N = " + std::to_string(g.databases()));
  }
}

void require_observable(const Rational& mu_n, int db) {
  if (mu_n >= 1) {
    throw FullyObservedError("database " + std::to_string(db) +
                             " is fully observed (mu = 1) and cannot carry meaningful traffic");
  }
}

}  // namespace

PlanDimensions repetition_factor(const GroupSequence& g, const EavesdropProfile& mu) {
  require_profile(g, mu);
  const RepDimensions rep = plan_dimensions_per_rep(g);
  PlanDimensions out;
  out.downloads = rep.downloads;
  out.desired_per_rep = rep.desired_per_rep;
  // nu * D_n / (1 - mu_n) = nu * D_n * q / p with 1 - mu_n = p/q, so nu must
  // be a multiple of p / gcd(p, D_n).
  BigInt nu = 1;
  for (std::size_t i = 0; i < rep.downloads.size(); ++i) {
    if (rep.downloads[i] == 0) continue;
    require_observable(mu[i], static_cast<int>(i + 1));
    const Rational clear = 1 - mu[i];
    const BigInt p = numerator_of(clear);
    const BigInt need = p / boost::multiprecision::gcd(p, BigInt(rep.downloads[i]));
    nu = boost::multiprecision::lcm(nu, need);
  }
  out.repetitions = to_int64(Rational(nu));
  for (std::size_t i = 0; i < rep.downloads.size(); ++i) {
    if (rep.downloads[i] == 0) {
      out.answer_lengths.push_back(0);
      out.key_lengths.push_back(0);
      continue;
    }
    const Rational t = Rational(out.repetitions * rep.downloads[i]) / (1 - mu[i]);
    const Count tn = to_int64(t);
    out.answer_lengths.push_back(tn);
    out.key_lengths.push_back(tn - out.repetitions * rep.downloads[i]);
  }
  return out;
}

std::vector<Rational> traffic_vector(const GroupSequence& g) {
  const RepDimensions rep = plan_dimensions_per_rep(g);
  const Count total = std::accumulate(rep.downloads.begin(), rep.downloads.end(), Count{0});
  std::vector<Rational> tau;
  tau.reserve(rep.downloads.size());
  for (Count d : rep.downloads) tau.emplace_back(Rational(d) / total);
  return tau;
}

Rational achievable_rate(const GroupSequence& g, const EavesdropProfile& mu) {
  require_profile(g, mu);
  const RepDimensions rep = plan_dimensions_per_rep(g);
  Rational denom = 0;
  for (std::size_t i = 0; i < rep.downloads.size(); ++i) {
    if (rep.downloads[i] == 0) continue;
    require_observable(mu[i], static_cast<int>(i + 1));
    denom += Rational(rep.downloads[i]) / (1 - mu[i]);
  }
  return Rational(rep.desired_per_rep) / denom;
}

SchemeChoice best_scheme(int M, int N, const EavesdropProfile& mu) {
  if (mu.size() != static_cast<std::size_t>(N)) {
    throw UsageError("profile has " + std::to_string(mu.size()) + " entries but N = " + std::to_string(N));
  }
  const auto sequences = monotone_sequences(M, N);
  std::optional<SchemeChoice> best;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    const GroupSequence& g = sequences[i];
    bool observable = true;
    for (int db = 1; db <= g.active_databases(); ++db) observable = observable && mu.of_database(db) < 1;
    if (!observable) continue;
    Rational r = achievable_rate(g, mu);
    // Sequences arrive in lexicographic order, so >= keeps the largest on ties.
    if (!best || r >= best->rate) best = SchemeChoice{g, std::move(r), i};
  }
  if (!best) throw FullyObservedError("every database is fully observed; no scheme has positive rate");
  return *best;
}

Rational n2_closed_form(int M, int s2, const EavesdropProfile& mu) {
  if (mu.size() != 2) throw UsageError("the N = 2 closed form needs exactly two eavesdropping ratios");
  if (M < 1) throw UsageError("M must be at least 1");
  if (s2 < 0 || s2 > M - 1) throw UsageError("s2 must lie in 0.." + std::to_string(M - 1));
  const Count seed = s2 == 0 ? 1 : binomial(M - 2, s2 - 1);
  Count desired = seed;
  for (int k = 0; k <= M - s2 - 1; ++k) desired += binomial(M - 1, s2 + k);
  Count d1 = M * seed;
  for (int k = 1; k <= (M - s2) / 2; ++k) d1 += binomial(M, s2 + 2 * k);
  Count d2 = 0;
  for (int k = 0; k <= (M - s2 - 1) / 2; ++k) d2 += binomial(M, s2 + 2 * k + 1);
  require_observable(mu[0], 1);
  Rational denom = Rational(d1) / (1 - mu[0]);
  if (d2 > 0) {
    require_observable(mu[1], 2);
    denom += Rational(d2) / (1 - mu[1]);
  }
  return Rational(desired) / denom;
}

}  // namespace wtcpir
