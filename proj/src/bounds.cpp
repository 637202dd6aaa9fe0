#include "wtcpir/bounds.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>

#include "wtcpir/errors.hpp"
#include "wtcpir/group_sequence.hpp"
#include "wtcpir/lp.hpp"
#include "wtcpir/rates.hpp"

namespace wtcpir {

namespace {

void require_sizes(int M, int N, const EavesdropProfile& mu) {
  if (M < 1) throw UsageError("M must be at least 1");
  if (N < 1) throw UsageError("N must be at least 1");
  if (mu.size() != static_cast<std::size_t>(N)) {
    throw UsageError("profile has " + std::to_string(mu.size()) + " entries but N = " + std::to_string(N));
  }
}

SequenceBound make_bound(const std::vector<int>& seq, const EavesdropProfile& mu) {
  const std::size_t N = mu.size();
  // weight[j] = 1 / (n_1 ... n_j), with the empty product for j = 0.
  std::vector<Rational> weight{Rational(1)};
  Rational p = 1;
  for (int v : seq) {
    p *= v;
    weight.emplace_back(1 / p);
  }
  const Rational total = std::accumulate(weight.begin(), weight.end(), Rational(0));
  SequenceBound out{seq, std::vector<Rational>(N, 0)};
  for (std::size_t m = 1; m <= N; ++m) {
    // tau_m appears in phi(n_j) whenever n_j < m, with n_0 = 0.
    Rational w = weight[0];
    for (std::size_t j = 0; j < seq.size(); ++j) {
      if (static_cast<std::size_t>(seq[j]) < m) w += weight[j + 1];
    }
    out.coefficients[m - 1] = (1 - mu[m - 1]) * w / total;
  }
  return out;
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Solves a square rational system; nullopt when singular.
std::optional<std::vector<Rational>> solve_rational(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

struct Optimum {
  Rational value;
  std::vector<Rational> tau;
};

Optimum solve_by_simplex(const std::vector<SequenceBound>& bounds, std::size_t N) {
  LpProblem lp;
  lp.objective.assign(N + 1, 0);
  lp.objective[N] = 1;
  for (const auto& b : bounds) {
    LinearConstraint con{std::vector<Rational>(N + 1), Relation::LessEqual, 0};
    for (std::size_t m = 0; m < N; ++m) con.coefficients[m] = -b.coefficients[m];
    con.coefficients[N] = 1;
    lp.constraints.push_back(std::move(con));
  }
  // All coefficients are non-negative, so relaxing sum(tau) = 1 to <= 1 keeps
  // the optimum and makes the origin a feasible start.
  LinearConstraint simplex{std::vector<Rational>(N + 1, 1), Relation::LessEqual, 1};
  simplex.coefficients[N] = 0;
  lp.constraints.push_back(std::move(simplex));
  const LpSolution sol = maximize(lp);
  if (sol.status != LpStatus::Optimal) throw std::logic_error("upper-bound LP did not reach an optimum");
  Optimum out{sol.value, std::vector<Rational>(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(N))};
  const Rational mass = std::accumulate(out.tau.begin(), out.tau.end(), Rational(0));
  if (mass == 0) {
    out.tau.assign(N, Rational(1, static_cast<long>(N)));
  } else {
    for (auto& t : out.tau) t /= mass;
  }
  return out;
}

Optimum solve_by_vertices(const std::vector<SequenceBound>& bounds, std::size_t N, std::size_t budget) {
  // Unknowns (tau_1..tau_N, R). A vertex is fixed by sum(tau) = 1 plus N tight
  // inequalities drawn from the K bound rows and the N sign rows.
  const std::size_t K = bounds.size();
  const std::size_t H = K + N;
  {
    BigInt count = 1;
    for (std::size_t i = 0; i < N; ++i) count = count * (H - i) / (i + 1);
    if (count > budget) {
      throw EnumerationTooLarge("vertex enumeration needs " + count.str() + " candidate bases, over the budget of " +
                                std::to_string(budget) + "; use the simplex method or a closed form");
    }
  }
  std::optional<Optimum> best;
  std::vector<std::size_t> pick(N);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> rhs;
    a.emplace_back(N + 1, 1);
    a.back()[N] = 0;
    rhs.emplace_back(1);
    for (std::size_t h : pick) {
      std::vector<Rational> row(N + 1, 0);
      if (h < K) {
        for (std::size_t m = 0; m < N; ++m) row[m] = -bounds[h].coefficients[m];
        row[N] = 1;
      } else {
        row[h - K] = 1;
      }
      a.push_back(std::move(row));
      rhs.emplace_back(0);
    }
    if (auto x = solve_rational(std::move(a), std::move(rhs))) {
      std::vector<Rational> tau(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(N));
      const Rational& r = (*x)[N];
      bool feasible = std::all_of(tau.begin(), tau.end(), [](const Rational& t) { return t >= 0; });
      for (std::size_t k = 0; feasible && k < K; ++k) feasible = r <= dot(bounds[k].coefficients, tau);
      if (feasible && (!best || r > best->value)) best = Optimum{r, std::move(tau)};
    }
    // Next combination of N out of H.
    std::size_t i = N;
    while (i > 0 && pick[i - 1] == H - N + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < N; ++j) pick[j] = pick[j - 1] + 1;
  }
  if (!best) throw std::logic_error("no feasible vertex found for the upper-bound LP");
  return *best;
}

// Among tau with every bound >= value, minimize max_m |tau_m - 1/N|.
std::vector<Rational> balanced_tau(const std::vector<SequenceBound>& bounds, std::size_t N, const Rational& value) {
  LpProblem lp;
  lp.objective.assign(N + 1, 0);
  lp.objective[N] = -1;
  for (const auto& b : bounds) {
    LinearConstraint con{b.coefficients, Relation::GreaterEqual, value};
    con.coefficients.emplace_back(0);
    lp.constraints.push_back(std::move(con));
  }
  LinearConstraint simplex{std::vector<Rational>(N + 1, 1), Relation::Equal, 1};
  simplex.coefficients[N] = 0;
  lp.constraints.push_back(std::move(simplex));
  const Rational uniform(1, static_cast<long>(N));
  for (std::size_t m = 0; m < N; ++m) {
    LinearConstraint above{std::vector<Rational>(N + 1, 0), Relation::LessEqual, uniform};
    above.coefficients[m] = 1;
    above.coefficients[N] = -1;
    LinearConstraint below{std::vector<Rational>(N + 1, 0), Relation::GreaterEqual, uniform};
    below.coefficients[m] = 1;
    below.coefficients[N] = 1;
    lp.constraints.push_back(std::move(above));
    lp.constraints.push_back(std::move(below));
  }
  const LpSolution sol = maximize(lp);
  if (sol.status != LpStatus::Optimal) throw std::logic_error("balancing LP lost the optimal face");
  return {sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(N)};
}

}  // namespace

std::vector<SequenceBound> sequence_bounds(int M, int N, const EavesdropProfile& mu, std::size_t budget) {
  require_sizes(M, N, mu);
  BigInt count = 1;
  for (int i = 1; i < M; ++i) count *= N;
  if (count > budget) {
    throw EnumerationTooLarge("the upper bound needs " + count.str() + " sequence constraints, over the budget of " +
                              std::to_string(budget) + "; for M <= 3 use the closed form");
  }
  std::vector<SequenceBound> out;
  std::vector<int> seq(static_cast<std::size_t>(M - 1), 1);
  while (true) {
    out.push_back(make_bound(seq, mu));
    int i = M - 2;
    while (i >= 0 && seq[static_cast<std::size_t>(i)] == N) seq[static_cast<std::size_t>(i--)] = 1;
    if (i < 0) break;
    ++seq[static_cast<std::size_t>(i)];
  }
  return out;
}

std::vector<SequenceBound> prune_dominated(std::vector<SequenceBound> bounds) {
  const std::size_t K = bounds.size();
  std::vector<bool> drop(K, false);
  for (std::size_t a = 0; a < K; ++a) {
    for (std::size_t b = 0; b < K && !drop[a]; ++b) {
      if (a == b || drop[b]) continue;
      bool covers = true, equal = true;
      for (std::size_t m = 0; m < bounds[a].coefficients.size() && covers; ++m) {
        covers = bounds[b].coefficients[m] <= bounds[a].coefficients[m];
        equal = equal && bounds[b].coefficients[m] == bounds[a].coefficients[m];
      }
      if (covers && (!equal || b < a)) drop[a] = true;
    }
  }
  std::vector<SequenceBound> kept;
  for (std::size_t k = 0; k < K; ++k) {
    if (!drop[k]) kept.push_back(std::move(bounds[k]));
  }
  return kept;
}

Rational inner_bound_at(const std::vector<Rational>& tau, const EavesdropProfile& mu, int M) {
  if (tau.size() != mu.size()) throw UsageError("tau and mu must have the same length");
  Rational mass = 0;
  for (const auto& t : tau) {
    if (t < 0) throw UsageError("tau has a negative entry " + to_fraction_string(t));
    mass += t;
  }
  if (mass != 1) throw UsageError("tau sums to " + to_fraction_string(mass) + ", not 1");
  const auto bounds = sequence_bounds(M, static_cast<int>(mu.size()), mu, BoundOptions{}.sequence_budget);
  std::optional<Rational> best;
  for (const auto& b : bounds) {
    Rational v = dot(b.coefficients, tau);
    if (!best || v < *best) best = std::move(v);
  }
  return *best;
}

BoundResult upper_bound(int M, int N, const EavesdropProfile& mu, const BoundOptions& options) {
  const auto all = sequence_bounds(M, N, mu, options.sequence_budget);
  const auto rows = options.prune_dominated ? prune_dominated(all) : all;
  const std::size_t n = static_cast<std::size_t>(N);
  Optimum opt = options.method == BoundMethod::Simplex ? solve_by_simplex(rows, n)
                                                       : solve_by_vertices(rows, n, options.vertex_budget);
  BoundResult out;
  out.value = opt.value;
  out.argmax_tau = options.balance_tau ? balanced_tau(rows, n, opt.value) : std::move(opt.tau);
  for (const auto& b : all) {
    if (dot(b.coefficients, out.argmax_tau) == out.value) out.active_sequences.push_back(b.sequence);
  }
  return out;
}

ClosedFormCapacity closed_form_capacity(int M, int N, const EavesdropProfile& mu) {
  require_sizes(M, N, mu);
  if (M != 2 && M != 3) throw UsageError("closed-form capacity exists only for M = 2 or M = 3");
  std::vector<Rational> inv(static_cast<std::size_t>(N));
  for (int db = 1; db <= N; ++db) inv[static_cast<std::size_t>(db - 1)] = mu.of_database(db) < 1 ? Rational(1 / (1 - mu.of_database(db))) : Rational(-1);
  // Sum of 1/(1 - mu_n) over lo < n <= hi; nullopt if some term is infinite.
  auto span = [&](int lo, int hi) -> std::optional<Rational> {
    Rational s = 0;
    for (int db = lo + 1; db <= hi; ++db) {
      if (inv[static_cast<std::size_t>(db - 1)] < 0) return std::nullopt;
      s += inv[static_cast<std::size_t>(db - 1)];
    }
    return s;
  };
  std::optional<ClosedFormCapacity> best;
  for (const auto& g : monotone_sequences(M, N)) {
    const auto& n = g.values();
    std::optional<Rational> value;
    if (M == 2) {
      const auto s0 = span(0, n[0]), s1 = span(n[0], n[1]);
      if (s0 && s1) value = Rational(n[0] * n[1]) / (Rational(n[0] + 1) * *s0 + Rational(n[0]) * *s1);
    } else {
      const auto s0 = span(0, n[0]), s1 = span(n[0], n[1]), s2 = span(n[1], n[2]);
      if (s0 && s1 && s2) {
        const Rational p = n[0] * n[1];
        value = Rational(n[0] * n[1] * n[2]) / ((p + n[0] + 1) * *s0 + (p + n[0]) * *s1 + p * *s2);
      }
    }
    if (value && (!best || *value >= best->value)) best = ClosedFormCapacity{*value, n};
  }
  if (!best) throw FullyObservedError("every database is fully observed");
  return *best;
}

Rational gap(int M, int N, const EavesdropProfile& mu, const BoundOptions& options) {
  return upper_bound(M, N, mu, options).value - best_scheme(M, N, mu).rate;
}

}  // namespace wtcpir
