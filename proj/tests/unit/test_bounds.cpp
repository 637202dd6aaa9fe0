#include <doctest.h>

#include <random>
#include <vector>

#include "../oracles.hpp"
#include "wtcpir/bounds.hpp"
#include "wtcpir/errors.hpp"
#include "wtcpir/group_sequence.hpp"
#include "wtcpir/rates.hpp"

using namespace wtcpir;

namespace {

EavesdropProfile profile(std::initializer_list<Rational> mu) { return EavesdropProfile(std::vector<Rational>(mu)); }

Rational r(long p, long q = 1) { return Rational(p, q); }

// Brute-force inner bound straight from the definition with phi().
Rational inner_oracle(const std::vector<Rational>& tau, const EavesdropProfile& mu, int M) {
  const int N = static_cast<int>(tau.size());
  auto phi = [&](int l) {
    Rational s = 0;
    for (int n = l + 1; n <= N; ++n) s += (1 - mu.of_database(n)) * tau[static_cast<std::size_t>(n - 1)];
    return s;
  };
  std::vector<int> seq(static_cast<std::size_t>(M - 1), 1);
  Rational best = -1;
  while (true) {
    Rational num = phi(0), den = 1, p = 1;
    for (int v : seq) {
      p *= v;
      num += phi(v) / p;
      den += 1 / p;
    }
    const Rational val = num / den;
    if (best < 0 || val < best) best = val;
    int i = M - 2;
    while (i >= 0 && seq[static_cast<std::size_t>(i)] == N) seq[static_cast<std::size_t>(i--)] = 1;
    if (i < 0) break;
    ++seq[static_cast<std::size_t>(i)];
  }
  return best;
}

}  // namespace

TEST_CASE("inner bound examples") {
  CHECK(inner_bound_at({r(1), r(0)}, EavesdropProfile::zeros(2), 3) == r(1, 3));
  for (int M = 1; M <= 4; ++M)
    for (int N = 1; N <= 4; ++N) {
      const std::vector<Rational> uniform(static_cast<std::size_t>(N), r(1, N));
      CHECK(inner_bound_at(uniform, EavesdropProfile::zeros(static_cast<std::size_t>(N)), M) ==
            oracle::classic_capacity(M, N));
    }
  // The optimal traffic split of the worked example.
  const auto mu = profile({r(1, 4), r(1, 2)});
  const Rational a = r(3, 4), b = r(1, 2);
  const Rational tau2 = 3 * a / (4 * b + 3 * a);
  CHECK(inner_bound_at({1 - tau2, tau2}, mu, 3) == r(6, 17));
}

TEST_CASE("inner bound rejects tau outside the simplex") {
  const auto mu = EavesdropProfile::zeros(2);
  CHECK_THROWS_AS(inner_bound_at({r(1, 2), r(1, 3)}, mu, 3), UsageError);
  CHECK_THROWS_AS(inner_bound_at({r(3, 2), r(-1, 2)}, mu, 3), UsageError);
  CHECK_THROWS_AS(inner_bound_at({r(1)}, mu, 3), UsageError);
}

TEST_CASE("inner bound agrees with the definition") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const int M = 1 + static_cast<int>(rng() % 4), N = 1 + static_cast<int>(rng() % 3);
    const auto mu = oracle::random_profile(rng, N);
    std::vector<Rational> tau;
    Rational mass = 0;
    for (int i = 0; i < N; ++i) {
      tau.emplace_back(static_cast<long>(rng() % 10), 1);
      mass += tau.back();
    }
    if (mass == 0) tau[0] = mass = 1;
    for (auto& t : tau) t /= mass;
    CHECK(inner_bound_at(tau, mu, M) == inner_oracle(tau, mu, M));
  }
}

TEST_CASE("upper bound of the worked example") {
  const auto res = upper_bound(3, 2, profile({r(1, 4), r(1, 2)}));
  CHECK(res.value == r(6, 17));
  CHECK(inner_bound_at(res.argmax_tau, profile({r(1, 4), r(1, 2)}), 3) == res.value);
}

TEST_CASE("upper bound at mu = 0 is the classic capacity at uniform traffic") {
  for (int M = 1; M <= 4; ++M)
    for (int N = 1; N <= 4; ++N) {
      const auto res = upper_bound(M, N, EavesdropProfile::zeros(static_cast<std::size_t>(N)));
      CHECK(res.value == oracle::classic_capacity(M, N));
      for (const auto& t : res.argmax_tau) CHECK(t == r(1, N));
    }
}

TEST_CASE("M = 3, N = 2 explicit bound") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 50; ++i) {
    const auto mu = oracle::random_profile(rng, 2);
    CHECK(upper_bound(3, 2, mu).value == oracle::m3n2_upper(mu));
  }
}

TEST_CASE("simplex, vertex enumeration, pruning and balancing agree") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const int M = 2 + static_cast<int>(rng() % 3), N = 2 + static_cast<int>(rng() % 2);
    const auto mu = oracle::random_profile(rng, N);
    BoundOptions plain;
    plain.prune_dominated = false;
    plain.balance_tau = false;
    BoundOptions vertices = plain;
    vertices.method = BoundMethod::VertexEnumeration;
    BoundOptions pruned_vertices = vertices;
    pruned_vertices.prune_dominated = true;
    const auto a = upper_bound(M, N, mu);
    const auto b = upper_bound(M, N, mu, plain);
    const auto c = upper_bound(M, N, mu, vertices);
    const auto d = upper_bound(M, N, mu, pruned_vertices);
    CHECK(a.value == b.value);
    CHECK(a.value == c.value);
    CHECK(a.value == d.value);
    for (const auto* res : {&a, &b, &c, &d}) {
      Rational mass = 0;
      for (const auto& t : res->argmax_tau) {
        CHECK(t >= 0);
        mass += t;
      }
      CHECK(mass == 1);
      CHECK(inner_bound_at(res->argmax_tau, mu, M) == res->value);
      CHECK_FALSE(res->active_sequences.empty());
    }
  }
}

TEST_CASE("pruning keeps exactly the undominated constraints") {
  const auto mu = profile({r(1, 4), r(1, 2)});
  const auto all = sequence_bounds(3, 2, mu, 100);
  CHECK(all.size() == 4);
  const auto kept = prune_dominated(all);
  // (2,1) is only beaten by a mix of (1,2) and (2,2), so it survives pruning.
  CHECK(kept.size() == 4);
  for (const auto& a : all) {
    bool covered = false;
    for (const auto& k : kept) {
      bool le = true;
      for (std::size_t m = 0; m < 2; ++m) le = le && k.coefficients[m] <= a.coefficients[m];
      covered = covered || le;
    }
    CHECK(covered);
  }
}

TEST_CASE("the (2,1) constraint never binds for M = 3, N = 2") {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 50; ++i) {
    const auto res = upper_bound(3, 2, oracle::random_profile(rng, 2));
    for (const auto& s : res.active_sequences) CHECK(s != std::vector<int>{2, 1});
  }
}

TEST_CASE("enumeration budgets") {
  BoundOptions tight;
  tight.sequence_budget = 10;
  CHECK_THROWS_AS(upper_bound(4, 3, EavesdropProfile::zeros(3), tight), EnumerationTooLarge);
  BoundOptions few;
  few.method = BoundMethod::VertexEnumeration;
  few.vertex_budget = 3;
  CHECK_THROWS_AS(upper_bound(3, 3, EavesdropProfile::zeros(3), few), EnumerationTooLarge);
}

TEST_CASE("closed-form capacity") {
  auto cf = closed_form_capacity(3, 2, profile({r(1, 4), r(1, 2)}));
  CHECK(cf.value == r(6, 17));
  CHECK(cf.argmax == std::vector<int>{1, 2, 2});
  cf = closed_form_capacity(2, 2, EavesdropProfile::zeros(2));
  CHECK(cf.value == r(2, 3));
  CHECK(cf.argmax == std::vector<int>{2, 2});
  for (int N = 1; N <= 5; ++N)
    for (int E = 0; E < N; ++E) {
      const EavesdropProfile mu(std::vector<Rational>(static_cast<std::size_t>(N), r(E, N)));
      cf = closed_form_capacity(3, N, mu);
      CHECK(cf.value == (1 - r(E, N)) * oracle::classic_capacity(3, N));
      CHECK(cf.argmax == std::vector<int>{N, N, N});
    }
  CHECK_THROWS_AS(closed_form_capacity(4, 2, EavesdropProfile::zeros(2)), UsageError);
}

TEST_CASE("closed forms match the LP for M = 2, 3") {
  std::mt19937_64 rng(53);
  for (int M = 2; M <= 3; ++M)
    for (int N = 1; N <= 4; ++N)
      for (int i = 0; i < 10; ++i) {
        const auto mu = oracle::random_profile(rng, N);
        CHECK(closed_form_capacity(M, N, mu).value == upper_bound(M, N, mu).value);
      }
}

TEST_CASE("corner-point traffic for M = 3") {
  // Within group 0 the optimal meaningful traffic share equals
  // (n0 n1 + n0 + 1) / (n0 (n2 n1 + n1 + 1)).
  for (int N = 1; N <= 4; ++N)
    for (const auto& g : monotone_sequences(3, N)) {
      const auto& n = g.values();
      const auto tau = traffic_vector(g);
      const Rational share = Rational(n[0] * n[1] + n[0] + 1) / (n[0] * (n[2] * n[1] + n[1] + 1));
      CHECK(tau[0] == share);
    }
}

TEST_CASE("lower bound never exceeds the upper bound") {
  std::mt19937_64 rng(59);
  for (int M = 1; M <= 4; ++M)
    for (int N = 1; N <= 3; ++N)
      for (int i = 0; i < 50; ++i) {
        const auto mu = oracle::random_profile(rng, N);
        CHECK(gap(M, N, mu) >= 0);
      }
}

TEST_CASE("single message has no gap") {
  std::mt19937_64 rng(61);
  for (int N = 1; N <= 4; ++N)
    for (int i = 0; i < 5; ++i) {
      const auto mu = oracle::random_profile(rng, N);
      CHECK(gap(1, N, mu) == 0);
      CHECK(upper_bound(1, N, mu).value == 1 - mu[0]);
    }
}

TEST_CASE("N = 2 lower bound from the closed form stays below the upper bound") {
  std::mt19937_64 rng(67);
  for (int M = 2; M <= 5; ++M)
    for (int i = 0; i < 5; ++i) {
      const auto mu = oracle::random_profile(rng, 2);
      const Rational ub = upper_bound(M, 2, mu).value;
      for (int s2 = 0; s2 < M; ++s2) CHECK(n2_closed_form(M, s2, mu) <= ub);
    }
}
