#pragma once

// Brute-force check of the eavesdropper's view on tiny plans: for every joint
// observation set, tabulate the distribution of the observed symbols over all
// keys, once per message realization, and compare the tables. Answers are
// evaluated here straight from the plan terms and the Vandermonde noise
// polynomial; nothing from the simulator or the rank audit is used.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "wtcpir/plan.hpp"

namespace oracle {

struct LeakageResult {
  std::size_t sets_checked = 0;
  std::size_t leaking_sets = 0;
  std::uint64_t evaluations = 0;
};

inline std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Writes counter value x as base-q digits.
inline void digits(std::uint64_t x, std::uint64_t q, std::vector<std::uint64_t>& out) {
  for (auto& d : out) {
    d = x % q;
    x /= q;
  }
}

inline LeakageResult brute_force_leakage(const wtcpir::QueryPlan& plan, std::uint64_t max_work = 400'000'000) {
  const std::uint64_t q = plan.field_q;
  const std::size_t L = plan.message_length();
  const std::size_t M = static_cast<std::size_t>(plan.M);
  const std::size_t N = static_cast<std::size_t>(plan.N);

  std::vector<std::size_t> t(N), key(N), obs(N), key_offset(N);
  std::size_t key_total = 0;
  for (std::size_t n = 0; n < N; ++n) {
    t[n] = plan.queries[n].size();
    key[n] = static_cast<std::size_t>(plan.dims.key_lengths[n]);
    const Rational o = plan.mu[n] * static_cast<long>(t[n]);
    obs[n] = static_cast<std::size_t>(wtcpir::to_int64(o));
    key_offset[n] = key_total;
    key_total += key[n];
  }

  // Every joint choice of observation sets, one subset of size obs[n] per database.
  std::vector<std::vector<std::vector<std::size_t>>> per_db(N);
  for (std::size_t n = 0; n < N; ++n) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << t[n]); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcountll(mask)) != obs[n]) continue;
      std::vector<std::size_t> s;
      for (std::size_t j = 0; j < t[n]; ++j) {
        if (mask >> j & 1) s.push_back(j);
      }
      per_db[n].push_back(s);
    }
  }

  const std::uint64_t messages = ipow(q, M * L);
  const std::uint64_t keys = ipow(q, key_total);
  LeakageResult result;
  std::vector<std::size_t> choice(N, 0);
  std::vector<std::uint64_t> w(M * L), k(key_total);
  while (true) {
    std::vector<std::pair<std::size_t, std::size_t>> view;  // (database, position)
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t j : per_db[n][choice[n]]) view.emplace_back(n, j);
    }
    if (static_cast<double>(messages) * static_cast<double>(keys) * static_cast<double>(view.size() + 1) >
        static_cast<double>(max_work)) {
      throw std::runtime_error("leakage oracle instance too large");
    }
    ++result.sets_checked;
    const std::uint64_t cells = ipow(q, view.size());
    std::vector<std::uint32_t> reference(cells), hist(cells);
    bool leaks = false;
    for (std::uint64_t wi = 0; wi < messages && !leaks; ++wi) {
      digits(wi, q, w);
      std::fill(hist.begin(), hist.end(), 0);
      for (std::uint64_t ki = 0; ki < keys; ++ki) {
        digits(ki, q, k);
        std::uint64_t code = 0;
        for (auto it = view.rbegin(); it != view.rend(); ++it) {
          const auto& query = plan.queries[it->first][it->second];
          std::uint64_t z = 0;
          for (const auto& term : query.terms) z += w[static_cast<std::size_t>(term.message - 1) * L + term.slot];
          const std::vector<std::uint64_t> kn(k.begin() + static_cast<std::ptrdiff_t>(key_offset[it->first]),
                                              k.begin() + static_cast<std::ptrdiff_t>(key_offset[it->first] + key[it->first]));
          z += poly_eval(kn, (query.noise_slot + 1) % q, q);
          code = code * q + z % q;
          ++result.evaluations;
        }
        ++hist[code];
      }
      if (wi == 0) {
        reference = hist;
      } else if (hist != reference) {
        leaks = true;
      }
    }
    result.leaking_sets += leaks;

    std::size_t n = 0;
    while (n < N && ++choice[n] == per_db[n].size()) choice[n++] = 0;
    if (n == N) break;
  }
  return result;
}

}  // namespace oracle
