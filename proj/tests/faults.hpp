#pragma once

// Deliberately broken variants of a valid plan, used to show that each audit
// catches the defect it is responsible for.

#include <algorithm>
#include <set>
#include <stdexcept>

#include "wtcpir/plan.hpp"

namespace faults {

inline bool has_desired(const wtcpir::QueryPlan& p, const wtcpir::Query& q) {
  return std::any_of(q.terms.begin(), q.terms.end(), [&](const wtcpir::Term& t) { return t.message == p.desired; });
}

// Key one symbol shorter than mu_n t_n at database db.
inline wtcpir::QueryPlan shorten_key(wtcpir::QueryPlan p, int db) {
  p.dims.key_lengths.at(static_cast<std::size_t>(db - 1)) -= 1;
  return p;
}

// Drops one message from the first undesired multi-message sum found, so the
// stage no longer covers every subset once.
inline wtcpir::QueryPlan break_symmetry(wtcpir::QueryPlan p) {
  for (auto& qs : p.queries) {
    for (auto& q : qs) {
      if (q.terms.size() >= 2 && !has_desired(p, q)) {
        q.terms.pop_back();
        return p;
      }
    }
  }
  throw std::logic_error("plan has no undesired sum to break");
}

// Points one side-information term of a desired-bearing query at a symbol that
// no other database ever downloads.
inline wtcpir::QueryPlan rewire_side_information(wtcpir::QueryPlan p) {
  for (std::size_t n = 0; n < p.queries.size(); ++n) {
    for (auto& q : p.queries[n]) {
      if (!has_desired(p, q) || q.terms.size() < 2) continue;
      for (auto& t : q.terms) {
        if (t.message == p.desired) continue;
        std::set<std::size_t> elsewhere;
        for (std::size_t o = 0; o < p.queries.size(); ++o) {
          if (o == n) continue;
          for (const auto& other : p.queries[o]) {
            if (has_desired(p, other)) continue;
            for (const auto& u : other.terms) {
              if (u.message == t.message) elsewhere.insert(u.slot);
            }
          }
        }
        for (std::size_t s = 0; s < p.message_length(); ++s) {
          if (!elsewhere.count(s)) {
            t.slot = s;
            std::sort(q.terms.begin(), q.terms.end());
            return p;
          }
        }
      }
    }
  }
  throw std::logic_error("plan has no side information to rewire");
}

}  // namespace faults
