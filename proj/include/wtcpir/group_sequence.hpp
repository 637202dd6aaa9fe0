#pragma once

#include <cstdint>
#include <vector>

namespace wtcpir {

using Count = std::int64_t;

// binom(n, k), zero whenever k < 0, k > n or n < 0.
Count binomial(Count n, Count k);

// A monotone sequence n_0 <= ... <= n_{M-1} in {1..N}. Group l holds the
// databases n_{l-1}+1 .. n_l (n_{-1} = 0); only groups with at least one
// database belong to the group set S. Databases above n_{M-1} are inactive.
class GroupSequence {
 public:
  GroupSequence(int M, int N, std::vector<int> n);

  int messages() const noexcept { return M_; }
  int databases() const noexcept { return N_; }
  const std::vector<int>& values() const noexcept { return n_; }
  int operator[](int l) const { return l < 0 ? 0 : n_[static_cast<std::size_t>(l)]; }

  const std::vector<int>& group_set() const noexcept { return S_; }
  bool in_group_set(int l) const;
  // n_l - n_{l-1}.
  int group_size(int l) const;
  // Product of binom(M-2, s-1) over s in S \ {l}, with binom(x, -1) = 1.
  Count xi(int l) const;
  // Product of binom(M-2, s-1) over all of S, with binom(x, -1) = 1.
  Count seed_stages() const;
  // Group index of a 1-based database, or -1 when the database is inactive.
  int group_of_database(int db) const;
  int active_databases() const noexcept { return n_.back(); }

  friend bool operator==(const GroupSequence& a, const GroupSequence& b) {
    return a.M_ == b.M_ && a.N_ == b.N_ && a.n_ == b.n_;
  }

 private:
  int M_;
  int N_;
  std::vector<int> n_;
  std::vector<int> S_;
};

GroupSequence derive_groups(int M, int N, const std::vector<int>& n);

// All binom(M+N-1, M) monotone sequences, in lexicographic order.
std::vector<GroupSequence> monotone_sequences(int M, int N);

}  // namespace wtcpir
