#include "wtcpir/group_sequence.hpp"

#include <algorithm>
#include <string>

#include "wtcpir/errors.hpp"

namespace wtcpir {

Count binomial(Count n, Count k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Count r = 1;
  for (Count i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {

Count seed_binomial(int M, int s) { return s == 0 ? 1 : binomial(M - 2, s - 1); }

std::string render(const std::vector<int>& n) {
  std::string out = "(";
  for (std::size_t i = 0; i < n.size(); ++i) out += (i ? "," : "") + std::to_string(n[i]);
  return out + ")";
}

}  // namespace

GroupSequence::GroupSequence(int M, int N, std::vector<int> n) : M_(M), N_(N), n_(std::move(n)) {
  if (M < 1) throw UsageError("M must be at least 1");
  if (N < 1) throw UsageError("N must be at least 1");
  if (n_.size() != static_cast<std::size_t>(M)) {
    throw UsageError("group sequence " + render(n_) + " must have length M = " + std::to_string(M));
  }
  int prev = 0;
  for (int i = 0; i < M; ++i) {
    const int v = n_[static_cast<std::size_t>(i)];
    if (v < 1 || v > N) throw UsageError("group sequence " + render(n_) + " has entries outside 1.." + std::to_string(N));
    if (v < prev) throw UsageError("group sequence " + render(n_) + " is not non-decreasing");
    if (v > prev) S_.push_back(i);
    prev = v;
  }
}

bool GroupSequence::in_group_set(int l) const { return std::binary_search(S_.begin(), S_.end(), l); }

int GroupSequence::group_size(int l) const {
  if (l < 0 || l >= M_) throw UsageError("group index " + std::to_string(l) + " out of range");
  return (*this)[l] - (*this)[l - 1];
}

Count GroupSequence::xi(int l) const {
  Count r = 1;
  for (int s : S_) {
    if (s != l) r *= seed_binomial(M_, s);
  }
  return r;
}

Count GroupSequence::seed_stages() const {
  Count r = 1;
  for (int s : S_) r *= seed_binomial(M_, s);
  return r;
}

int GroupSequence::group_of_database(int db) const {
  if (db < 1 || db > N_) throw UsageError("database index " + std::to_string(db) + " out of range");
  for (int l = 0; l < M_; ++l) {
    if (db <= n_[static_cast<std::size_t>(l)]) return l;
  }
  return -1;
}

GroupSequence derive_groups(int M, int N, const std::vector<int>& n) { return GroupSequence(M, N, n); }

std::vector<GroupSequence> monotone_sequences(int M, int N) {
  if (M < 1 || N < 1) throw UsageError("M and N must be at least 1");
  std::vector<GroupSequence> out;
  std::vector<int> cur(static_cast<std::size_t>(M), 1);
  while (true) {
    out.emplace_back(M, N, cur);
    int i = M - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == N) --i;
    if (i < 0) break;
    const int v = cur[static_cast<std::size_t>(i)] + 1;
    for (int j = i; j < M; ++j) cur[static_cast<std::size_t>(j)] = v;
  }
  return out;
}

}  // namespace wtcpir
