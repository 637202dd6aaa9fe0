#pragma once

#include <vector>

#include "wtcpir/group_sequence.hpp"
#include "wtcpir/profile.hpp"
#include "wtcpir/rational.hpp"

namespace wtcpir {

// y_l[k] for l in 0..M-1 and k in 1..M; rows for groups outside S stay zero.
class StageCounts {
 public:
  explicit StageCounts(int M) : M_(M), y_(static_cast<std::size_t>(M * (M + 1)), 0) {}

  int messages() const noexcept { return M_; }
  Count at(int l, int k) const { return y_[index(l, k)]; }
  Count& at(int l, int k) { return y_[index(l, k)]; }

 private:
  std::size_t index(int l, int k) const;
  int M_;
  std::vector<Count> y_;
};

StageCounts stage_counts(const GroupSequence& g);

struct RepDimensions {
  std::vector<Count> downloads;  // D_n per database, zero when inactive
  Count desired_per_rep = 0;     // L per repetition
};

RepDimensions plan_dimensions_per_rep(const GroupSequence& g);

struct PlanDimensions {
  std::vector<Count> downloads;
  Count desired_per_rep = 0;
  Count repetitions = 0;           // nu
  std::vector<Count> answer_lengths;  // t_n
  std::vector<Count> key_lengths;     // mu_n t_n

  Count message_length() const noexcept { return repetitions * desired_per_rep; }
  Count total_download() const;
};

// Throws FullyObservedError when an active database has mu_n = 1.
PlanDimensions repetition_factor(const GroupSequence& g, const EavesdropProfile& mu);

std::vector<Rational> traffic_vector(const GroupSequence& g);

Rational achievable_rate(const GroupSequence& g, const EavesdropProfile& mu);

struct SchemeChoice {
  GroupSequence sequence;
  Rational rate;
  std::size_t index = 0;  // position in monotone_sequences(M, N)
};

// Maximizes over every monotone sequence. Ties go to the lexicographically
// largest sequence, which is the symmetric scheme whenever it is optimal.
SchemeChoice best_scheme(int M, int N, const EavesdropProfile& mu);

// Closed-form N = 2 rate for s2 leading ones, binom(M-2, -1) taken as 1.
Rational n2_closed_form(int M, int s2, const EavesdropProfile& mu);

}  // namespace wtcpir
