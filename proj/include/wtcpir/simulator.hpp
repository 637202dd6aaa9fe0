#pragma once

#include <cstdint>
#include <vector>

#include "wtcpir/field.hpp"
#include "wtcpir/plan.hpp"
#include "wtcpir/plan_io.hpp"

namespace wtcpir {

// W_1..W_M, each L symbols over GF(q); every database holds the same copy.
struct MessageStore {
  Word field_q = 0;
  std::vector<std::vector<FieldElement>> messages;  // [m-1][slot]

  std::size_t length() const { return messages.empty() ? 0 : messages.front().size(); }
};

MessageStore random_store(int M, std::size_t L, const PrimeField& field, std::uint64_t seed);
MessageStore zero_store(int M, std::size_t L, const PrimeField& field);

// Per-database secret key and its MDS-encoded artificial noise.
struct KeyMaterial {
  std::vector<std::vector<FieldElement>> keys;   // [n-1], key_len_n symbols
  std::vector<std::vector<FieldElement>> noise;  // [n-1], t_n symbols
};

// Each database draws its key from its own stream of key_seed.
KeyMaterial generate_keys(const QueryPlan& plan, std::uint64_t key_seed);
KeyMaterial zero_keys(const QueryPlan& plan);

struct EavesdropperView {
  std::vector<std::vector<std::size_t>> positions;  // [n-1], sorted answer positions
  std::vector<std::vector<FieldElement>> values;
};

struct Transcript {
  std::vector<std::vector<FieldElement>> answers;  // [n-1][position]
  std::vector<FieldElement> decoded;
  EavesdropperView eavesdropper;
  bool correct = false;  // decoded == W_desired
};

// Answer symbols of every database: the plain k-sum of each query plus the
// noise symbol bound to it.
std::vector<std::vector<FieldElement>> compute_answers(const QueryPlan& plan, const MessageStore& store,
                                                       const KeyMaterial& keys);

// Throws UsageError when the store does not match the plan, DecodeError when
// the answers cannot be decoded.
Transcript run_retrieval(const QueryPlan& plan, const MessageStore& store, std::uint64_t key_seed);
Transcript run_retrieval(const QueryPlan& plan, const MessageStore& store, const KeyMaterial& keys,
                         std::uint64_t view_seed);

// Recovers each database's noise from its pure-noise downloads, strips it,
// cancels side information and returns W_desired in slot order. Throws
// DecodeError naming the database and answer position that could not be
// resolved.
std::vector<FieldElement> decode(const QueryPlan& plan, const std::vector<std::vector<FieldElement>>& answers);

Json transcript_to_json(const Transcript& transcript);

}  // namespace wtcpir
