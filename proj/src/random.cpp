#include "wtcpir/random.hpp"

namespace wtcpir {

std::uint64_t Rng::below(std::uint64_t bound) {
  const std::uint64_t reject_under = (0 - bound) % bound;
  std::uint64_t x = engine_();
  while (x < reject_under) x = engine_();
  return x % bound;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ purpose) ^ index);
}

}  // namespace wtcpir
