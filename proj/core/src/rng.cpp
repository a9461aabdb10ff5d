#include "rmab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace rmab {

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: empty range");
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = max() - (max() % n + 1) % n;
  std::uint64_t x = next();
  while (x > limit) x = next();
  return x % n;
}

double Rng::exponential(double rate) {
  return -std::log1p(-uniform()) / rate;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(mix64(base) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

}  // namespace rmab
