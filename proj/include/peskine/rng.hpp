#pragma once

#include <cstdint>

#include "peskine/field.hpp"

namespace peskine {

// SplitMix64. The state transition is part of the report format: any change
// here changes every sampled object and every stored report.
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n) by rejection; n > 0.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  Elem uniform(const PrimeField& f) noexcept { return static_cast<Elem>(below(f.p())); }
  Elem nonzero(const PrimeField& f) noexcept { return static_cast<Elem>(1 + below(f.p() - 1)); }

  /// Independent stream for a sub-task (seed derivation is itself SplitMix64).
  Rng fork(std::uint64_t tag) const noexcept {
    Rng r(state_ ^ (tag * 0xD1B54A32D192ED03ULL));
    r.next();
    return Rng(r.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace peskine
