#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace peskine {

/// Residue in [0, p).
using Elem = std::uint32_t;

/// Arithmetic in the prime field F_p, 3 <= p < 2^31.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const noexcept { return p_; }

  Elem add(Elem a, Elem b) const noexcept {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const noexcept {
    return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  /// a + b*c
  Elem fma(Elem a, Elem b, Elem c) const noexcept {
    return static_cast<Elem>((a + static_cast<std::uint64_t>(b) * c) % p_);
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const noexcept;

  Elem from_int(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<Elem>(r < 0 ? r + p_ : r);
  }
  /// Symmetric representative in (-p/2, p/2].
  std::int64_t to_signed(Elem a) const noexcept {
    return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : a;
  }

  bool operator==(const PrimeField& o) const noexcept { return p_ == o.p_; }

 private:
  std::uint32_t p_;
};

bool is_prime(std::uint64_t n) noexcept;

class FieldMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require_same_field(const PrimeField& a, const PrimeField& b) {
  if (!(a == b)) {
    throw FieldMismatch("field mismatch: p=" + std::to_string(a.p()) + " vs p=" + std::to_string(b.p()));
  }
}

}  // namespace peskine
