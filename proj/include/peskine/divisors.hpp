#pragma once

#include <string>
#include <string_view>

#include "peskine/estimate.hpp"
#include "peskine/trivector.hpp"

namespace peskine {

enum class DivisorKind { General, D3_3_10, D1_6_10, D4_7_7 };

std::string_view to_string(DivisorKind kind) noexcept;
/// Accepts "GENERAL", "D3_3_10", "D1_6_10", "D4_7_7"; throws std::invalid_argument otherwise.
DivisorKind parse_divisor_kind(std::string_view name);

/// Flag dimensions required by `kind`: () / (3) / (1,6) / (4,7).
std::vector<std::size_t> flag_shape(DivisorKind kind);

/// True if the increasing triple (i,j,k) is forced to zero in standard position:
///   D3_3_10: at least two indices in {0,1,2};
///   D1_6_10: i = 0 and j <= 5;
///   D4_7_7:  i <= 3 and k <= 6.
bool zeroed_in_standard_position(DivisorKind kind, std::size_t i, std::size_t j, std::size_t k) noexcept;

struct WitnessedTrivector {
  Trivector sigma;
  DivisorKind kind;
  Flag flag;           // witness flag for sigma
  Flag standard_flag;  // coordinate flag before scrambling
  Matrix scramble;     // sigma = gl_act(scramble, standard sigma)
};

/// Uniform coefficients outside the kind's zero pattern on F_p^10, then a uniform GL(10)
/// scramble applied to both the trivector and the flag (identity if scramble = false).
WitnessedTrivector sample_trivector(Rng& rng, DivisorKind kind, const PrimeField& f, bool scramble = true);

/// Checks the vanishing conditions of `kind` on basis vectors of the flag spaces:
///   D3_3_10: s(V3, V3, V) = 0;  D1_6_10: s(V1, V6, V) = 0;  D4_7_7: s(U4, V7, V7) = 0.
/// Throws std::invalid_argument if the flag dimensions do not match flag_shape(kind).
bool verify_flag(const Trivector& s, const Flag& flag, DivisorKind kind);

/// (<v1>, radical of s(v1, ., .)). Throws std::invalid_argument if the contraction has
/// rank above 4 and std::domain_error if the radical is not 6-dimensional.
Flag recover_flag_D1610(const Trivector& s, std::span<const Elem> v1_hint);

/// Number of [u] in P^{n-1}(F_p) with rank s(u, ., .) <= 4.
std::uint64_t rank4_uniqueness_scan(const Trivector& s, const ScanOptions& opts = {});

}  // namespace peskine
