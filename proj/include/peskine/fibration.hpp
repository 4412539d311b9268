#pragma once

#include <optional>

#include "peskine/divisors.hpp"
#include "peskine/estimate.hpp"
#include "peskine/orbit.hpp"

namespace peskine {

/// The two-form omega = s(v1, ., .) on V/V6 in the coordinates of the canonical
/// complement of V6.
struct OmegaData {
  Flag flag;                               // V1 < V6
  std::vector<std::size_t> complement;     // the 4 complement pivots of V6
  SkewForm omega;                          // 4 x 4
  Vec v1;
};

/// Throws std::invalid_argument for a flag of the wrong shape and std::domain_error if
/// omega has rank < 4.
OmegaData omega_data(const Trivector& s, const Flag& flag);

/// U7^perp = (U7/V6)^perp + V6, of dimension 9. Throws std::invalid_argument unless U7 is
/// 7-dimensional and contains V6.
Subspace u7_perp(const OmegaData& od, const Subspace& u7);

/// sigma'_{U7}(l) = s_l on U7^perp / (l + V1), evaluated for many l with U7 fixed.
class SigmaPrime {
 public:
  SigmaPrime(const Trivector& s, const OmegaData& od, const Subspace& u7);
  const Subspace& perp() const noexcept { return perp_; }
  /// Rank of sigma'(l). l and v1 lie in the radical of s_l on U7^perp, so this equals the
  /// rank of s_l on U7^perp. Throws std::invalid_argument if l is not in U7 or lies in V6.
  std::size_t rank(std::span<const Elem> l) const;

 private:
  const Trivector* s_;
  const OmegaData* od_;
  Subspace u7_;
  Subspace perp_;
};

std::size_t sigma_prime_rank(const Trivector& s, const OmegaData& od, const Subspace& u7, std::span<const Elem> l);

/// Points of P(V4) \ P(V3) written l = v + a0 w0 + a1 w1 + a2 w2 with v the canonical
/// complement of V3 in V4 and w the basis of V3.
struct Thm21Frame {
  Vec v;
  Matrix w;  // 3 x n
  Vec point(std::span<const Elem> a) const;
};

/// Throws std::invalid_argument unless V3 < V4 have dimensions 3 and 4, and
/// std::domain_error if s(v, ., .) is not injective on V3.
Thm21Frame thm21_frame(const Trivector& s, const Subspace& v3, const Subspace& v4);

/// All a in F_p^3 (lexicographic) with rank s_l <= n - 4.
std::vector<Vec> thm21_fiber_exhaustive(const Trivector& s, const Subspace& v3, const Subspace& v4,
                                        const ScanOptions& opts = {});

/// V7 = {x : s(v, V3, x) = 0} does not depend on a because s(V3, V3, .) = 0, and the fiber
/// is the affine solution set of s(l, c_i, c_j) = 0 on a complement c of V4 in V7.
/// Returns std::nullopt for an empty fiber.
std::optional<AffineSolution> thm21_fiber_linear(const Trivector& s, const Subspace& v3, const Subspace& v4);

/// Every point of an affine solution set, lexicographic.
std::vector<Vec> affine_points(const PrimeField& f, const AffineSolution& sol);

/// Basis of U7^perp / U2 used by sigma'': g0, g1 span U7^perp/U7 and g2..g6 span U7/U2,
/// both canonical relative complements. g_k plays the role of a_k in B.
Matrix dprime_frame(const OmegaData& od, const Subspace& u7, std::span<const Elem> u);

/// sigma''([U2 < U7]) for U2 = V1 + <u>: the coordinates s(u, g_i, g_j) with the g0^g1
/// entry dropped. Linear in u; adding a multiple of v1 to u changes only the dropped entry.
BElement sigma_dprime(const Trivector& s, const OmegaData& od, const Subspace& u7, std::span<const Elem> u);

/// The trivector e1^(e0^e9 + e7^e8) + e0^x' in the dual basis of
/// b = (u, v1, g2..g6, g0, g1, v9), where x' is the lift of target with zero g0^g1 entry
/// (b_k for k >= 2 is g_k, b_7 = g0, b_8 = g1).
Trivector generating_trivector(const PrimeField& f, const Matrix& b, const BElement& target);

/// A random point [U2 < U7] (U2 = <u, v1>) together with a random 9-space containing U7
/// and a vector v9 outside it, arranged as the basis b of generating_trivector. For the
/// trivector built on b, V6 = <v1, g2..g6>, U7^perp is the chosen 9-space and the g's are
/// the canonical frame of dprime_frame.
struct GenerationFrame {
  Matrix basis;  // rows u, v1, g2..g6, g0, g1, v9
  Subspace u7;
  Flag flag;
};
GenerationFrame random_generation_frame(Rng& rng, const PrimeField& f);

struct QuadricPencil {
  Matrix qa, qb;      // symmetric 6 x 6
  Matrix fiber_basis; // rows r0..r5: U7 = V1 + <r>, the coordinates y of P(U7/V1)
  Subspace u7;
  bool degenerate = false;  // both quadrics vanish identically
};

/// y^T q y.
Elem quadric_value(const Matrix& q, std::span<const Elem> y);

/// Coordinates y of u mod V1 on fiber_basis. Throws std::invalid_argument if u is not in
/// U7.
Vec fiber_coordinates(const QuadricPencil& qp, std::span<const Elem> v1, std::span<const Elem> u);

/// For W = U7 + <g0> and U7 + <g1>, the quadric y -> Pf(s_u on C) / det(v1, u, C), C a
/// complement of U2 in W, interpolated from random nodes (21 monomials). Throws
/// std::domain_error if the node values are not those of a quadric.
QuadricPencil quadric_pencil(const Trivector& s, const OmegaData& od, const Subspace& u7, Rng& rng);

/// Rank of the 2 x 6 matrix (qa y; qb y). Throws std::invalid_argument unless y is a
/// common zero.
std::size_t singular_fiber_probe(const QuadricPencil& qp, std::span<const Elem> y);

struct FiberSingularities {
  std::uint64_t points = 0;    // common zeros in P^5(F_p)
  std::uint64_t singular = 0;  // Jacobian rank <= 1
};
FiberSingularities fiber_singularities(const QuadricPencil& qp, const ScanOptions& opts = {});

/// Common zeros of the pencil with no l' in P(U2) \ [V1] of rank s_l' <= n - 4, and how
/// many of those lie over U2 < V6.
struct ReverseCoverage {
  std::uint64_t common_zeros = 0;
  std::uint64_t uncovered = 0;
  std::uint64_t uncovered_in_v6 = 0;
};
ReverseCoverage reverse_coverage(const Trivector& s, const OmegaData& od, const QuadricPencil& qp,
                                 const ScanOptions& opts = {});

struct BirationalityCount {
  std::uint64_t count = 0;  // l' in P(U2) \ [V1] with sigma'-rank <= 4
  bool v1_on_locus = false; // rank s_v1 <= n - 4
};

/// Scans the p points l + a v1 of P(U2) \ [V1], U2 = V1 + <l>.
BirationalityCount birationality_probe(const Trivector& s, const OmegaData& od, const Subspace& u7,
                                       std::span<const Elem> l);

/// A point [l < U2 < U7] with l off V6 and sigma'-rank 4: U7 over a random point of
/// P(V/V6), U2 from a common zero of the pencil on a random plane of P^5, l on P(U2).
/// Throws BudgetExceeded after max_attempts planes.
struct X11Point {
  Subspace u7;
  Vec l;
};
X11Point sample_x11_point(const Trivector& s, const OmegaData& od, Rng& rng, std::size_t max_attempts = 200);

/// Random U7 = V6 + <c> for c off V6.
Subspace random_u7(const OmegaData& od, Rng& rng);

}  // namespace peskine
