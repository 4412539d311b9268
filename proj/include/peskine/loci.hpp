#pragma once

#include <optional>

#include "peskine/divisors.hpp"

namespace peskine {

/// rank s(u, ., .) <= n - 4. Throws std::invalid_argument for u = 0.
bool peskine_member(const Trivector& s, std::span<const Elem> u);

/// s vanishes on every basis triple of the 6-dimensional space u6.
bool dv_member(const Trivector& s, const Subspace& u6);

/// Homogeneous cubic in six variables; coefficients indexed by the degree-3 exponent
/// vectors in lexicographic order (x0^3, x0^2 x1, ..., x5^3).
class CubicForm {
 public:
  static constexpr std::size_t kVars = 6;
  static constexpr std::size_t kMonomials = 56;
  using Exponent = std::array<std::uint8_t, kVars>;

  explicit CubicForm(const PrimeField& f) : field_(f), coeffs_(kMonomials, 0) {}

  static const std::vector<Exponent>& monomials();

  const PrimeField& field() const noexcept { return field_; }
  const Vec& coeffs() const noexcept { return coeffs_; }
  Elem& coeff(std::size_t i) { return coeffs_.at(i); }

  Elem eval(std::span<const Elem> x) const;
  /// The six formal partial derivatives at x.
  Vec gradient(std::span<const Elem> x) const;
  /// 3 if some coefficient is nonzero, else -1.
  int total_degree() const;

 private:
  PrimeField field_;
  Vec coeffs_;
};

/// Value at u in V6 \ V1 of Pf(s_u on the canonical complement C of <u, v1>) divided by
/// det(u, v1, C). Independent of the complement; homogeneous of degree 3 in u.
Elem pfaffian_ratio(const Trivector& s, std::span<const Elem> v1, std::span<const Elem> u);

struct CubicInterpolation {
  CubicForm cubic;
  Matrix v6_basis;        // the cubic's variables are coordinates on these rows
  std::size_t nodes = 0;  // interpolation nodes used
};

/// Interpolates pfaffian_ratio on P(V6) from random nodes (more than 56, checked for
/// consistency). Requires p > 3 and a verified D1_6_10 flag. Throws std::domain_error
/// if the nodes never reach full rank or the data is not a cubic.
CubicInterpolation cubic_from_pfaffian(const Trivector& s, const Flag& flag, Rng& rng);

/// Gradient of the cubic at the coordinates of v1 on v6_basis.
Vec cubic_singularity_probe(const CubicInterpolation& c, std::span<const Elem> v1);

/// Points of P(V/V6) for the 2-form omega = s(v1, ., .) descended to the quotient.
/// Returns the 8-dimensional U8 = V6 + lift(P) for every omega-isotropic 2-plane P.
std::vector<Subspace> isotropic_extensions(const Trivector& s, const Flag& flag);

struct K3Result {
  bool condition_a = false;     // s(v1, U8, U8) = 0
  bool member = false;          // condition (a) and a 3-plane T exists
  std::optional<Subspace> u4;   // V1 + lift(T) for the first T found by the scan
};

/// Decides whether U8 (containing V6) carries a 3-plane T in U8/V1 with s(T, T, U8) = 0.
/// Every such T contains a point a whose contraction on U8/V1 has rank <= 4 and lies in
/// its kernel, so the scan runs over P(U8/V1) in canonical order and then over planes of
/// that kernel modulo a.
K3Result k3_member(const Trivector& s, const Flag& flag, const Subspace& u8);

/// All 6-spaces V4 + lift(T), T in Gr(2, V8/V4)(F_p), on which s vanishes.
std::vector<Subspace> conic_fiber(const Trivector& s, const Subspace& v4, const Subspace& v8);

}  // namespace peskine
