#pragma once

#include <array>
#include <map>
#include <optional>
#include <utility>

#include "peskine/trivector.hpp"

namespace peskine {

// Coordinates on A = F_p^7 with basis a0..a6 and A2 = <a0, a1>. B = wedge^2 A / wedge^2 A2
// has the 20 coordinates b_ij, 0 <= i < j <= 6, (i,j) != (0,1), in lexicographic order.

inline constexpr std::size_t kBDim = 20;

/// Position of b_ij in a BElement; throws std::out_of_range for (0,1) or an invalid pair.
std::size_t b_index(std::size_t i, std::size_t j);
std::pair<std::size_t, std::size_t> b_pair(std::size_t index);

struct BElement {
  std::array<Elem, kBDim> c{};
  bool operator==(const BElement&) const = default;
};

/// Drops the a0^a1 coordinate of a 7x7 skew form.
BElement project_to_B(const SkewForm& b);
/// The lift with zero a0^a1 coordinate, plus s * a0^a1.
SkewForm lift(const PrimeField& f, const BElement& b, Elem s = 0);
BElement to_belement(std::span<const Elem> coords);

/// Sparse polynomial of degree <= 3 in the 20 B-coordinates. A monomial is a sorted
/// triple of variable indices; kNoVar pads lower degrees.
class Poly20 {
 public:
  static constexpr int kNoVar = -1;
  using Monomial = std::array<int, 3>;

  explicit Poly20(const PrimeField& f) : field_(f) {}

  const PrimeField& field() const noexcept { return field_; }
  const std::map<Monomial, Elem>& terms() const noexcept { return terms_; }
  void add_term(Monomial m, Elem c);

  Elem eval(std::span<const Elem> x) const;
  Poly20 derivative(int var) const;
  bool mentions(int var) const;
  int degree() const;

 private:
  PrimeField field_;
  std::map<Monomial, Elem> terms_;
};

/// Symbolic Pfaffian of the principal submatrix of the generic B-form on `indices`
/// (six increasing indices of A, not containing both 0 and 1).
Poly20 pfaffian_poly(const PrimeField& f, const std::array<std::size_t, 6>& indices);

struct PencilCubics {
  Poly20 f1;  // Pf(b mod a1) on (a0, a2..a6)
  Poly20 f2;  // Pf(b mod a0) on (a1, a2..a6)
  std::vector<Poly20> grad1;  // d f1 / d b_k, k = 0..19
  std::vector<Poly20> grad2;
};

/// Expanded once per field.
PencilCubics pencil_cubics(const PrimeField& f);

/// Pf(b mod l) for l = alpha a0 + beta a1 (not both zero). For beta != 0 the quotient
/// basis is (a0, a2..a6) with a1 -> -(alpha/beta) a0 and the result is multiplied by
/// beta^3; for beta = 0 the basis is (a1, a2..a6).
Elem pf_mod_line(const PrimeField& f, const BElement& b, Elem alpha, Elem beta);

bool o2_member(const PencilCubics& pc, const BElement& b);
/// F1 = F2 = 0 and the 2 x 20 Jacobian has rank <= 1.
bool sing_o2_member(const PencilCubics& pc, const BElement& b);

/// Parameters of l^v + m^u + t u1^u2: l = alpha a0 + beta a1, m = a1 if alpha != 0
/// else a0; u1, u2 span a plane in <a2..a6>; v in <a2..a6>; u in <u1, u2>.
struct O5Params {
  Elem alpha = 1, beta = 0;
  Vec u1, u2, v;  // length 7
  Elem d1 = 0, d2 = 0, t = 0;  // u = d1 u1 + d2 u2
};

BElement o5_build(const PrimeField& f, const O5Params& params);
O5Params o5_random_params(Rng& rng, const PrimeField& f);
BElement o5_sample(Rng& rng, const PrimeField& f);

/// Affine chart of the 15-dimensional family: x = (c, X (2x3), v2..v6, d1, d2, t) with
/// l = a0 + c a1, m = a1, u1 = a2 + X00 a4 + X01 a5 + X02 a6, u2 = a3 + X10 a4 + ...
inline constexpr std::size_t kO5ParamDim = 15;
O5Params o5_chart(const PrimeField& f, std::span<const Elem> x);
/// Exact 20 x 15 Jacobian of the chart map at x.
Matrix o5_jacobian(const PrimeField& f, std::span<const Elem> x);

/// Rank of the image of b in wedge^2(A/A2), the block on a2..a6.
std::size_t mod_a2_rank(const PrimeField& f, const BElement& b);
/// Some lift b + s a0^a1 has rank 4 and the image of b in wedge^2(A/A2) has rank 2.
bool o5_sufficient_member(const PrimeField& f, const BElement& b);

/// Writes b as o5_build(params): b = a0^x + a1^y + w with w of rank 2 on <a2..a6>, and
/// one of x, y congruent to an element of the plane of w. std::nullopt if no such form.
std::optional<O5Params> o5_normal_form(const PrimeField& f, const BElement& b);

}  // namespace peskine
