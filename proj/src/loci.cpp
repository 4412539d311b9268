#include "peskine/loci.hpp"

#include <stdexcept>

namespace peskine {

bool peskine_member(const Trivector& s, std::span<const Elem> u) {
  if (u.size() != s.n()) throw std::invalid_argument("peskine_member: vector length mismatch");
  bool nonzero = false;
  for (auto x : u) nonzero |= x != 0;
  if (!nonzero) throw std::invalid_argument("peskine_member: zero vector");
  return contraction_rank(s, u) <= s.n() - 4;
}

bool dv_member(const Trivector& s, const Subspace& u6) {
  if (u6.dim() != 6 || u6.ambient_dim() != s.n()) throw std::invalid_argument("dv_member: expected a 6-dim subspace");
  const Matrix& b = u6.basis();
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j) {
      const Vec c = contract2(s, b.row(i), b.row(j));
      for (std::size_t k = j + 1; k < 6; ++k) {
        Elem acc = 0;
        for (std::size_t t = 0; t < s.n(); ++t) acc = s.field().fma(acc, c[t], b(k, t));
        if (acc != 0) return false;
      }
    }
  return true;
}

// ---------------------------------------------------------------------------
// CubicForm

const std::vector<CubicForm::Exponent>& CubicForm::monomials() {
  static const std::vector<Exponent> table = [] {
    std::vector<Exponent> out;
    for (std::size_t a = 0; a < kVars; ++a)
      for (std::size_t b = a; b < kVars; ++b)
        for (std::size_t c = b; c < kVars; ++c) {
          Exponent e{};
          ++e[a];
          ++e[b];
          ++e[c];
          out.push_back(e);
        }
    return out;
  }();
  return table;
}

namespace {

Elem monomial_value(const PrimeField& f, const CubicForm::Exponent& e, std::span<const Elem> x) {
  Elem v = 1;
  for (std::size_t i = 0; i < CubicForm::kVars; ++i)
    for (std::uint8_t k = 0; k < e[i]; ++k) v = f.mul(v, x[i]);
  return v;
}

}  // namespace

Elem CubicForm::eval(std::span<const Elem> x) const {
  if (x.size() != kVars) throw std::invalid_argument("CubicForm::eval expects 6 coordinates");
  const auto& mons = monomials();
  Elem acc = 0;
  for (std::size_t m = 0; m < kMonomials; ++m)
    if (coeffs_[m] != 0) acc = field_.fma(acc, coeffs_[m], monomial_value(field_, mons[m], x));
  return acc;
}

Vec CubicForm::gradient(std::span<const Elem> x) const {
  if (x.size() != kVars) throw std::invalid_argument("CubicForm::gradient expects 6 coordinates");
  const auto& mons = monomials();
  Vec g(kVars, 0);
  for (std::size_t m = 0; m < kMonomials; ++m) {
    if (coeffs_[m] == 0) continue;
    for (std::size_t v = 0; v < kVars; ++v) {
      if (mons[m][v] == 0) continue;
      Exponent e = mons[m];
      const Elem k = e[v]--;
      g[v] = field_.fma(g[v], field_.mul(coeffs_[m], k), monomial_value(field_, e, x));
    }
  }
  return g;
}

int CubicForm::total_degree() const {
  for (auto c : coeffs_)
    if (c != 0) return 3;
  return -1;
}

// ---------------------------------------------------------------------------

Elem pfaffian_ratio(const Trivector& s, std::span<const Elem> v1, std::span<const Elem> u) {
  const PrimeField& f = s.field();
  const std::size_t n = s.n();
  const Vec uv(u.begin(), u.end()), v1v(v1.begin(), v1.end());
  const Subspace plane = Subspace::span(f, n, std::vector<Vec>{uv, v1v});
  if (plane.dim() != 2) throw std::domain_error("pfaffian_ratio: u is proportional to v1");
  const auto comp = plane.complement_pivots();
  const SkewForm su = contract1(s, u);
  SkewForm r(f, comp.size());
  for (std::size_t a = 0; a < comp.size(); ++a)
    for (std::size_t b = a + 1; b < comp.size(); ++b) r.set(a, b, su(comp[a], comp[b]));
  Matrix frame(f, n, n);
  for (std::size_t j = 0; j < n; ++j) {
    frame(0, j) = u[j];
    frame(1, j) = v1[j];
  }
  for (std::size_t a = 0; a < comp.size(); ++a) frame(2 + a, comp[a]) = 1;
  return f.div(pfaffian(r), determinant(frame));
}

CubicInterpolation cubic_from_pfaffian(const Trivector& s, const Flag& flag, Rng& rng) {
  const PrimeField& f = s.field();
  if (f.p() < 5) throw std::invalid_argument("cubic_from_pfaffian needs p >= 5 (cubic monomials are not distinct functions below)");
  if (flag.dims() != flag_shape(DivisorKind::D1_6_10)) throw std::invalid_argument("cubic_from_pfaffian: flag must have shape (1,6)");
  const Vec v1 = flag[0].basis_vector(0);
  const Matrix& b6 = flag[1].basis();
  const auto& mons = CubicForm::monomials();

  std::vector<Vec> rows;
  Vec rhs;
  constexpr std::size_t kInitialNodes = 84, kMaxNodes = 400;
  while (rows.size() < kMaxNodes) {
    const Vec x = random_vector(rng, f, 6);
    Vec u(s.n(), 0);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < s.n(); ++j) u[j] = f.fma(u[j], x[i], b6(i, j));
    if (Subspace::span(f, s.n(), std::vector<Vec>{u, v1}).dim() != 2) continue;
    Vec row(CubicForm::kMonomials);
    for (std::size_t m = 0; m < CubicForm::kMonomials; ++m) row[m] = monomial_value(f, mons[m], x);
    rows.push_back(std::move(row));
    rhs.push_back(pfaffian_ratio(s, v1, u));
    if (rows.size() < kInitialNodes) continue;
    const auto sol = solve_affine(Matrix::from_rows(f, CubicForm::kMonomials, rows), rhs);
    if (!sol) throw std::domain_error("cubic_from_pfaffian: node values are not those of a cubic");
    if (sol->directions.dim() > 0) continue;  // nodes not yet in general position
    CubicInterpolation out{CubicForm(f), b6, rows.size()};
    for (std::size_t m = 0; m < CubicForm::kMonomials; ++m) out.cubic.coeff(m) = sol->particular[m];
    return out;
  }
  throw std::domain_error("cubic_from_pfaffian: interpolation nodes never reached full rank");
}

Vec cubic_singularity_probe(const CubicInterpolation& c, std::span<const Elem> v1) {
  const Subspace v6(c.v6_basis);
  const auto x = coordinates_in(v6, v1);
  if (!x) throw std::invalid_argument("cubic_singularity_probe: v1 is not in V6");
  return c.cubic.gradient(*x);
}

std::vector<Subspace> isotropic_extensions(const Trivector& s, const Flag& flag) {
  if (flag.dims() != flag_shape(DivisorKind::D1_6_10)) throw std::invalid_argument("isotropic_extensions: flag must have shape (1,6)");
  const PrimeField& f = s.field();
  const Subspace& v6 = flag[1];
  const auto comp = v6.complement_pivots();
  const SkewForm omega = contract1(s, flag[0].basis_vector(0));
  std::vector<Subspace> out;
  for (const auto& plane : all_subspaces(f, comp.size(), 2)) {
    Matrix lift(f, 2, s.n());
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t a = 0; a < comp.size(); ++a) lift(r, comp[a]) = plane.basis()(r, a);
    if (omega.apply(lift.row(0), lift.row(1)) != 0) continue;
    out.push_back(join(v6, Subspace(lift)));
  }
  return out;
}

K3Result k3_member(const Trivector& s, const Flag& flag, const Subspace& u8) {
  if (flag.dims() != flag_shape(DivisorKind::D1_6_10)) throw std::invalid_argument("k3_member: flag must have shape (1,6)");
  if (u8.dim() != 8 || !u8.contains(flag[1])) throw std::invalid_argument("k3_member: U8 must be 8-dim and contain V6");
  const PrimeField& f = s.field();
  const Vec v1 = flag[0].basis_vector(0);
  K3Result res;
  const SkewForm on_u8 = restrict_skew(contract1(s, v1), u8);
  if (!(on_u8 == SkewForm(f, 8))) return res;
  res.condition_a = true;

  // W = U8 / V1 with lifted basis rows; tau(x, y, z) = s on lifts (well defined by (a)).
  const Matrix w = relative_complement(flag[0], u8);
  const std::size_t k = w.rows();  // 7
  std::vector<SkewForm> tau_basis;
  for (std::size_t i = 0; i < k; ++i) tau_basis.push_back(restrict_skew(contract1(s, w.row(i)), w));

  auto lift = [&](std::span<const Elem> c) {
    Vec out(s.n(), 0);
    for (std::size_t i = 0; i < k; ++i)
      if (c[i] != 0)
        for (std::size_t j = 0; j < s.n(); ++j) out[j] = f.fma(out[j], c[i], w(i, j));
    return out;
  };

  Vec a(k);
  projective_point(f.p(), 0, a);
  do {
    SkewForm tau_a(f, k);
    for (std::size_t i = 0; i < k; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = x + 1; y < k; ++y) tau_a.add(x, y, f.mul(a[i], tau_basis[i](x, y)));
    }
    if (skew_rank(tau_a) > 4) continue;
    const Subspace ker = kernel_of(tau_a.matrix());
    const Subspace line = Subspace::span(f, k, std::vector<Vec>{a});
    const Matrix rest = relative_complement(line, ker);
    for (const auto& plane : all_subspaces(f, rest.rows(), 2)) {
      const Matrix t = plane.basis() * rest;  // two vectors of W coordinates
      const Vec c = contract2(s, lift(t.row(0)), lift(t.row(1)));
      bool zero = true;
      for (std::size_t i = 0; i < k && zero; ++i) {
        Elem acc = 0;
        for (std::size_t j = 0; j < s.n(); ++j) acc = f.fma(acc, c[j], w(i, j));
        zero = acc == 0;
      }
      if (!zero) continue;
      res.member = true;
      res.u4 = Subspace::span(f, s.n(), std::vector<Vec>{v1, lift(a), lift(t.row(0)), lift(t.row(1))});
      return res;
    }
  } while (next_projective(f.p(), a));
  return res;
}

std::vector<Subspace> conic_fiber(const Trivector& s, const Subspace& v4, const Subspace& v8) {
  if (v4.dim() != 4 || v8.dim() != 8 || !v8.contains(v4)) throw std::invalid_argument("conic_fiber: need V4 inside V8");
  const Matrix q = relative_complement(v4, v8);
  std::vector<Subspace> out;
  for (const auto& plane : all_subspaces(s.field(), q.rows(), 2)) {
    const Subspace u6 = join(v4, Subspace(plane.basis() * q));
    if (dv_member(s, u6)) out.push_back(u6);
  }
  return out;
}

}  // namespace peskine
