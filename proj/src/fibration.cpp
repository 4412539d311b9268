#include "peskine/fibration.hpp"

#include <algorithm>
#include <stdexcept>

#include "peskine/loci.hpp"

namespace peskine {

namespace {

Vec combine(const PrimeField& f, std::span<const Elem> coeffs, const Matrix& rows) {
  Vec out(rows.cols(), 0);
  for (std::size_t i = 0; i < rows.rows(); ++i)
    if (coeffs[i] != 0)
      for (std::size_t j = 0; j < rows.cols(); ++j) out[j] = f.fma(out[j], coeffs[i], rows(i, j));
  return out;
}

Subspace span_of(const PrimeField& f, std::size_t n, std::vector<Vec> vs) { return Subspace::span(f, n, vs); }

bool is_zero(std::span<const Elem> v) {
  for (auto x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace

OmegaData omega_data(const Trivector& s, const Flag& flag) {
  if (flag.dims() != flag_shape(DivisorKind::D1_6_10)) throw std::invalid_argument("omega_data: flag must have shape (1,6)");
  OmegaData od{flag, flag[1].complement_pivots(), SkewForm(s.field(), 4), flag[0].basis_vector(0)};
  const SkewForm full = contract1(s, od.v1);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b) od.omega.set(a, b, full(od.complement[a], od.complement[b]));
  if (skew_rank(od.omega) != 4) throw std::domain_error("omega_data: omega is degenerate");
  return od;
}

Subspace u7_perp(const OmegaData& od, const Subspace& u7) {
  const Subspace& v6 = od.flag[1];
  if (u7.dim() != 7 || !u7.contains(v6)) throw std::invalid_argument("u7_perp: U7 must be 7-dim and contain V6");
  const PrimeField& f = u7.field();
  const std::size_t n = u7.ambient_dim();
  const Vec q = quotient_coords(relative_complement(v6, u7).row(0), v6, od.complement);
  Matrix row(f, 1, 4);
  for (std::size_t b = 0; b < 4; ++b) {
    Elem acc = 0;
    for (std::size_t a = 0; a < 4; ++a) acc = f.fma(acc, q[a], od.omega(a, b));
    row(0, b) = acc;
  }
  const Subspace perp4 = kernel_of(row);
  Matrix lifted(f, perp4.dim(), n);
  for (std::size_t i = 0; i < perp4.dim(); ++i)
    for (std::size_t a = 0; a < 4; ++a) lifted(i, od.complement[a]) = perp4.basis()(i, a);
  return join(v6, Subspace(lifted));
}

SigmaPrime::SigmaPrime(const Trivector& s, const OmegaData& od, const Subspace& u7)
    : s_(&s), od_(&od), u7_(u7), perp_(u7_perp(od, u7)) {}

std::size_t SigmaPrime::rank(std::span<const Elem> l) const {
  if (!u7_.contains(l)) throw std::invalid_argument("sigma_prime_rank: l is not in U7");
  if (od_->flag[1].contains(l)) throw std::invalid_argument("sigma_prime_rank: l lies in V6");
  return skew_rank(restrict_skew(contract1(*s_, l), perp_));
}

std::size_t sigma_prime_rank(const Trivector& s, const OmegaData& od, const Subspace& u7, std::span<const Elem> l) {
  return SigmaPrime(s, od, u7).rank(l);
}

// ---------------------------------------------------------------------------

Vec Thm21Frame::point(std::span<const Elem> a) const {
  const PrimeField& f = w.field();
  Vec l = v;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < l.size(); ++j) l[j] = f.fma(l[j], a[i], w(i, j));
  return l;
}

Thm21Frame thm21_frame(const Trivector& s, const Subspace& v3, const Subspace& v4) {
  if (v3.dim() != 3 || v4.dim() != 4 || !v4.contains(v3)) throw std::invalid_argument("thm21: need V3 < V4 of dimensions 3, 4");
  Thm21Frame fr{relative_complement(v3, v4).row_vec(0), v3.basis()};
  const SkewForm sv = contract1(s, fr.v);
  if (rank(fr.w * sv.matrix()) != 3) throw std::domain_error("thm21: s(v, ., .) is not injective on V3");
  return fr;
}

std::vector<Vec> thm21_fiber_exhaustive(const Trivector& s, const Subspace& v3, const Subspace& v4,
                                        const ScanOptions& opts) {
  const Thm21Frame fr = thm21_frame(s, v3, v4);
  const std::size_t bound = s.n() - 4;
  return enumerate_affine(
             s.field(), 3, [&](std::span<const Elem> a) { return contraction_rank(s, fr.point(a)) <= bound; }, opts)
      .points;
}

std::optional<AffineSolution> thm21_fiber_linear(const Trivector& s, const Subspace& v3, const Subspace& v4) {
  const PrimeField& f = s.field();
  const Thm21Frame fr = thm21_frame(s, v3, v4);
  const Subspace v7 = kernel_of(fr.w * contract1(s, fr.v).matrix());
  const Matrix c = relative_complement(v4, v7);
  const std::pair<std::size_t, std::size_t> pairs[3] = {{0, 1}, {0, 2}, {1, 2}};
  Matrix a(f, 3, 3);
  Vec b(3);
  for (std::size_t e = 0; e < 3; ++e) {
    const auto [j, k] = pairs[e];
    b[e] = f.neg(eval3(s, fr.v, c.row(j), c.row(k)));
    for (std::size_t i = 0; i < 3; ++i) a(e, i) = eval3(s, fr.w.row(i), c.row(j), c.row(k));
  }
  return solve_affine(a, b);
}

std::vector<Vec> affine_points(const PrimeField& f, const AffineSolution& sol) {
  const std::size_t d = sol.directions.dim();
  std::vector<Vec> out;
  const std::uint64_t total = affine_count(f.p(), d);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Vec t(d);
    for (std::size_t i = d, x = idx; i-- > 0; x /= f.p()) t[i] = static_cast<Elem>(x % f.p());
    Vec pt = sol.particular;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < pt.size(); ++j) pt[j] = f.fma(pt[j], t[i], sol.directions.basis()(i, j));
    out.push_back(std::move(pt));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

Matrix dprime_frame(const OmegaData& od, const Subspace& u7, std::span<const Elem> u) {
  const PrimeField& f = u7.field();
  const std::size_t n = u7.ambient_dim();
  if (!u7.contains(u)) throw std::invalid_argument("sigma_dprime: u is not in U7");
  const Subspace u2 = span_of(f, n, {od.v1, Vec(u.begin(), u.end())});
  if (u2.dim() != 2) throw std::invalid_argument("sigma_dprime: u lies in V1");
  const Subspace perp = u7_perp(od, u7);
  const Matrix outer = relative_complement(u7, perp);
  const Matrix inner = relative_complement(u2, u7);
  Matrix g(f, 7, n);
  for (std::size_t j = 0; j < n; ++j) {
    g(0, j) = outer(0, j);
    g(1, j) = outer(1, j);
    for (std::size_t k = 0; k < 5; ++k) g(2 + k, j) = inner(k, j);
  }
  return g;
}

BElement sigma_dprime(const Trivector& s, const OmegaData& od, const Subspace& u7, std::span<const Elem> u) {
  const Matrix g = dprime_frame(od, u7, u);
  return project_to_B(restrict_skew(contract1(s, u), g));
}

Trivector generating_trivector(const PrimeField& f, const Matrix& b, const BElement& target) {
  if (b.rows() != 10 || b.cols() != 10) throw std::invalid_argument("generating_trivector: need a 10 x 10 basis");
  Trivector std_form(f, 10);
  std_form.add(1, 0, 9, 1);
  std_form.add(1, 7, 8, 1);
  const auto pos = [](std::size_t k) -> std::size_t { return k == 0 ? 7 : k == 1 ? 8 : k; };
  for (std::size_t idx = 0; idx < kBDim; ++idx) {
    const auto [i, j] = b_pair(idx);
    std_form.add(0, pos(i), pos(j), target.c[idx]);
  }
  Matrix g(f, 10, 10);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) g(j, i) = b(i, j);
  return gl_act(g, std_form);
}

GenerationFrame random_generation_frame(Rng& rng, const PrimeField& f) {
  constexpr std::size_t n = 10;
  const Subspace u7 = sample_subspace(rng, f, n, 7);
  const Vec v1 = u7.basis_vector(0);
  Vec u;
  do {
    u = combine(f, random_vector(rng, f, 7), u7.basis());
  } while (span_of(f, n, {v1, u}).dim() != 2);
  Subspace perp = u7;
  while (perp.dim() < 9) perp = join(perp, span_of(f, n, {random_vector(rng, f, n)}));
  Vec v9;
  do {
    v9 = random_vector(rng, f, n);
  } while (perp.contains(v9));
  const Matrix outer = relative_complement(u7, perp);
  const Matrix inner = relative_complement(span_of(f, n, {v1, u}), u7);
  Matrix b(f, n, n);
  std::vector<Vec> v6{v1};
  for (std::size_t j = 0; j < n; ++j) {
    b(0, j) = u[j];
    b(1, j) = v1[j];
    for (std::size_t k = 0; k < 5; ++k) b(2 + k, j) = inner(k, j);
    b(7, j) = outer(0, j);
    b(8, j) = outer(1, j);
    b(9, j) = v9[j];
  }
  for (std::size_t k = 0; k < 5; ++k) v6.push_back(inner.row_vec(k));
  return {b, u7, Flag({span_of(f, n, {v1}), span_of(f, n, v6)})};
}

// ---------------------------------------------------------------------------

Elem quadric_value(const Matrix& q, std::span<const Elem> y) {
  const PrimeField& f = q.field();
  Elem acc = 0;
  for (std::size_t i = 0; i < q.rows(); ++i) {
    if (y[i] == 0) continue;
    Elem row = 0;
    for (std::size_t j = 0; j < q.cols(); ++j) row = f.fma(row, q(i, j), y[j]);
    acc = f.fma(acc, y[i], row);
  }
  return acc;
}

Vec fiber_coordinates(const QuadricPencil& qp, std::span<const Elem> v1, std::span<const Elem> u) {
  const PrimeField& f = qp.fiber_basis.field();
  const std::size_t n = qp.fiber_basis.cols();
  Matrix cols(f, n, 7);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < 6; ++i) cols(j, i) = qp.fiber_basis(i, j);
    cols(j, 6) = v1[j];
  }
  const auto sol = solve_affine(cols, u);
  if (!sol) throw std::invalid_argument("fiber_coordinates: vector is not in U7");
  return Vec(sol->particular.begin(), sol->particular.begin() + 6);
}

namespace {

// Pf(s_u on the canonical complement C of <v1, u> in w) / det(v1, u, C) in w-coordinates.
Elem pencil_ratio(const Trivector& s, const Subspace& w, std::span<const Elem> v1, std::span<const Elem> u) {
  const PrimeField& f = s.field();
  const Subspace u2 = span_of(f, s.n(), {Vec(v1.begin(), v1.end()), Vec(u.begin(), u.end())});
  const Matrix c = relative_complement(u2, w);
  const Elem pf = pfaffian(restrict_skew(contract1(s, u), c));
  const std::size_t d = w.dim();
  Matrix frame(f, d, d);
  auto put = [&](std::size_t r, std::span<const Elem> v) {
    const Vec x = *coordinates_in(w, v);
    for (std::size_t j = 0; j < d; ++j) frame(r, j) = x[j];
  };
  put(0, v1);
  put(1, u);
  for (std::size_t i = 0; i < c.rows(); ++i) put(2 + i, c.row(i));
  return f.div(pf, determinant(frame));
}

Matrix interpolate_quadric(const Trivector& s, const Subspace& w, const Vec& v1, const Matrix& basis, Rng& rng) {
  const PrimeField& f = s.field();
  constexpr std::size_t kMonos = 21, kInitial = 35, kMax = 300;
  std::vector<std::pair<std::size_t, std::size_t>> monos;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i; j < 6; ++j) monos.emplace_back(i, j);
  std::vector<Vec> rows;
  Vec rhs;
  while (rows.size() < kMax) {
    const Vec y = random_vector(rng, f, 6);
    if (is_zero(y)) continue;
    Vec row(kMonos);
    for (std::size_t m = 0; m < kMonos; ++m) row[m] = f.mul(y[monos[m].first], y[monos[m].second]);
    rows.push_back(std::move(row));
    rhs.push_back(pencil_ratio(s, w, v1, combine(f, y, basis)));
    if (rows.size() < kInitial) continue;
    const auto sol = solve_affine(Matrix::from_rows(f, kMonos, rows), rhs);
    if (!sol) throw std::domain_error("quadric_pencil: node values are not those of a quadric");
    if (sol->directions.dim() > 0) continue;
    Matrix q(f, 6, 6);
    const Elem half = f.inv(2);
    for (std::size_t m = 0; m < kMonos; ++m) {
      const auto [i, j] = monos[m];
      if (i == j) {
        q(i, i) = sol->particular[m];
      } else {
        q(i, j) = q(j, i) = f.mul(sol->particular[m], half);
      }
    }
    return q;
  }
  throw std::domain_error("quadric_pencil: interpolation nodes never reached full rank");
}

}  // namespace

QuadricPencil quadric_pencil(const Trivector& s, const OmegaData& od, const Subspace& u7, Rng& rng) {
  const PrimeField& f = s.field();
  const Subspace perp = u7_perp(od, u7);
  const Matrix g = relative_complement(u7, perp);
  QuadricPencil qp{Matrix(f, 6, 6), Matrix(f, 6, 6), relative_complement(od.flag[0], u7), u7, false};
  const Subspace wa = join(u7, span_of(f, s.n(), {g.row_vec(0)}));
  const Subspace wb = join(u7, span_of(f, s.n(), {g.row_vec(1)}));
  qp.qa = interpolate_quadric(s, wa, od.v1, qp.fiber_basis, rng);
  qp.qb = interpolate_quadric(s, wb, od.v1, qp.fiber_basis, rng);
  qp.degenerate = qp.qa == Matrix(f, 6, 6) && qp.qb == Matrix(f, 6, 6);
  return qp;
}

std::size_t singular_fiber_probe(const QuadricPencil& qp, std::span<const Elem> y) {
  if (y.size() != 6 || is_zero(y)) throw std::invalid_argument("singular_fiber_probe: need a nonzero point of F_p^6");
  if (quadric_value(qp.qa, y) != 0 || quadric_value(qp.qb, y) != 0)
    throw std::invalid_argument("singular_fiber_probe: point is not on both quadrics");
  const Vec ya(y.begin(), y.end());
  const Vec ga = qp.qa * ya, gb = qp.qb * ya;
  return rank(Matrix::from_rows(qp.qa.field(), 6, std::vector<Vec>{ga, gb}));
}

FiberSingularities fiber_singularities(const QuadricPencil& qp, const ScanOptions& opts) {
  const PrimeField& f = qp.qa.field();
  const auto zeros = enumerate_projective(
      f, 6, [&](std::span<const Elem> y) { return quadric_value(qp.qa, y) == 0 && quadric_value(qp.qb, y) == 0; }, opts);
  FiberSingularities out;
  out.points = zeros.count;
  for (const auto& y : zeros.points) out.singular += singular_fiber_probe(qp, y) <= 1;
  return out;
}

ReverseCoverage reverse_coverage(const Trivector& s, const OmegaData& od, const QuadricPencil& qp,
                                 const ScanOptions& opts) {
  const PrimeField& f = s.field();
  const auto zeros = enumerate_projective(
      f, 6, [&](std::span<const Elem> y) { return quadric_value(qp.qa, y) == 0 && quadric_value(qp.qb, y) == 0; }, opts);
  ReverseCoverage out;
  out.common_zeros = zeros.count;
  for (const auto& y : zeros.points) {
    const Vec u = combine(f, y, qp.fiber_basis);
    bool covered = false;
    for (Elem a = 0; a < f.p() && !covered; ++a) {
      Vec l = u;
      for (std::size_t j = 0; j < l.size(); ++j) l[j] = f.fma(l[j], a, od.v1[j]);
      covered = peskine_member(s, l);
    }
    if (covered) continue;
    ++out.uncovered;
    out.uncovered_in_v6 += od.flag[1].contains(u);
  }
  return out;
}

// ---------------------------------------------------------------------------

BirationalityCount birationality_probe(const Trivector& s, const OmegaData& od, const Subspace& u7,
                                       std::span<const Elem> l) {
  const PrimeField& f = s.field();
  const SigmaPrime sp(s, od, u7);
  BirationalityCount out;
  for (Elem a = 0; a < f.p(); ++a) {
    Vec lp(l.begin(), l.end());
    for (std::size_t j = 0; j < lp.size(); ++j) lp[j] = f.fma(lp[j], a, od.v1[j]);
    out.count += sp.rank(lp) <= 4;
  }
  out.v1_on_locus = contraction_rank(s, od.v1) <= s.n() - 4;
  return out;
}

Subspace random_u7(const OmegaData& od, Rng& rng) {
  const Subspace& v6 = od.flag[1];
  const PrimeField& f = v6.field();
  for (;;) {
    const Vec c = random_vector(rng, f, v6.ambient_dim());
    if (!v6.contains(c)) return join(v6, span_of(f, v6.ambient_dim(), {c}));
  }
}

X11Point sample_x11_point(const Trivector& s, const OmegaData& od, Rng& rng, std::size_t max_attempts) {
  const PrimeField& f = s.field();
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    const Subspace u7 = random_u7(od, rng);
    const QuadricPencil qp = quadric_pencil(s, od, u7, rng);
    const Matrix plane = sample_subspace(rng, f, 6, 3).basis();
    const auto hits = enumerate_projective(plane, [&](std::span<const Elem> y) {
      return quadric_value(qp.qa, y) == 0 && quadric_value(qp.qb, y) == 0;
    });
    const SigmaPrime sp(s, od, u7);
    for (const auto& y : hits.points) {
      const Vec u = combine(f, y, qp.fiber_basis);
      if (od.flag[1].contains(u)) continue;
      for (Elem a = 0; a < f.p(); ++a) {
        Vec l = u;
        for (std::size_t j = 0; j < l.size(); ++j) l[j] = f.fma(l[j], a, od.v1[j]);
        if (sp.rank(l) <= 4) return {u7, l};
      }
    }
  }
  throw BudgetExceeded("sample_x11_point: no point found within the attempt budget");
}

}  // namespace peskine
