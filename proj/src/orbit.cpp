#include "peskine/orbit.hpp"

#include <algorithm>
#include <stdexcept>

namespace peskine {

std::size_t b_index(std::size_t i, std::size_t j) {
  if (!(i < j && j < 7) || (i == 0 && j == 1)) throw std::out_of_range("not a B coordinate");
  // Lexicographic position among all 21 pairs; (0,1) is position 0 and is skipped.
  std::size_t idx = 0;
  for (std::size_t a = 0; a < i; ++a) idx += 6 - a;
  return idx + (j - i - 1) - 1;
}

std::pair<std::size_t, std::size_t> b_pair(std::size_t index) {
  if (index >= kBDim) throw std::out_of_range("B coordinate index out of range");
  std::size_t k = index + 1;
  for (std::size_t i = 0; i < 7; ++i) {
    if (k < 6 - i) return {i, i + 1 + k};
    k -= 6 - i;
  }
  throw std::out_of_range("B coordinate index out of range");
}

BElement project_to_B(const SkewForm& b) {
  if (b.dim() != 7) throw std::invalid_argument("project_to_B expects a 7x7 form");
  BElement out;
  for (std::size_t k = 0; k < kBDim; ++k) {
    const auto [i, j] = b_pair(k);
    out.c[k] = b(i, j);
  }
  return out;
}

SkewForm lift(const PrimeField& f, const BElement& b, Elem s) {
  SkewForm m(f, 7);
  for (std::size_t k = 0; k < kBDim; ++k) {
    const auto [i, j] = b_pair(k);
    m.set(i, j, b.c[k]);
  }
  m.set(0, 1, s);
  return m;
}

BElement to_belement(std::span<const Elem> coords) {
  if (coords.size() != kBDim) throw std::invalid_argument("B element needs 20 coordinates");
  BElement b;
  std::copy(coords.begin(), coords.end(), b.c.begin());
  return b;
}

// ---------------------------------------------------------------------------
// Poly20

void Poly20::add_term(Monomial m, Elem c) {
  std::sort(m.begin(), m.end());
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second = field_.add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

Elem Poly20::eval(std::span<const Elem> x) const {
  Elem acc = 0;
  for (const auto& [m, c] : terms_) {
    Elem t = c;
    for (int v : m)
      if (v != kNoVar) t = field_.mul(t, x[static_cast<std::size_t>(v)]);
    acc = field_.add(acc, t);
  }
  return acc;
}

Poly20 Poly20::derivative(int var) const {
  Poly20 out(field_);
  for (const auto& [m, c] : terms_) {
    const auto k = std::count(m.begin(), m.end(), var);
    if (k == 0) continue;
    Monomial rest = m;
    *std::find(rest.begin(), rest.end(), var) = kNoVar;
    out.add_term(rest, field_.mul(c, field_.from_int(k)));
  }
  return out;
}

bool Poly20::mentions(int var) const {
  for (const auto& [m, c] : terms_)
    if (std::count(m.begin(), m.end(), var) > 0) return true;
  return false;
}

int Poly20::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_)
    d = std::max(d, static_cast<int>(std::count_if(m.begin(), m.end(), [](int v) { return v != kNoVar; })));
  return d;
}

namespace {

// Perfect matchings of `idx` with first-row expansion signs (same convention as pfaffian()).
void expand_pf(const PrimeField& f, std::vector<std::size_t> idx, Elem sign, std::vector<int>& vars, Poly20& out) {
  if (idx.empty()) {
    Poly20::Monomial m{Poly20::kNoVar, Poly20::kNoVar, Poly20::kNoVar};
    std::copy(vars.begin(), vars.end(), m.begin());
    out.add_term(m, sign);
    return;
  }
  const std::size_t first = idx[0];
  for (std::size_t pos = 1; pos < idx.size(); ++pos) {
    std::vector<std::size_t> rest;
    for (std::size_t q = 1; q < idx.size(); ++q)
      if (q != pos) rest.push_back(idx[q]);
    vars.push_back(static_cast<int>(b_index(first, idx[pos])));
    expand_pf(f, rest, pos % 2 == 1 ? sign : f.neg(sign), vars, out);
    vars.pop_back();
  }
}

}  // namespace

Poly20 pfaffian_poly(const PrimeField& f, const std::array<std::size_t, 6>& indices) {
  if (!std::is_sorted(indices.begin(), indices.end()) || indices[5] > 6 ||
      std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw std::invalid_argument("pfaffian_poly needs six increasing indices of A");
  }
  if (indices[0] == 0 && indices[1] == 1) throw std::invalid_argument("pfaffian_poly: indices contain a0 and a1");
  Poly20 out(f);
  std::vector<int> vars;
  expand_pf(f, {indices.begin(), indices.end()}, 1, vars, out);
  return out;
}

PencilCubics pencil_cubics(const PrimeField& f) {
  PencilCubics pc{pfaffian_poly(f, {0, 2, 3, 4, 5, 6}), pfaffian_poly(f, {1, 2, 3, 4, 5, 6}), {}, {}};
  for (std::size_t v = 0; v < kBDim; ++v) {
    pc.grad1.push_back(pc.f1.derivative(static_cast<int>(v)));
    pc.grad2.push_back(pc.f2.derivative(static_cast<int>(v)));
  }
  return pc;
}

Elem pf_mod_line(const PrimeField& f, const BElement& b, Elem alpha, Elem beta) {
  if (alpha == 0 && beta == 0) throw std::invalid_argument("pf_mod_line: (0:0) is not a point of P^1");
  const SkewForm m = lift(f, b);
  SkewForm q(f, 6);
  // quotient basis index r -> A index; row 0 is a0 (beta != 0) or a1 (beta == 0)
  const std::size_t head = beta != 0 ? 0 : 1;
  const Elem shift = beta != 0 ? f.neg(f.div(alpha, beta)) : 0;  // a1 -> shift * a0
  for (std::size_t c = 2; c < 7; ++c) {
    Elem e = m(head, c);
    if (beta != 0) e = f.fma(e, shift, m(1, c));
    q.set(0, c - 1, e);
    for (std::size_t d = c + 1; d < 7; ++d) q.set(c - 1, d - 1, m(c, d));
  }
  const Elem pf = pfaffian(q);
  return beta != 0 ? f.mul(pf, f.pow(beta, 3)) : pf;
}

bool o2_member(const PencilCubics& pc, const BElement& b) { return pc.f1.eval(b.c) == 0 && pc.f2.eval(b.c) == 0; }

bool sing_o2_member(const PencilCubics& pc, const BElement& b) {
  if (!o2_member(pc, b)) return false;
  const PrimeField& f = pc.f1.field();
  Elem g1[kBDim], g2[kBDim];
  for (std::size_t k = 0; k < kBDim; ++k) {
    g1[k] = pc.grad1[k].eval(b.c);
    g2[k] = pc.grad2[k].eval(b.c);
  }
  for (std::size_t i = 0; i < kBDim; ++i)
    for (std::size_t j = i + 1; j < kBDim; ++j)
      if (f.mul(g1[i], g2[j]) != f.mul(g1[j], g2[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// O5 family

namespace {

struct Dual {
  Elem v = 0, d = 0;
};

struct PlainOps {
  const PrimeField& f;
  Elem add(Elem a, Elem b) const { return f.add(a, b); }
  Elem mul(Elem a, Elem b) const { return f.mul(a, b); }
  Elem sub(Elem a, Elem b) const { return f.sub(a, b); }
};

struct DualOps {
  const PrimeField& f;
  Dual add(Dual a, Dual b) const { return {f.add(a.v, b.v), f.add(a.d, b.d)}; }
  Dual sub(Dual a, Dual b) const { return {f.sub(a.v, b.v), f.sub(a.d, b.d)}; }
  Dual mul(Dual a, Dual b) const { return {f.mul(a.v, b.v), f.add(f.mul(a.v, b.d), f.mul(a.d, b.v))}; }
};

template <class T>
using Vec7 = std::array<T, 7>;

// acc += x ^ y on the B coordinates (the a0^a1 part is dropped)
template <class T, class Ops>
void wedge_into(const Ops& o, std::array<T, kBDim>& acc, const Vec7<T>& x, const Vec7<T>& y) {
  for (std::size_t k = 0; k < kBDim; ++k) {
    const auto [i, j] = b_pair(k);
    acc[k] = o.add(acc[k], o.sub(o.mul(x[i], y[j]), o.mul(x[j], y[i])));
  }
}

template <class T, class Ops>
std::array<T, kBDim> assemble(const Ops& o, const Vec7<T>& l, const Vec7<T>& m, const Vec7<T>& v, const Vec7<T>& u,
                              T t, const Vec7<T>& u1, const Vec7<T>& u2) {
  std::array<T, kBDim> acc{};
  wedge_into(o, acc, l, v);
  wedge_into(o, acc, m, u);
  Vec7<T> tu1;
  for (std::size_t i = 0; i < 7; ++i) tu1[i] = o.mul(t, u1[i]);
  wedge_into(o, acc, tu1, u2);
  return acc;
}

Vec7<Elem> to7(const Vec& v) {
  if (v.size() != 7) throw std::invalid_argument("O5 parameter vectors must have length 7");
  Vec7<Elem> out;
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

template <class T, class Ops>
std::array<T, kBDim> chart_map(const Ops& o, const std::array<T, kO5ParamDim>& x, T one) {
  Vec7<T> l{}, m{}, u1{}, u2{}, v{}, u{};
  l[0] = one;
  l[1] = x[0];
  m[1] = one;
  u1[2] = one;
  u2[3] = one;
  for (std::size_t k = 0; k < 3; ++k) {
    u1[4 + k] = x[1 + k];
    u2[4 + k] = x[4 + k];
  }
  for (std::size_t k = 0; k < 5; ++k) v[2 + k] = x[7 + k];
  for (std::size_t i = 0; i < 7; ++i) u[i] = o.add(o.mul(x[12], u1[i]), o.mul(x[13], u2[i]));
  return assemble(o, l, m, v, u, x[14], u1, u2);
}

}  // namespace

BElement o5_build(const PrimeField& f, const O5Params& p) {
  if (p.alpha == 0 && p.beta == 0) throw std::invalid_argument("o5_build: (alpha:beta) = (0:0)");
  const PlainOps o{f};
  Vec7<Elem> l{}, m{}, u{};
  l[0] = p.alpha;
  l[1] = p.beta;
  m[p.alpha != 0 ? 1 : 0] = 1;
  const auto u1 = to7(p.u1), u2 = to7(p.u2), v = to7(p.v);
  for (std::size_t i = 0; i < 7; ++i) u[i] = f.add(f.mul(p.d1, u1[i]), f.mul(p.d2, u2[i]));
  BElement b;
  b.c = assemble(o, l, m, v, u, p.t, u1, u2);
  return b;
}

O5Params o5_random_params(Rng& rng, const PrimeField& f) {
  O5Params p;
  const std::uint64_t r = rng.below(f.p() + 1ULL);
  if (r == f.p()) {
    p.alpha = 0;
    p.beta = 1;
  } else {
    p.alpha = 1;
    p.beta = static_cast<Elem>(r);
  }
  const Subspace plane = sample_subspace(rng, f, 5, 2);
  p.u1.assign(7, 0);
  p.u2.assign(7, 0);
  p.v.assign(7, 0);
  for (std::size_t k = 0; k < 5; ++k) {
    p.u1[2 + k] = plane.basis()(0, k);
    p.u2[2 + k] = plane.basis()(1, k);
    p.v[2 + k] = rng.uniform(f);
  }
  p.d1 = rng.uniform(f);
  p.d2 = rng.uniform(f);
  p.t = rng.uniform(f);
  return p;
}

BElement o5_sample(Rng& rng, const PrimeField& f) { return o5_build(f, o5_random_params(rng, f)); }

O5Params o5_chart(const PrimeField& f, std::span<const Elem> x) {
  if (x.size() != kO5ParamDim) throw std::invalid_argument("O5 chart needs 15 parameters");
  O5Params p;
  p.alpha = 1;
  p.beta = x[0];
  p.u1.assign(7, 0);
  p.u2.assign(7, 0);
  p.v.assign(7, 0);
  p.u1[2] = 1;
  p.u2[3] = 1;
  for (std::size_t k = 0; k < 3; ++k) {
    p.u1[4 + k] = x[1 + k];
    p.u2[4 + k] = x[4 + k];
  }
  for (std::size_t k = 0; k < 5; ++k) p.v[2 + k] = x[7 + k];
  p.d1 = x[12];
  p.d2 = x[13];
  p.t = x[14];
  (void)f;
  return p;
}

Matrix o5_jacobian(const PrimeField& f, std::span<const Elem> x) {
  if (x.size() != kO5ParamDim) throw std::invalid_argument("O5 chart needs 15 parameters");
  const DualOps o{f};
  Matrix j(f, kBDim, kO5ParamDim);
  for (std::size_t col = 0; col < kO5ParamDim; ++col) {
    std::array<Dual, kO5ParamDim> xd;
    for (std::size_t k = 0; k < kO5ParamDim; ++k) xd[k] = {x[k], static_cast<Elem>(k == col)};
    const auto img = chart_map(o, xd, Dual{1, 0});
    for (std::size_t r = 0; r < kBDim; ++r) j(r, col) = img[r].d;
  }
  return j;
}

std::size_t mod_a2_rank(const PrimeField& f, const BElement& b) {
  const SkewForm base = lift(f, b);
  Matrix mod_a2(f, 5, 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k < 5; ++k) mod_a2(i, k) = base(2 + i, 2 + k);
  return rank(mod_a2);
}

bool o5_sufficient_member(const PrimeField& f, const BElement& b) {
  if (mod_a2_rank(f, b) != 2) return false;
  for (Elem s = 0; s < f.p(); ++s)
    if (skew_rank(lift(f, b, s)) == 4) return true;
  return false;
}

std::optional<O5Params> o5_normal_form(const PrimeField& f, const BElement& b) {
  const SkewForm m = lift(f, b);
  Vec x(7, 0), y(7, 0);
  Matrix w(f, 5, 5);
  for (std::size_t k = 2; k < 7; ++k) {
    x[k] = m(0, k);
    y[k] = m(1, k);
    for (std::size_t l = 2; l < 7; ++l) w(k - 2, l - 2) = m(k, l);
  }
  if (rank(w) != 2) return std::nullopt;
  const Subspace rows(w);
  O5Params p;
  p.u1.assign(7, 0);
  p.u2.assign(7, 0);
  for (std::size_t k = 0; k < 5; ++k) {
    p.u1[2 + k] = rows.basis()(0, k);
    p.u2[2 + k] = rows.basis()(1, k);
  }
  // the canonical basis is (1, 0), (0, 1) on the pivot columns
  p.t = w(rows.pivots()[0], rows.pivots()[1]);
  const Subspace plane = Subspace::span(f, 7, std::vector<Vec>{p.u1, p.u2});
  if (auto cx = coordinates_in(plane, x)) {
    p.alpha = 0;
    p.beta = 1;
    p.v = y;
    p.d1 = (*cx)[0];
    p.d2 = (*cx)[1];
    return p;
  }
  for (Elem c = 0; c < f.p(); ++c) {
    Vec r(7);
    for (std::size_t k = 0; k < 7; ++k) r[k] = f.sub(y[k], f.mul(c, x[k]));
    if (auto cr = coordinates_in(plane, r)) {
      p.alpha = 1;
      p.beta = c;
      p.v = x;
      p.d1 = (*cr)[0];
      p.d2 = (*cr)[1];
      return p;
    }
  }
  return std::nullopt;
}

}  // namespace peskine
