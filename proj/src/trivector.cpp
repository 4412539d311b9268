#include "peskine/trivector.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace peskine {

std::size_t binomial(std::size_t n, std::size_t k) noexcept {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// ---------------------------------------------------------------------------
// SkewForm

SkewForm SkewForm::from_upper(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("skew form needs a square matrix");
  SkewForm s(m.field(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) s.set(i, j, m(i, j));
  return s;
}

void SkewForm::set(std::size_t i, std::size_t j, Elem v) {
  if (i == j) {
    if (v != 0) throw std::invalid_argument("skew form diagonal must be zero");
    return;
  }
  m_(i, j) = v;
  m_(j, i) = field().neg(v);
}

void SkewForm::add(std::size_t i, std::size_t j, Elem v) {
  if (i == j) return;
  set(i, j, field().add(m_(i, j), v));
}

Elem SkewForm::apply(std::span<const Elem> u, std::span<const Elem> v) const {
  const Vec mv = m_ * v;
  if (u.size() != mv.size()) throw std::invalid_argument("skew form apply: length mismatch");
  const PrimeField& f = field();
  Elem acc = 0;
  for (std::size_t i = 0; i < u.size(); ++i) acc = f.fma(acc, u[i], mv[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// Trivector

Trivector::Trivector(const PrimeField& f, std::size_t n) : field_(f), n_(n) {
  if (n < 4 || n > 10 || n % 2 != 0) {
    throw std::invalid_argument("trivector dimension must be even in [4, 10], got " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) triples_.push_back({i, j, k});
  coeffs_.assign(triples_.size(), 0);
}

Trivector Trivector::random(Rng& rng, const PrimeField& f, std::size_t n) {
  Trivector t(f, n);
  for (auto& c : t.coeffs_) c = rng.uniform(f);
  return t;
}

std::size_t Trivector::index(std::size_t i, std::size_t j, std::size_t k) const {
  if (!(i < j && j < k && k < n_)) throw std::out_of_range("triple must be strictly increasing and in range");
  // Triples before (i, *, *): sum over a < i of C(n-1-a, 2); then (i, b, *) for i < b < j.
  std::size_t idx = 0;
  for (std::size_t a = 0; a < i; ++a) idx += binomial(n_ - 1 - a, 2);
  for (std::size_t b = i + 1; b < j; ++b) idx += n_ - 1 - b;
  return idx + (k - j - 1);
}

namespace {
// Sorts three distinct indices, returning the permutation sign.
int sort3(std::size_t& a, std::size_t& b, std::size_t& c) {
  int sign = 1;
  if (a > b) { std::swap(a, b); sign = -sign; }
  if (b > c) { std::swap(b, c); sign = -sign; }
  if (a > b) { std::swap(a, b); sign = -sign; }
  return sign;
}
}  // namespace

Elem Trivector::get(std::size_t i, std::size_t j, std::size_t k) const {
  if (i == j || j == k || i == k) return 0;
  const int sign = sort3(i, j, k);
  const Elem c = coeffs_[index(i, j, k)];
  return sign > 0 ? c : field_.neg(c);
}

void Trivector::set(std::size_t i, std::size_t j, std::size_t k, Elem v) {
  if (i == j || j == k || i == k) throw std::invalid_argument("trivector index triple has a repeat");
  const int sign = sort3(i, j, k);
  coeffs_[index(i, j, k)] = sign > 0 ? v : field_.neg(v);
}

void Trivector::add(std::size_t i, std::size_t j, std::size_t k, Elem v) {
  if (i == j || j == k || i == k) throw std::invalid_argument("trivector index triple has a repeat");
  const int sign = sort3(i, j, k);
  Elem& c = coeffs_[index(i, j, k)];
  c = field_.add(c, sign > 0 ? v : field_.neg(v));
}

bool Trivector::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Elem c) { return c == 0; });
}

// ---------------------------------------------------------------------------

Elem eval3(const Trivector& s, std::span<const Elem> u, std::span<const Elem> v, std::span<const Elem> w) {
  const std::size_t n = s.n();
  if (u.size() != n || v.size() != n || w.size() != n) throw std::invalid_argument("eval3: vector length mismatch");
  const PrimeField& f = s.field();
  const std::uint64_t p = f.p();
  // Pairwise 2x2 minors of (v, w), reused across all triples.
  std::array<Elem, 100> vw{};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      vw[a * n + b] = f.sub(f.mul(v[a], w[b]), f.mul(v[b], w[a]));
  std::uint64_t acc = 0;
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    const Elem c = s.coeff(idx);
    if (c == 0) continue;
    const auto [i, j, k] = s.triple(idx);
    // det [u v w] on rows i,j,k by expansion along u.
    std::uint64_t d = static_cast<std::uint64_t>(u[i]) * vw[j * n + k] + (p - u[j]) * static_cast<std::uint64_t>(vw[i * n + k]) % p +
                      static_cast<std::uint64_t>(u[k]) * vw[i * n + j];
    d %= p;
    acc = (acc + d * c) % p;
  }
  return static_cast<Elem>(acc);
}

SkewForm contract1(const Trivector& s, std::span<const Elem> u) {
  const std::size_t n = s.n();
  if (u.size() != n) throw std::invalid_argument("contract1: vector length mismatch");
  const PrimeField& f = s.field();
  Matrix acc(f, n, n);
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    const Elem c = s.coeff(idx);
    if (c == 0) continue;
    const auto [i, j, k] = s.triple(idx);
    // s(e_i,e_j,e_k) = c; M(j,k) += u_i c, M(i,k) -= u_j c, M(i,j) += u_k c.
    acc(j, k) = f.fma(acc(j, k), u[i], c);
    acc(i, k) = f.fma(acc(i, k), f.neg(u[j]), c);
    acc(i, j) = f.fma(acc(i, j), u[k], c);
  }
  return SkewForm::from_upper(acc);
}

std::size_t contraction_rank(const Trivector& s, std::span<const Elem> u) {
  const std::size_t n = s.n();
  if (u.size() != n) throw std::invalid_argument("contraction_rank: vector length mismatch");
  const PrimeField& f = s.field();
  std::array<Elem, 100> a{};
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    const Elem c = s.coeff(idx);
    if (c == 0) continue;
    const auto [i, j, k] = s.triple(idx);
    a[j * n + k] = f.fma(a[j * n + k], u[i], c);
    a[i * n + k] = f.fma(a[i * n + k], f.neg(u[j]), c);
    a[i * n + j] = f.fma(a[i * n + j], u[k], c);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a[j * n + i] = f.neg(a[i * n + j]);
  return rank_in_place(f, a.data(), n, n);
}

Vec contract2(const Trivector& s, std::span<const Elem> u, std::span<const Elem> v) {
  const SkewForm m = contract1(s, u);
  if (v.size() != s.n()) throw std::invalid_argument("contract2: vector length mismatch");
  const PrimeField& f = s.field();
  Vec out(s.n(), 0);
  for (std::size_t i = 0; i < s.n(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t k = 0; k < s.n(); ++k) out[k] = f.fma(out[k], v[i], m(i, k));
  }
  return out;
}

SkewForm restrict_skew(const SkewForm& m, const Matrix& basis_rows) {
  if (basis_rows.cols() != m.dim()) throw std::invalid_argument("restrict_skew: ambient dimension mismatch");
  const Matrix pulled = basis_rows * m.matrix() * transpose(basis_rows);
  return SkewForm::from_upper(pulled);
}

SkewForm restrict_skew(const SkewForm& m, const Subspace& sub) { return restrict_skew(m, sub.basis()); }

namespace {

constexpr Elem kUnset = std::numeric_limits<Elem>::max();

Elem pf_rec(const SkewForm& m, std::uint32_t mask, std::vector<Elem>& memo) {
  if (mask == 0) return 1;
  Elem& slot = memo[mask];
  if (slot != kUnset) return slot;
  const PrimeField& f = m.field();
  const unsigned first = static_cast<unsigned>(__builtin_ctz(mask));
  const std::uint32_t rest = mask & ~(1u << first);
  Elem acc = 0;
  unsigned position = 1;  // 1-based position of `first` in the subset
  for (std::uint32_t bits = rest; bits != 0; bits &= bits - 1) {
    const unsigned j = static_cast<unsigned>(__builtin_ctz(bits));
    ++position;
    const Elem a = m(first, j);
    if (a == 0) continue;
    const Elem sub = pf_rec(m, rest & ~(1u << j), memo);
    if (sub == 0) continue;
    const Elem term = f.mul(a, sub);
    acc = (position % 2 == 0) ? f.add(acc, term) : f.sub(acc, term);
  }
  slot = acc;
  return acc;
}

}  // namespace

Elem pfaffian(const SkewForm& m) {
  const std::size_t n = m.dim();
  if (n % 2 != 0) throw std::invalid_argument("pfaffian of odd-dimensional form");
  if (n > 16) throw std::invalid_argument("pfaffian supports dimension <= 16");
  if (n == 0) return 1;
  std::vector<Elem> memo(std::size_t{1} << n, kUnset);
  return pf_rec(m, static_cast<std::uint32_t>((std::size_t{1} << n) - 1), memo);
}

std::size_t skew_rank(const SkewForm& m) {
  const std::size_t n = m.dim();
  if (n <= 16) {
    std::array<Elem, 256> buf;
    std::copy(m.matrix().data().begin(), m.matrix().data().end(), buf.begin());
    return rank_in_place(m.field(), buf.data(), n, n);
  }
  return rank(m.matrix());
}

Trivector gl_act(const Matrix& g, const Trivector& s) {
  require_same_field(g.field(), s.field());
  if (g.rows() != s.n() || g.cols() != s.n()) throw std::invalid_argument("gl_act: matrix size mismatch");
  const Matrix h = inverse(g);
  std::vector<Vec> cols;
  for (std::size_t i = 0; i < s.n(); ++i) cols.push_back(h.col_vec(i));
  Trivector out(s.field(), s.n());
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    const auto [i, j, k] = out.triple(idx);
    out.set_coeff(idx, eval3(s, cols[i], cols[j], cols[k]));
  }
  return out;
}

}  // namespace peskine
