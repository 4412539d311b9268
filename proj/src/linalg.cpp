#include "peskine/linalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace peskine {

Matrix Matrix::identity(const PrimeField& f, std::size_t n) {
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const PrimeField& f, std::size_t cols, std::span<const Vec> rows) {
  Matrix m(f, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("row length mismatch");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

Vec Matrix::col_vec(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_field(a.field(), b.field());
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
  const PrimeField& f = a.field();
  Matrix c(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Elem aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = f.fma(c(i, j), aik, b(k, j));
    }
  }
  return c;
}

Vec operator*(const Matrix& a, std::span<const Elem> v) {
  if (a.cols() != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
  const PrimeField& f = a.field();
  Vec out(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      acc += static_cast<std::uint64_t>(a(i, j)) * v[j];
      if ((j & 7) == 7) acc %= f.p();
    }
    out[i] = static_cast<Elem>(acc % f.p());
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.field(), m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

namespace {

// Full reduction to RREF in place; returns pivot columns.
std::vector<std::size_t> rref_in_place(const PrimeField& f, Elem* a, std::size_t rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) std::swap_ranges(a + piv * cols, a + (piv + 1) * cols, a + r * cols);
    const Elem s = f.inv(a[r * cols + c]);
    for (std::size_t j = c; j < cols; ++j) a[r * cols + j] = f.mul(a[r * cols + j], s);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const Elem factor = a[i * cols + c];
      if (factor == 0) continue;
      const Elem nf = f.neg(factor);
      for (std::size_t j = c; j < cols; ++j) a[i * cols + j] = f.fma(a[i * cols + j], nf, a[r * cols + j]);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank_in_place(const PrimeField& f, Elem* a, std::size_t rows, std::size_t cols) noexcept {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) std::swap_ranges(a + piv * cols, a + (piv + 1) * cols, a + r * cols);
    const Elem s = f.neg(f.inv(a[r * cols + c]));
    for (std::size_t i = r + 1; i < rows; ++i) {
      const Elem factor = a[i * cols + c];
      if (factor == 0) continue;
      const Elem m = f.mul(factor, s);
      for (std::size_t j = c; j < cols; ++j) a[i * cols + j] = f.fma(a[i * cols + j], m, a[r * cols + j]);
    }
    ++r;
  }
  return r;
}

Rref canonicalize(const Matrix& m) {
  Matrix out = m;
  auto pivots = rref_in_place(m.field(), out.raw(), m.rows(), m.cols());
  const std::size_t rk = pivots.size();
  return Rref{std::move(out), rk, std::move(pivots)};
}

std::size_t rank(const Matrix& m) {
  std::vector<Elem> scratch = m.data();
  return rank_in_place(m.field(), scratch.data(), m.rows(), m.cols());
}

Elem determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const PrimeField& f = m.field();
  const std::size_t n = m.rows();
  std::vector<Elem> a = m.data();
  Elem det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv * n + c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap_ranges(a.begin() + piv * n, a.begin() + (piv + 1) * n, a.begin() + c * n);
      det = f.neg(det);
    }
    det = f.mul(det, a[c * n + c]);
    const Elem s = f.neg(f.inv(a[c * n + c]));
    for (std::size_t i = c + 1; i < n; ++i) {
      const Elem factor = a[i * n + c];
      if (factor == 0) continue;
      const Elem mlt = f.mul(factor, s);
      for (std::size_t j = c; j < n; ++j) a[i * n + j] = f.fma(a[i * n + j], mlt, a[c * n + j]);
    }
  }
  return det;
}

Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = m.rows();
  Matrix aug(m.field(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto pivots = rref_in_place(m.field(), aug.raw(), n, 2 * n);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw std::domain_error("matrix is singular");
  Matrix inv(m.field(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

// ---------------------------------------------------------------------------

Subspace::Subspace(const Matrix& generators) : basis_(generators.field(), 0, generators.cols()) {
  Rref r = canonicalize(generators);
  Matrix b(generators.field(), r.rank, generators.cols());
  for (std::size_t i = 0; i < r.rank; ++i) std::copy(r.rref.row(i).begin(), r.rref.row(i).end(), b.row(i).begin());
  basis_ = std::move(b);
  pivots_ = std::move(r.pivots);
}

Subspace Subspace::zero(const PrimeField& f, std::size_t ambient) { return Subspace(Matrix(f, 0, ambient), {}); }

Subspace Subspace::full(const PrimeField& f, std::size_t ambient) {
  std::vector<std::size_t> piv(ambient);
  for (std::size_t i = 0; i < ambient; ++i) piv[i] = i;
  return Subspace(Matrix::identity(f, ambient), std::move(piv));
}

Subspace Subspace::span(const PrimeField& f, std::size_t ambient, std::span<const Vec> vectors) {
  return Subspace(Matrix::from_rows(f, ambient, vectors));
}

Subspace Subspace::coordinate(const PrimeField& f, std::size_t ambient, std::span<const std::size_t> indices) {
  Matrix m(f, indices.size(), ambient);
  for (std::size_t i = 0; i < indices.size(); ++i) m(i, indices[i]) = 1;
  return Subspace(m);
}

std::vector<std::size_t> Subspace::complement_pivots() const {
  std::vector<std::size_t> out;
  std::size_t k = 0;
  for (std::size_t c = 0; c < ambient_dim(); ++c) {
    if (k < pivots_.size() && pivots_[k] == c) {
      ++k;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

Vec Subspace::reduce(std::span<const Elem> v) const {
  if (v.size() != ambient_dim()) throw std::invalid_argument("vector length does not match ambient dimension");
  const PrimeField& f = field();
  Vec out(v.begin(), v.end());
  for (std::size_t i = 0; i < dim(); ++i) {
    const Elem c = out[pivots_[i]];
    if (c == 0) continue;
    const Elem nc = f.neg(c);
    auto row = basis_.row(i);
    for (std::size_t j = pivots_[i]; j < out.size(); ++j) out[j] = f.fma(out[j], nc, row[j]);
  }
  return out;
}

bool Subspace::contains(std::span<const Elem> v) const {
  const Vec r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](Elem x) { return x == 0; });
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_dim() != ambient_dim()) return false;
  for (std::size_t i = 0; i < other.dim(); ++i) {
    if (!contains(other.basis().row(i))) return false;
  }
  return true;
}

Subspace kernel_of(const Matrix& m) {
  const PrimeField& f = m.field();
  const Rref r = canonicalize(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : r.pivots) is_pivot[c] = true;
  std::vector<Vec> vecs;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < r.rank; ++i) v[r.pivots[i]] = f.neg(r.rref(i, free));
    vecs.push_back(std::move(v));
  }
  return Subspace::span(f, m.cols(), vecs);
}

namespace {
void require_compatible(const Subspace& a, const Subspace& b) {
  require_same_field(a.field(), b.field());
  if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("ambient dimension mismatch");
}
}  // namespace

Subspace join(const Subspace& a, const Subspace& b) {
  require_compatible(a, b);
  Matrix m(a.field(), a.dim() + b.dim(), a.ambient_dim());
  for (std::size_t i = 0; i < a.dim(); ++i) std::copy(a.basis().row(i).begin(), a.basis().row(i).end(), m.row(i).begin());
  for (std::size_t i = 0; i < b.dim(); ++i)
    std::copy(b.basis().row(i).begin(), b.basis().row(i).end(), m.row(a.dim() + i).begin());
  return Subspace(m);
}

Subspace meet(const Subspace& a, const Subspace& b) {
  require_compatible(a, b);
  // a ∩ b = (ann a + ann b)^ann under the standard pairing.
  const Subspace ann_a = kernel_of(a.basis());
  const Subspace ann_b = kernel_of(b.basis());
  return kernel_of(join(ann_a, ann_b).basis());
}

Subspace transform(const Matrix& g, const Subspace& s) {
  if (g.cols() != s.ambient_dim()) throw std::invalid_argument("transform shape mismatch");
  return Subspace(s.basis() * transpose(g));
}

Vec quotient_coords(std::span<const Elem> v, const Subspace& w, std::span<const std::size_t> complement_pivots) {
  if (v.size() != w.ambient_dim()) throw std::invalid_argument("quotient_coords: ambient dimension mismatch");
  const auto expected = w.complement_pivots();
  if (!std::equal(expected.begin(), expected.end(), complement_pivots.begin(), complement_pivots.end())) {
    throw std::invalid_argument("quotient_coords: complement pivots do not match the subspace");
  }
  const Vec r = w.reduce(v);
  Vec out(complement_pivots.size());
  for (std::size_t i = 0; i < complement_pivots.size(); ++i) out[i] = r[complement_pivots[i]];
  return out;
}

Matrix relative_complement(const Subspace& inner, const Subspace& outer) {
  require_compatible(inner, outer);
  if (!outer.contains(inner)) throw std::invalid_argument("relative_complement: inner not contained in outer");
  Matrix reduced(outer.field(), outer.dim(), outer.ambient_dim());
  for (std::size_t i = 0; i < outer.dim(); ++i) {
    const Vec r = inner.reduce(outer.basis().row(i));
    std::copy(r.begin(), r.end(), reduced.row(i).begin());
  }
  // Reduced vectors vanish on inner's pivots, so RREF keeps them in outer and
  // yields a canonical basis.
  const Rref rr = canonicalize(reduced);
  Matrix out(outer.field(), rr.rank, outer.ambient_dim());
  for (std::size_t i = 0; i < rr.rank; ++i) std::copy(rr.rref.row(i).begin(), rr.rref.row(i).end(), out.row(i).begin());
  return out;
}

std::optional<Vec> coordinates_in(const Subspace& s, std::span<const Elem> v) {
  if (!s.contains(v)) return std::nullopt;
  // RREF basis: the coefficient of row i is the entry of v at pivot i.
  Vec c(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) c[i] = v[s.pivots()[i]];
  return c;
}

Flag::Flag(std::vector<Subspace> spaces) : spaces_(std::move(spaces)) {
  for (std::size_t i = 1; i < spaces_.size(); ++i) {
    require_compatible(spaces_[i - 1], spaces_[i]);
    if (spaces_[i].dim() <= spaces_[i - 1].dim() || !spaces_[i].contains(spaces_[i - 1])) {
      throw std::invalid_argument("flag spaces must be strictly increasing");
    }
  }
}

std::vector<std::size_t> Flag::dims() const {
  std::vector<std::size_t> d;
  for (const auto& s : spaces_) d.push_back(s.dim());
  return d;
}

Flag transform(const Matrix& g, const Flag& flag) {
  std::vector<Subspace> out;
  for (const auto& s : flag.spaces()) out.push_back(transform(g, s));
  return Flag(std::move(out));
}

std::optional<AffineSolution> solve_affine(const Matrix& a, std::span<const Elem> b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_affine: rhs length mismatch");
  const PrimeField& f = a.field();
  const std::size_t n = a.cols();
  Matrix aug(f, a.rows(), n + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  const Rref r = canonicalize(aug);
  if (!r.pivots.empty() && r.pivots.back() == n) return std::nullopt;
  Vec x(n, 0);
  for (std::size_t i = 0; i < r.rank; ++i) x[r.pivots[i]] = r.rref(i, n);
  return AffineSolution{std::move(x), kernel_of(a)};
}

Vec random_vector(Rng& rng, const PrimeField& f, std::size_t n) {
  Vec v(n);
  for (auto& x : v) x = rng.uniform(f);
  return v;
}

Matrix random_matrix(Rng& rng, const PrimeField& f, std::size_t rows, std::size_t cols) {
  Matrix m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(f);
  return m;
}

Subspace sample_subspace(Rng& rng, const PrimeField& f, std::size_t ambient, std::size_t dim) {
  if (dim > ambient) throw std::invalid_argument("sample_subspace: dim exceeds ambient dimension");
  for (;;) {
    Matrix m = random_matrix(rng, f, dim, ambient);
    Subspace s(m);
    if (s.dim() == dim) return s;
  }
}

Matrix sample_gl(Rng& rng, const PrimeField& f, std::size_t n) {
  for (;;) {
    Matrix m = random_matrix(rng, f, n, n);
    if (determinant(m) != 0) return m;
  }
}

std::vector<Subspace> all_subspaces(const PrimeField& f, std::size_t ambient, std::size_t dim) {
  if (dim > ambient) throw std::invalid_argument("all_subspaces: dim exceeds ambient dimension");
  std::vector<Subspace> out;
  std::vector<std::size_t> piv(dim);
  for (std::size_t i = 0; i < dim; ++i) piv[i] = i;
  for (;;) {
    // free entries: row r, columns after piv[r] that are not pivots
    std::vector<std::pair<std::size_t, std::size_t>> free;
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = piv[r] + 1; c < ambient; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.emplace_back(r, c);
    std::vector<Elem> vals(free.size(), 0);
    for (;;) {
      Matrix m(f, dim, ambient);
      for (std::size_t r = 0; r < dim; ++r) m(r, piv[r]) = 1;
      for (std::size_t k = 0; k < free.size(); ++k) m(free[k].first, free[k].second) = vals[k];
      out.emplace_back(m);
      std::size_t k = free.size();
      while (k > 0 && ++vals[k - 1] == f.p()) vals[--k] = 0;
      if (k == 0) break;
    }
    // next pivot set in lexicographic order
    std::size_t i = dim;
    while (i > 0 && piv[i - 1] == ambient - dim + i - 1) --i;
    if (i == 0) break;
    ++piv[i - 1];
    for (std::size_t j = i; j < dim; ++j) piv[j] = piv[j - 1] + 1;
  }
  return out;
}

}  // namespace peskine
