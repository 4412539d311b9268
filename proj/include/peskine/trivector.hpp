#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "peskine/linalg.hpp"

namespace peskine {

/// An alternating form with zero diagonal; M(j,i) = -M(i,j) is kept by every mutator.
class SkewForm {
 public:
  SkewForm(const PrimeField& f, std::size_t dim) : m_(f, dim, dim) {}

  /// Upper triangle of `m` defines the form; the lower triangle is ignored.
  static SkewForm from_upper(const Matrix& m);

  const PrimeField& field() const noexcept { return m_.field(); }
  std::size_t dim() const noexcept { return m_.rows(); }
  Elem operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
  void set(std::size_t i, std::size_t j, Elem v);
  void add(std::size_t i, std::size_t j, Elem v);
  const Matrix& matrix() const noexcept { return m_; }

  /// M(u, v) = u^T M v
  Elem apply(std::span<const Elem> u, std::span<const Elem> v) const;

  bool operator==(const SkewForm& o) const noexcept { return m_ == o.m_; }

 private:
  Matrix m_;
};

/// Alternating three-form on F_p^n, dense over the C(n,3) increasing triples in
/// lexicographic order. Supported n: even, 4 <= n <= 10.
class Trivector {
 public:
  Trivector(const PrimeField& f, std::size_t n);

  static Trivector random(Rng& rng, const PrimeField& f, std::size_t n);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Coefficient of e_i* ^ e_j* ^ e_k* for any distinct indices (sign from the permutation); 0 on repeats.
  Elem get(std::size_t i, std::size_t j, std::size_t k) const;
  /// Sets the coefficient of the sorted triple so that get(i,j,k) == v.
  void set(std::size_t i, std::size_t j, std::size_t k, Elem v);
  void add(std::size_t i, std::size_t j, std::size_t k, Elem v);

  /// Lexicographic triple at dense position `idx`.
  std::array<std::size_t, 3> triple(std::size_t idx) const { return triples_[idx]; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const;  // requires i<j<k
  Elem coeff(std::size_t idx) const noexcept { return coeffs_[idx]; }
  void set_coeff(std::size_t idx, Elem v) noexcept { coeffs_[idx] = v; }
  const std::vector<Elem>& coeffs() const noexcept { return coeffs_; }

  bool is_zero() const noexcept;
  bool operator==(const Trivector& o) const noexcept {
    return field_ == o.field_ && n_ == o.n_ && coeffs_ == o.coeffs_;
  }

 private:
  PrimeField field_;
  std::size_t n_;
  std::vector<Elem> coeffs_;
  std::vector<std::array<std::size_t, 3>> triples_;
};

std::size_t binomial(std::size_t n, std::size_t k) noexcept;

/// sum_{i<j<k} c_ijk * det of the (i,j,k) rows of [u v w]. Throws on length mismatch.
Elem eval3(const Trivector& s, std::span<const Elem> u, std::span<const Elem> v, std::span<const Elem> w);

/// M(i,j) = s(u, e_i, e_j) on the full ambient space.
SkewForm contract1(const Trivector& s, std::span<const Elem> u);

/// skew_rank(contract1(s, u)) without allocating; hot path of every point scan.
std::size_t contraction_rank(const Trivector& s, std::span<const Elem> u);

/// Covector w -> s(u, v, w).
Vec contract2(const Trivector& s, std::span<const Elem> u, std::span<const Elem> v);

/// Pull back along the basis rows of `sub` (in their canonical order).
SkewForm restrict_skew(const SkewForm& m, const Subspace& sub);
/// Pull back along arbitrary basis rows.
SkewForm restrict_skew(const SkewForm& m, const Matrix& basis_rows);

/// Pfaffian by first-row expansion, memoized over index subsets:
/// Pf(M) = sum_{j>1} (-1)^j M[1][j] Pf(M without rows/cols 1, j) (1-based), Pf(empty) = 1.
/// Throws std::invalid_argument for odd dimension or dim > 16.
Elem pfaffian(const SkewForm& m);

/// Matrix rank of the form (always even).
std::size_t skew_rank(const SkewForm& m);

/// (g.s)(u,v,w) = s(g^-1 u, g^-1 v, g^-1 w). Throws std::domain_error for singular g.
Trivector gl_act(const Matrix& g, const Trivector& s);

}  // namespace peskine
