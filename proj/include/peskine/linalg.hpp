#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "peskine/field.hpp"
#include "peskine/rng.hpp"

namespace peskine {

using Vec = std::vector<Elem>;

/// Dense row-major matrix over a prime field.
class Matrix {
 public:
  Matrix(const PrimeField& f, std::size_t rows, std::size_t cols)
      : field_(f), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(const PrimeField& f, std::size_t n);
  /// Rows given as vectors of equal length `cols`.
  static Matrix from_rows(const PrimeField& f, std::size_t cols, std::span<const Vec> rows);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Elem& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  Elem operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<Elem> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const Elem> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
  Vec row_vec(std::size_t i) const { return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_}; }
  Vec col_vec(std::size_t j) const;

  const std::vector<Elem>& data() const noexcept { return data_; }
  Elem* raw() noexcept { return data_.data(); }

  bool operator==(const Matrix& o) const noexcept {
    return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Elem> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vec operator*(const Matrix& a, std::span<const Elem> v);
Matrix transpose(const Matrix& m);

struct Rref {
  Matrix rref;  // same shape as the input, zero rows at the bottom
  std::size_t rank;
  std::vector<std::size_t> pivots;
};

Rref canonicalize(const Matrix& m);
std::size_t rank(const Matrix& m);
Elem determinant(const Matrix& m);
/// Throws std::domain_error when m is singular.
Matrix inverse(const Matrix& m);

/// Row-major dense rank on a scratch buffer (destroyed); hot path for rank scans.
std::size_t rank_in_place(const PrimeField& f, Elem* data, std::size_t rows, std::size_t cols) noexcept;

class Subspace;

/// {v : m v = 0}
Subspace kernel_of(const Matrix& m);

/// A linear subspace of F_p^n stored by its RREF basis (one basis vector per row).
class Subspace {
 public:
  /// Row space of `generators`.
  explicit Subspace(const Matrix& generators);

  static Subspace zero(const PrimeField& f, std::size_t ambient);
  static Subspace full(const PrimeField& f, std::size_t ambient);
  static Subspace span(const PrimeField& f, std::size_t ambient, std::span<const Vec> vectors);
  /// Span of the standard basis vectors e_i, i in `indices`.
  static Subspace coordinate(const PrimeField& f, std::size_t ambient, std::span<const std::size_t> indices);

  const PrimeField& field() const noexcept { return basis_.field(); }
  std::size_t dim() const noexcept { return basis_.rows(); }
  std::size_t ambient_dim() const noexcept { return basis_.cols(); }
  const Matrix& basis() const noexcept { return basis_; }
  Vec basis_vector(std::size_t i) const { return basis_.row_vec(i); }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }
  /// Non-pivot columns; the standard vectors there span the canonical complement.
  std::vector<std::size_t> complement_pivots() const;

  bool contains(std::span<const Elem> v) const;
  bool contains(const Subspace& other) const;

  /// v minus its component in this subspace along the canonical complement
  /// (zero exactly when v lies in the subspace). Same length as v.
  Vec reduce(std::span<const Elem> v) const;

  bool operator==(const Subspace& o) const noexcept { return basis_ == o.basis_; }

 private:
  Subspace(Matrix rref_basis, std::vector<std::size_t> pivots)
      : basis_(std::move(rref_basis)), pivots_(std::move(pivots)) {}

  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

Subspace meet(const Subspace& a, const Subspace& b);
Subspace join(const Subspace& a, const Subspace& b);
/// Image of every basis vector under g (v -> g v).
Subspace transform(const Matrix& g, const Subspace& s);

/// Coordinates of v mod w on the standard vectors at `complement_pivots`.
/// Throws std::invalid_argument on length mismatch or if complement_pivots are
/// not the non-pivot columns of w.
Vec quotient_coords(std::span<const Elem> v, const Subspace& w, std::span<const std::size_t> complement_pivots);

/// Canonical basis (rows) of a complement of `inner` inside `outer`: vectors of
/// `outer` with zeros on the pivot columns of `inner`, in RREF on the rest.
/// Requires inner contained in outer.
Matrix relative_complement(const Subspace& inner, const Subspace& outer);

/// Coefficients c with v = sum c_i basis_i; nullopt if v is not in s.
std::optional<Vec> coordinates_in(const Subspace& s, std::span<const Elem> v);

/// Nested, strictly increasing chain of subspaces of one ambient space.
class Flag {
 public:
  explicit Flag(std::vector<Subspace> spaces);
  const std::vector<Subspace>& spaces() const noexcept { return spaces_; }
  const Subspace& operator[](std::size_t i) const { return spaces_.at(i); }
  std::size_t size() const noexcept { return spaces_.size(); }
  std::vector<std::size_t> dims() const;
  bool operator==(const Flag& o) const noexcept { return spaces_ == o.spaces_; }

 private:
  std::vector<Subspace> spaces_;
};

Flag transform(const Matrix& g, const Flag& flag);

struct AffineSolution {
  Vec particular;
  Subspace directions;
};

/// Solutions of a x = b; nullopt when inconsistent.
std::optional<AffineSolution> solve_affine(const Matrix& a, std::span<const Elem> b);

Vec random_vector(Rng& rng, const PrimeField& f, std::size_t n);
Matrix random_matrix(Rng& rng, const PrimeField& f, std::size_t rows, std::size_t cols);
/// Uniform over Gr(dim, ambient)(F_p): uniform full-rank dim x ambient matrix, canonicalized.
Subspace sample_subspace(Rng& rng, const PrimeField& f, std::size_t ambient, std::size_t dim);
/// Every point of Gr(dim, ambient)(F_p), ordered by pivot set (lexicographic) and then
/// by the free RREF entries read as a base-p number.
std::vector<Subspace> all_subspaces(const PrimeField& f, std::size_t ambient, std::size_t dim);
/// Uniform invertible n x n matrix (resample until invertible).
Matrix sample_gl(Rng& rng, const PrimeField& f, std::size_t n);

}  // namespace peskine
