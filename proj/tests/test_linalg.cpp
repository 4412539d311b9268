#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "peskine/linalg.hpp"

using namespace peskine;

namespace {

Matrix mat(const PrimeField& f, std::vector<Vec> rows) {
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  return Matrix::from_rows(f, cols, rows);
}

Vec unit(std::size_t n, std::size_t i) {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

// Membership-based equality oracle, independent of the RREF comparison.
bool same_space_by_membership(const Subspace& a, const Subspace& b) {
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (!b.contains(a.basis().row(i))) return false;
  for (std::size_t i = 0; i < b.dim(); ++i)
    if (!a.contains(b.basis().row(i))) return false;
  return true;
}

}  // namespace

TEST_CASE("prime field arithmetic") {
  CHECK_THROWS_AS(PrimeField(9), std::invalid_argument);
  CHECK_THROWS_AS(PrimeField(2), std::invalid_argument);
  const PrimeField f(65537);
  for (Elem x = 1; x < 2000; x += 7) CHECK(f.mul(x, f.inv(x)) == 1);
  CHECK_THROWS(f.inv(0));
  CHECK(f.from_int(-1) == 65536);
  CHECK(f.to_signed(65536) == -1);
}

TEST_CASE("canonicalize examples") {
  const PrimeField f7(7);
  SUBCASE("identity") {
    const auto r = canonicalize(Matrix::identity(f7, 3));
    CHECK(r.rank == 3);
    CHECK(r.rref == Matrix::identity(f7, 3));
  }
  SUBCASE("zero") {
    const Matrix z(f7, 2, 5);
    const auto r = canonicalize(z);
    CHECK(r.rank == 0);
    CHECK(r.rref == z);
  }
  SUBCASE("rank one 2x2") {
    // 2 * 2^-1 = 1 in row one; 4 * 4 = 16 = 2 mod 7, so row one becomes (1, 2)
    // and row two (1,2) - (1,2) = 0.
    const auto r = canonicalize(mat(f7, {{2, 4}, {1, 2}}));
    CHECK(r.rank == 1);
    CHECK(r.rref == mat(f7, {{1, 2}, {0, 0}}));
  }
}

TEST_CASE("canonical form is idempotent and preserves the row space") {
  const PrimeField f(101);
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const std::size_t rows = 1 + rng.below(7), cols = 1 + rng.below(10);
    Matrix m = random_matrix(rng, f, rows, cols);
    if (t % 3 == 0 && rows > 1) {
      // force a dependent row
      for (std::size_t j = 0; j < cols; ++j) m(rows - 1, j) = f.add(m(0, j), m(0, j));
    }
    const auto r1 = canonicalize(m);
    const auto r2 = canonicalize(r1.rref);
    CHECK(r1.rref == r2.rref);
    CHECK(r1.rank == r2.rank);
    CHECK(Subspace(m) == Subspace(r1.rref));
  }
}

TEST_CASE("kernel_of") {
  const PrimeField f(101);
  CHECK(kernel_of(Matrix(f, 4, 4)) == Subspace::full(f, 4));
  CHECK(kernel_of(Matrix::identity(f, 5)).dim() == 0);

  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const Matrix m = random_matrix(rng, f, 6, 10);
    const auto k = kernel_of(m);
    CHECK(rank(m) + k.dim() == 10);
    if (rank(m) == 6) CHECK(k.dim() == 4);
    for (std::size_t i = 0; i < k.dim(); ++i) {
      const Vec mv = m * k.basis().row(i);
      for (auto x : mv) CHECK(x == 0);
    }
  }
}

TEST_CASE("meet and join") {
  const PrimeField f5(5);
  const Vec e0 = unit(10, 0), e1 = unit(10, 1);
  const Subspace a = Subspace::span(f5, 10, std::vector<Vec>{e0});
  const Subspace b = Subspace::span(f5, 10, std::vector<Vec>{e1});
  CHECK(meet(a, b).dim() == 0);
  CHECK(join(a, b) == Subspace::span(f5, 10, std::vector<Vec>{e0, e1}));
  CHECK(meet(a, a) == a);
  CHECK(join(a, a) == a);

  SUBCASE("modular law on random pairs") {
    const PrimeField f(101);
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
      const Subspace x = sample_subspace(rng, f, 10, 4);
      // Sometimes force a large intersection so non-generic cases are covered.
      Subspace y = sample_subspace(rng, f, 10, 7);
      if (t % 4 == 0) y = join(Subspace::span(f, 10, std::vector<Vec>{x.basis_vector(0), x.basis_vector(1)}),
                              sample_subspace(rng, f, 10, 5));
      const Subspace m = meet(x, y), j = join(x, y);
      CHECK(x.dim() + y.dim() == m.dim() + j.dim());
      CHECK(x.contains(m));
      CHECK(y.contains(m));
      CHECK(j.contains(x));
      CHECK(j.contains(y));
    }
  }
}

TEST_CASE("subspace equality agrees with membership oracle") {
  const PrimeField f(7);
  Rng rng(21);
  int equal_pairs = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = rng.below(5);
    const Subspace a = sample_subspace(rng, f, 5, d);
    Subspace b = a;
    if (t % 2 == 0) {
      // Same space from random combinations of a's basis.
      std::vector<Vec> gens;
      for (std::size_t i = 0; i < d + 2; ++i) {
        Vec v(5, 0);
        for (std::size_t r = 0; r < d; ++r) {
          const Elem c = rng.uniform(f);
          for (std::size_t j = 0; j < 5; ++j) v[j] = f.fma(v[j], c, a.basis()(r, j));
        }
        gens.push_back(v);
      }
      b = Subspace::span(f, 5, gens);
    } else {
      b = sample_subspace(rng, f, 5, rng.below(5));
    }
    const bool by_basis = (a == b);
    CHECK(by_basis == same_space_by_membership(a, b));
    equal_pairs += by_basis;
  }
  CHECK(equal_pairs > 100);
}

TEST_CASE("quotient_coords") {
  const PrimeField f7(7);
  const Subspace w = Subspace::span(f7, 4, std::vector<Vec>{unit(4, 0)});
  const auto cp = w.complement_pivots();
  CHECK(quotient_coords(Vec{1, 0, 0, 1}, w, cp) == Vec{0, 0, 1});
  CHECK(quotient_coords(Vec{3, 0, 0, 0}, w, cp) == Vec{0, 0, 0});
  const Subspace z = Subspace::zero(f7, 4);
  CHECK(quotient_coords(Vec{1, 2, 3, 4}, z, z.complement_pivots()) == Vec{1, 2, 3, 4});
  CHECK_THROWS_AS(quotient_coords(Vec{1, 2, 3}, w, cp), std::invalid_argument);

  Rng rng(8);
  const PrimeField f(101);
  for (int t = 0; t < 50; ++t) {
    const Subspace s = sample_subspace(rng, f, 9, 1 + rng.below(8));
    const auto c = s.complement_pivots();
    for (std::size_t i = 0; i < s.dim(); ++i) {
      for (auto x : quotient_coords(s.basis().row(i), s, c)) CHECK(x == 0);
    }
  }
}

TEST_CASE("relative complement") {
  const PrimeField f(101);
  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    const Subspace outer = sample_subspace(rng, f, 10, 7);
    const Subspace inner = Subspace::span(f, 10, std::vector<Vec>{outer.basis_vector(1), outer.basis_vector(4)});
    const Matrix c = relative_complement(inner, outer);
    CHECK(c.rows() == 5);
    Subspace all = inner;
    for (std::size_t i = 0; i < c.rows(); ++i) {
      CHECK(outer.contains(c.row(i)));
      all = join(all, Subspace::span(f, 10, std::vector<Vec>{c.row_vec(i)}));
    }
    CHECK(all == outer);
  }
}

TEST_CASE("sample_subspace and sample_gl") {
  const PrimeField f(11);
  Rng rng(1);
  CHECK(sample_subspace(rng, f, 6, 0).dim() == 0);
  CHECK(sample_subspace(rng, f, 6, 6) == Subspace::full(f, 6));
  for (int t = 0; t < 20; ++t) CHECK(determinant(sample_gl(rng, f, 6)) != 0);
}

TEST_CASE("Gr(2,4)(F_3) sampling is uniform over all 130 points") {
  const PrimeField f(3);
  // Oracle: enumerate spans of all vector pairs.
  std::set<std::vector<Elem>> all;
  for (int a = 0; a < 81; ++a) {
    for (int b = 0; b < 81; ++b) {
      Vec u(4), v(4);
      for (int i = 0, x = a, y = b; i < 4; ++i, x /= 3, y /= 3) {
        u[i] = x % 3;
        v[i] = y % 3;
      }
      const Subspace s = Subspace::span(f, 4, std::vector<Vec>{u, v});
      if (s.dim() == 2) all.insert(s.basis().data());
    }
  }
  // Gaussian binomial [4 choose 2]_3 = (3^2+1)(3^2+3+1)
  REQUIRE(all.size() == 130);
  REQUIRE(all.size() == (9 + 1) * (9 + 3 + 1));

  Rng rng(2024);
  std::map<std::vector<Elem>, int> freq;
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) ++freq[sample_subspace(rng, f, 4, 2).basis().data()];
  CHECK(freq.size() == 130);
  const double expected = static_cast<double>(samples) / 130.0;
  const double sigma = std::sqrt(expected * (1.0 - 1.0 / 130.0));
  for (const auto& [k, c] : freq) CHECK(std::abs(c - expected) < 5 * sigma);
}

TEST_CASE("determinant, inverse, affine solve") {
  const PrimeField f(101);
  Rng rng(4);
  for (int t = 0; t < 30; ++t) {
    const Matrix g = sample_gl(rng, f, 7);
    CHECK(g * inverse(g) == Matrix::identity(f, 7));
    const Matrix h = sample_gl(rng, f, 7);
    CHECK(determinant(g * h) == f.mul(determinant(g), determinant(h)));
  }
  CHECK_THROWS_AS(inverse(Matrix(f, 3, 3)), std::domain_error);

  const Matrix a = random_matrix(rng, f, 3, 5);
  const Vec x0 = random_vector(rng, f, 5);
  const Vec b = a * x0;
  const auto sol = solve_affine(a, b);
  REQUIRE(sol);
  CHECK(a * sol->particular == b);
  CHECK(sol->directions.dim() == 5 - rank(a));
  const Matrix z(f, 2, 2);
  CHECK_FALSE(solve_affine(z, Vec{1, 0}).has_value());
}

TEST_CASE("all_subspaces enumerates each Grassmannian point once") {
  // Gaussian binomial [n k]_q by its product formula
  auto gauss = [](std::uint64_t q, std::size_t n, std::size_t k) {
    std::uint64_t num = 1, den = 1;
    for (std::size_t i = 0; i < k; ++i) {
      std::uint64_t a = 1, b = 1;
      for (std::size_t e = 0; e < n - i; ++e) a *= q;
      for (std::size_t e = 0; e < i + 1; ++e) b *= q;
      num *= a - 1;
      den *= b - 1;
    }
    return num / den;
  };
  for (std::uint32_t p : {3u, 5u}) {
    const PrimeField f(p);
    for (std::size_t n = 1; n <= 5; ++n)
      for (std::size_t k = 0; k <= n; ++k) {
        const auto all = all_subspaces(f, n, k);
        CHECK(all.size() == gauss(p, n, k));
        std::set<std::vector<Elem>> distinct;
        for (const auto& s : all) {
          CHECK(s.dim() == k);
          distinct.insert(s.basis().data());
        }
        CHECK(distinct.size() == all.size());
      }
  }
  CHECK(all_subspaces(PrimeField(3), 4, 2).size() == 130);
}
