#include "doctest.h"
#include "peskine/trivector.hpp"

using namespace peskine;

namespace {

// Brute force over all ordered triples; independent of the minor-based eval3.
Elem eval3_oracle(const Trivector& s, const Vec& u, const Vec& v, const Vec& w) {
  const PrimeField& f = s.field();
  Elem acc = 0;
  for (std::size_t i = 0; i < s.n(); ++i)
    for (std::size_t j = 0; j < s.n(); ++j)
      for (std::size_t k = 0; k < s.n(); ++k)
        acc = f.add(acc, f.mul(s.get(i, j, k), f.mul(u[i], f.mul(v[j], w[k]))));
  return acc;
}

SkewForm random_skew(Rng& rng, const PrimeField& f, std::size_t n) {
  SkewForm m(f, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, rng.uniform(f));
  return m;
}

Vec unit(std::size_t n, std::size_t i) {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

}  // namespace

TEST_CASE("trivector construction and indexing") {
  const PrimeField f(7);
  CHECK_THROWS_AS(Trivector(f, 5), std::invalid_argument);
  CHECK_THROWS_AS(Trivector(f, 2), std::invalid_argument);
  CHECK_THROWS_AS(Trivector(f, 12), std::invalid_argument);
  for (std::size_t n : {4, 6, 8, 10}) {
    const Trivector t(f, n);
    CHECK(t.size() == binomial(n, 3));
    std::size_t expect = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          CHECK(t.index(i, j, k) == expect);
          const auto tr = t.triple(expect);
          CHECK(tr[0] == i);
          CHECK(tr[1] == j);
          CHECK(tr[2] == k);
          ++expect;
        }
  }
  CHECK(binomial(10, 3) == 120);
}

TEST_CASE("alternating sign conventions") {
  const PrimeField f(7);
  Trivector t(f, 6);
  t.set(2, 0, 4, 3);  // odd permutation of (0,2,4)
  CHECK(t.coeff(t.index(0, 2, 4)) == 4);
  CHECK(t.get(0, 2, 4) == 4);
  CHECK(t.get(4, 0, 2) == 4);
  CHECK(t.get(4, 2, 0) == 3);
  CHECK(t.get(0, 0, 4) == 0);
  CHECK_THROWS(t.set(1, 1, 2, 1));
  t.add(0, 2, 4, 3);
  CHECK(t.get(0, 2, 4) == 0);
  CHECK(t.is_zero());
}

TEST_CASE("eval3 agrees with the ordered-sum oracle and is alternating") {
  Rng rng(17);
  for (std::uint32_t p : {3u, 101u, 2147483647u}) {
    const PrimeField f(p);
    for (std::size_t n : {4, 6, 10}) {
      for (int t = 0; t < 10; ++t) {
        const Trivector s = Trivector::random(rng, f, n);
        const Vec u = random_vector(rng, f, n), v = random_vector(rng, f, n), w = random_vector(rng, f, n);
        const Elem val = eval3(s, u, v, w);
        CHECK(val == eval3_oracle(s, u, v, w));
        CHECK(eval3(s, u, u, w) == 0);
        CHECK(eval3(s, v, u, w) == f.neg(val));
        CHECK(eval3(s, w, u, v) == val);
      }
    }
  }
  const PrimeField f(5);
  const Trivector s(f, 4);
  CHECK_THROWS_AS(eval3(s, Vec(3), Vec(4), Vec(4)), std::invalid_argument);
}

TEST_CASE("contractions") {
  Rng rng(23);
  const PrimeField f(101);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 4 + 2 * rng.below(4);
    const Trivector s = Trivector::random(rng, f, n);
    const Vec u = random_vector(rng, f, n), v = random_vector(rng, f, n), w = random_vector(rng, f, n);
    const SkewForm m = contract1(s, u);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) CHECK(m(a, b) == eval3(s, u, unit(n, a), unit(n, b)));
    CHECK(m.apply(v, w) == eval3(s, u, v, w));
    const Vec c = contract2(s, u, v);
    for (std::size_t k = 0; k < n; ++k) CHECK(c[k] == eval3(s, u, v, unit(n, k)));
    CHECK(contraction_rank(s, u) == skew_rank(m));
    CHECK(skew_rank(m) % 2 == 0);
    // u always lies in the radical of s(u, ., .)
    CHECK(m.apply(u, w) == 0);
  }
}

TEST_CASE("pfaffian examples") {
  const PrimeField f(101);
  SkewForm m(f, 2);
  m.set(0, 1, 5);
  CHECK(pfaffian(m) == 5);
  CHECK(pfaffian(SkewForm(f, 0)) == 1);
  CHECK_THROWS_AS(pfaffian(SkewForm(f, 3)), std::invalid_argument);

  Rng rng(3);
  const SkewForm a = random_skew(rng, f, 4);
  // Pf = a01 a23 - a02 a13 + a03 a12
  const Elem expect = f.add(f.sub(f.mul(a(0, 1), a(2, 3)), f.mul(a(0, 2), a(1, 3))), f.mul(a(0, 3), a(1, 2)));
  CHECK(pfaffian(a) == expect);

  // Standard symplectic form e0^e1 + e2^e3 + e4^e5 has Pf = 1.
  SkewForm j(f, 6);
  j.set(0, 1, 1);
  j.set(2, 3, 1);
  j.set(4, 5, 1);
  CHECK(pfaffian(j) == 1);
  CHECK(skew_rank(j) == 6);
}

TEST_CASE("pfaffian squares to the determinant and transforms by det") {
  Rng rng(29);
  for (std::uint32_t p : {5u, 101u, 65537u}) {
    const PrimeField f(p);
    for (std::size_t n = 2; n <= 10; n += 2) {
      for (int t = 0; t < 5; ++t) {
        const SkewForm m = random_skew(rng, f, n);
        const Elem pf = pfaffian(m);
        CHECK(f.mul(pf, pf) == determinant(m.matrix()));
        CHECK((pf != 0) == (skew_rank(m) == n));
        const Matrix b = random_matrix(rng, f, n, n);
        CHECK(pfaffian(restrict_skew(m, b)) == f.mul(determinant(b), pf));
      }
    }
  }
}

TEST_CASE("restriction to a subspace") {
  Rng rng(31);
  const PrimeField f(101);
  const SkewForm m = random_skew(rng, f, 8);
  const Subspace s = sample_subspace(rng, f, 8, 5);
  const SkewForm r = restrict_skew(m, s);
  CHECK(r.dim() == 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(r(i, j) == m.apply(s.basis().row(i), s.basis().row(j)));
  CHECK(skew_rank(r) <= 4);
}

TEST_CASE("gl action is an equivariant left action") {
  Rng rng(37);
  const PrimeField f(101);
  for (std::size_t n : {4, 6, 10}) {
    const Trivector s = Trivector::random(rng, f, n);
    CHECK(gl_act(Matrix::identity(f, n), s) == s);
    for (int t = 0; t < 5; ++t) {
      const Matrix g = sample_gl(rng, f, n), h = sample_gl(rng, f, n);
      const Trivector gs = gl_act(g, s);
      const Vec u = random_vector(rng, f, n), v = random_vector(rng, f, n), w = random_vector(rng, f, n);
      CHECK(eval3(gs, g * u, g * v, g * w) == eval3(s, u, v, w));
      CHECK(gl_act(g * h, s) == gl_act(g, gl_act(h, s)));
      CHECK(contraction_rank(gs, g * u) == contraction_rank(s, u));
    }
  }
  const PrimeField f7(7);
  CHECK_THROWS_AS(gl_act(Matrix(f7, 4, 4), Trivector(f7, 4)), std::domain_error);
}
