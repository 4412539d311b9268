#include "peskine/divisors.hpp"

#include <stdexcept>
#include <string>

namespace peskine {

std::string_view to_string(DivisorKind kind) noexcept {
  switch (kind) {
    case DivisorKind::General: return "GENERAL";
    case DivisorKind::D3_3_10: return "D3_3_10";
    case DivisorKind::D1_6_10: return "D1_6_10";
    case DivisorKind::D4_7_7: return "D4_7_7";
  }
  return "?";
}

DivisorKind parse_divisor_kind(std::string_view name) {
  for (auto k : {DivisorKind::General, DivisorKind::D3_3_10, DivisorKind::D1_6_10, DivisorKind::D4_7_7})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown divisor kind '" + std::string(name) + "'");
}

std::vector<std::size_t> flag_shape(DivisorKind kind) {
  switch (kind) {
    case DivisorKind::General: return {};
    case DivisorKind::D3_3_10: return {3};
    case DivisorKind::D1_6_10: return {1, 6};
    case DivisorKind::D4_7_7: return {4, 7};
  }
  return {};
}

bool zeroed_in_standard_position(DivisorKind kind, std::size_t i, std::size_t j, std::size_t k) noexcept {
  switch (kind) {
    case DivisorKind::General: return false;
    case DivisorKind::D3_3_10: return (i <= 2) + (j <= 2) + (k <= 2) >= 2;
    case DivisorKind::D1_6_10: return i == 0 && j <= 5;
    case DivisorKind::D4_7_7: return i <= 3 && k <= 6;
  }
  return false;
}

namespace {

constexpr std::size_t kAmbient = 10;

Flag standard_flag(const PrimeField& f, DivisorKind kind) {
  std::vector<Subspace> spaces;
  for (std::size_t d : flag_shape(kind)) {
    std::vector<std::size_t> idx(d);
    for (std::size_t i = 0; i < d; ++i) idx[i] = i;
    spaces.push_back(Subspace::coordinate(f, kAmbient, idx));
  }
  return Flag(std::move(spaces));
}

bool all_zero(const Vec& v) {
  for (auto x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace

WitnessedTrivector sample_trivector(Rng& rng, DivisorKind kind, const PrimeField& f, bool scramble) {
  Trivector s(f, kAmbient);
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    const auto [i, j, k] = s.triple(idx);
    if (!zeroed_in_standard_position(kind, i, j, k)) s.set_coeff(idx, rng.uniform(f));
  }
  Flag std_flag = standard_flag(f, kind);
  if (!scramble) return {s, kind, std_flag, std_flag, Matrix::identity(f, kAmbient)};
  const Matrix g = sample_gl(rng, f, kAmbient);
  return {gl_act(g, s), kind, transform(g, std_flag), std_flag, g};
}

bool verify_flag(const Trivector& s, const Flag& flag, DivisorKind kind) {
  if (flag.dims() != flag_shape(kind)) {
    throw std::invalid_argument("flag shape does not match divisor kind " + std::string(to_string(kind)));
  }
  for (const auto& sp : flag.spaces()) {
    if (sp.ambient_dim() != s.n()) throw std::invalid_argument("flag ambient dimension differs from trivector");
  }
  switch (kind) {
    case DivisorKind::General:
      return true;
    case DivisorKind::D3_3_10: {
      const Matrix& b = flag[0].basis();
      for (std::size_t a = 0; a < b.rows(); ++a)
        for (std::size_t c = a + 1; c < b.rows(); ++c)
          if (!all_zero(contract2(s, b.row(a), b.row(c)))) return false;
      return true;
    }
    case DivisorKind::D1_6_10: {
      const Matrix& b = flag[1].basis();
      const Vec v1 = flag[0].basis_vector(0);
      for (std::size_t a = 0; a < b.rows(); ++a)
        if (!all_zero(contract2(s, v1, b.row(a)))) return false;
      return true;
    }
    case DivisorKind::D4_7_7: {
      const Matrix& u = flag[0].basis();
      for (std::size_t a = 0; a < u.rows(); ++a) {
        const SkewForm r = restrict_skew(contract1(s, u.row(a)), flag[1]);
        if (!(r == SkewForm(s.field(), r.dim()))) return false;
      }
      return true;
    }
  }
  return false;
}

Flag recover_flag_D1610(const Trivector& s, std::span<const Elem> v1_hint) {
  const SkewForm m = contract1(s, v1_hint);
  if (skew_rank(m) > 4) throw std::invalid_argument("recover_flag_D1610: hint contraction has rank above 4");
  Subspace radical = kernel_of(m.matrix());
  if (radical.dim() != 6) {
    throw std::domain_error("recover_flag_D1610: radical has dimension " + std::to_string(radical.dim()) +
                            ", expected 6");
  }
  const Vec v1(v1_hint.begin(), v1_hint.end());
  return Flag({Subspace::span(s.field(), s.n(), std::vector<Vec>{v1}), std::move(radical)});
}

std::uint64_t rank4_uniqueness_scan(const Trivector& s, const ScanOptions& opts) {
  return enumerate_projective(
             s.field(), s.n(), [&s](std::span<const Elem> u) { return contraction_rank(s, u) <= 4; }, opts, false)
      .count;
}

}  // namespace peskine
