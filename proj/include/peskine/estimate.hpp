#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "peskine/linalg.hpp"
#include "peskine/parallel.hpp"

namespace peskine {

/// Thrown when a scan would exceed its configured number of membership tests.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Membership test on ambient coordinates. Must be pure and safe to call concurrently.
using PointTest = std::function<bool(std::span<const Elem>)>;

struct ScanOptions {
  std::uint64_t budget = 100'000'000;
  unsigned threads = default_threads();
};

/// (p^k - 1) / (p - 1); throws BudgetExceeded if it does not fit in 64 bits.
std::uint64_t projective_count(std::uint32_t p, std::size_t k);
/// p^k; throws BudgetExceeded if it does not fit in 64 bits.
std::uint64_t affine_count(std::uint32_t p, std::size_t k);

// Projective points of P^{k-1}(F_p) are represented by the vector whose first nonzero
// entry is 1. The canonical order is lexicographic on these representatives, so
// (0,...,0,1) comes first and (1,p-1,...,p-1) last.

/// Representative number `index` in canonical order.
void projective_point(std::uint32_t p, std::uint64_t index, std::span<Elem> out);
/// Advances to the next representative; false (and v unchanged) at the last one.
bool next_projective(std::uint32_t p, std::span<Elem> v);

struct LocusPoints {
  std::vector<Vec> points;  // ambient coordinates, canonical order
  std::uint64_t count = 0;
};

/// Scans P(span of the rows of `basis`): a point with coefficient representative c is
/// tested at sum_i c_i basis_i. Points are reported in ambient coordinates.
LocusPoints enumerate_projective(const Matrix& basis, const PointTest& test, const ScanOptions& opts = {},
                                 bool keep_points = true);
LocusPoints enumerate_projective(const PrimeField& f, std::size_t n, const PointTest& test,
                                 const ScanOptions& opts = {}, bool keep_points = true);
/// Scans F_p^n in lexicographic order.
LocusPoints enumerate_affine(const PrimeField& f, std::size_t n, const PointTest& test, const ScanOptions& opts = {},
                             bool keep_points = true);

struct SliceConfig {
  std::size_t trials = 20;
  double hit_threshold = 0.6;
  double miss_threshold = 0.2;
  std::uint64_t budget = 100'000'000;
  unsigned threads = default_threads();
};

struct DimEstimate {
  int estimated_dim = -1;  // -1: empty within budget
  std::size_t trials = 0;
  std::vector<std::size_t> hit_profile;  // hit_profile[d]: slices of dimension d that met the locus
  bool ambiguous = false;
  std::string confidence_note;
};

/// The affine cone over a projective locus: the origin is a member, other points are
/// passed to test.
PointTest affine_cone(PointTest test);

/// Draws `trials` uniform affine d-planes of F_p^N for d = 0, 1, ... and tests all p^d
/// points of each. d_min is the first d with hit frequency >= hit_threshold; the
/// estimate N - d_min is unambiguous when d_min = 0 or the frequency at d_min - 1 is
/// below miss_threshold. Returns -1 if no level reaches the hit threshold within budget.
DimEstimate slice_dim_estimate(const PrimeField& f, std::size_t n, const PointTest& test, Rng& rng,
                               const SliceConfig& cfg = {});

/// Exact Jacobian (rows: ambient coordinates, columns: parameters) at a parameter point.
using JacobianFn = std::function<Matrix(std::span<const Elem>)>;

/// Max Jacobian rank over `samples` uniform parameter points.
std::size_t image_dim_estimate(const PrimeField& f, std::size_t param_dim, const JacobianFn& jacobian, Rng& rng,
                               std::size_t samples);

}  // namespace peskine
