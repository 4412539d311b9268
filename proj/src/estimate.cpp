#include "peskine/estimate.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace peskine {

unsigned default_threads() {
  if (const char* env = std::getenv("PESKINE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::uint64_t affine_count(std::uint32_t p, std::size_t k) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (r > UINT64_MAX / p) throw BudgetExceeded("point count overflows 64 bits");
    r *= p;
  }
  return r;
}

std::uint64_t projective_count(std::uint32_t p, std::size_t k) {
  if (k == 0) return 0;
  // 1 + p + ... + p^{k-1}
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < k; ++i) r += affine_count(p, i);
  return r;
}

void projective_point(std::uint32_t p, std::uint64_t index, std::span<Elem> out) {
  const std::size_t k = out.size();
  if (index >= projective_count(p, k)) throw std::out_of_range("projective point index out of range");
  std::fill(out.begin(), out.end(), 0);
  // Leading one at position lead covers p^{k-1-lead} representatives; later leads come first.
  std::size_t lead = k - 1;
  for (;;) {
    const std::uint64_t block = affine_count(p, k - 1 - lead);
    if (index < block) break;
    index -= block;
    --lead;
  }
  out[lead] = 1;
  for (std::size_t j = k; j-- > lead + 1;) {
    out[j] = static_cast<Elem>(index % p);
    index /= p;
  }
}

bool next_projective(std::uint32_t p, std::span<Elem> v) {
  const std::size_t k = v.size();
  std::size_t lead = 0;
  while (lead < k && v[lead] == 0) ++lead;
  for (std::size_t j = k; j-- > lead + 1;) {
    if (v[j] + 1 < p) {
      ++v[j];
      return true;
    }
    v[j] = 0;
  }
  if (lead == 0) {
    // restore the last representative
    for (std::size_t j = 1; j < k; ++j) v[j] = p - 1;
    return false;
  }
  v[lead] = 0;
  v[lead - 1] = 1;
  return true;
}

namespace {

void combine_rows(const Matrix& basis, std::span<const Elem> c, Vec& out) {
  const PrimeField& f = basis.field();
  std::fill(out.begin(), out.end(), 0);
  for (std::size_t i = 0; i < basis.rows(); ++i) {
    if (c[i] == 0) continue;
    const auto row = basis.row(i);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = f.fma(out[j], c[i], row[j]);
  }
}

struct ChunkResult {
  std::uint64_t count = 0;
  std::vector<Vec> points;
};

LocusPoints merge(std::vector<ChunkResult> parts, bool keep_points) {
  LocusPoints out;
  for (auto& part : parts) {
    out.count += part.count;
    if (keep_points)
      for (auto& v : part.points) out.points.push_back(std::move(v));
  }
  return out;
}

}  // namespace

LocusPoints enumerate_projective(const Matrix& basis, const PointTest& test, const ScanOptions& opts,
                                 bool keep_points) {
  const std::uint32_t p = basis.field().p();
  const std::size_t k = basis.rows();
  const std::uint64_t total = projective_count(p, k);
  if (total > opts.budget) {
    throw BudgetExceeded("projective scan needs " + std::to_string(total) + " tests, budget " +
                         std::to_string(opts.budget));
  }
  auto parts = parallel_chunks(total, opts.threads, [&](std::uint64_t begin, std::uint64_t end) {
    ChunkResult r;
    Vec c(k), v(basis.cols());
    projective_point(p, begin, c);
    for (std::uint64_t i = begin; i < end; ++i) {
      combine_rows(basis, c, v);
      if (test(v)) {
        ++r.count;
        if (keep_points) r.points.push_back(v);
      }
      next_projective(p, c);
    }
    return r;
  });
  return merge(std::move(parts), keep_points);
}

LocusPoints enumerate_projective(const PrimeField& f, std::size_t n, const PointTest& test, const ScanOptions& opts,
                                 bool keep_points) {
  return enumerate_projective(Matrix::identity(f, n), test, opts, keep_points);
}

LocusPoints enumerate_affine(const PrimeField& f, std::size_t n, const PointTest& test, const ScanOptions& opts,
                             bool keep_points) {
  const std::uint32_t p = f.p();
  const std::uint64_t total = affine_count(p, n);
  if (total > opts.budget) {
    throw BudgetExceeded("affine scan needs " + std::to_string(total) + " tests, budget " +
                         std::to_string(opts.budget));
  }
  auto parts = parallel_chunks(total, opts.threads, [&](std::uint64_t begin, std::uint64_t end) {
    ChunkResult r;
    Vec v(n);
    std::uint64_t x = begin;
    for (std::size_t j = n; j-- > 0;) {
      v[j] = static_cast<Elem>(x % p);
      x /= p;
    }
    for (std::uint64_t i = begin; i < end; ++i) {
      if (test(v)) {
        ++r.count;
        if (keep_points) r.points.push_back(v);
      }
      for (std::size_t j = n; j-- > 0;) {
        if (++v[j] < p) break;
        v[j] = 0;
      }
    }
    return r;
  });
  return merge(std::move(parts), keep_points);
}

namespace {

struct Slice {
  Vec origin;
  Matrix directions;  // d x N, rank d
};

Slice random_slice(Rng& rng, const PrimeField& f, std::size_t n, std::size_t d) {
  Slice s{random_vector(rng, f, n), Matrix(f, d, n)};
  if (d == 0) return s;
  do {
    s.directions = random_matrix(rng, f, d, n);
  } while (rank(s.directions) < d);
  return s;
}

bool slice_hits(const Slice& s, const PointTest& test) {
  const PrimeField& f = s.directions.field();
  const std::size_t d = s.directions.rows();
  Vec t(d, 0), v = s.origin;
  for (;;) {
    if (test(v)) return true;
    // odometer on t; v tracks origin + sum t_i dir_i incrementally
    std::size_t j = d;
    while (j > 0) {
      --j;
      const auto row = s.directions.row(j);
      for (std::size_t c = 0; c < v.size(); ++c) v[c] = f.add(v[c], row[c]);
      if (++t[j] < f.p()) break;
      t[j] = 0;  // p additions of row j returned v to its value before this digit cycled
      if (j == 0) return false;
    }
    if (d == 0) return false;
  }
}

}  // namespace

PointTest affine_cone(PointTest test) {
  return [test = std::move(test)](std::span<const Elem> x) {
    return std::all_of(x.begin(), x.end(), [](Elem e) { return e == 0; }) || test(x);
  };
}

DimEstimate slice_dim_estimate(const PrimeField& f, std::size_t n, const PointTest& test, Rng& rng,
                               const SliceConfig& cfg) {
  if (cfg.trials == 0) throw std::invalid_argument("slice_dim_estimate needs at least one trial");
  DimEstimate est;
  est.trials = cfg.trials;
  std::uint64_t spent = 0;
  for (std::size_t d = 0; d <= n; ++d) {
    const std::uint64_t per_slice = affine_count(f.p(), d);
    if (per_slice > (cfg.budget - spent) / cfg.trials) {
      est.confidence_note = "budget of " + std::to_string(cfg.budget) + " tests exhausted before slice dimension " +
                            std::to_string(d);
      return est;
    }
    std::vector<Slice> slices;
    for (std::size_t t = 0; t < cfg.trials; ++t) slices.push_back(random_slice(rng, f, n, d));
    const auto hits = parallel_chunks(
        cfg.trials, cfg.threads,
        [&](std::uint64_t b, std::uint64_t e) {
          std::size_t h = 0;
          for (std::uint64_t t = b; t < e; ++t) h += slice_hits(slices[t], test);
          return h;
        },
        cfg.trials);
    std::size_t total_hits = 0;
    for (auto h : hits) total_hits += h;
    spent += per_slice * cfg.trials;
    est.hit_profile.push_back(total_hits);
    const double freq = static_cast<double>(total_hits) / static_cast<double>(cfg.trials);
    if (freq >= cfg.hit_threshold) {
      est.estimated_dim = static_cast<int>(n - d);
      if (d > 0) {
        const double prev = static_cast<double>(est.hit_profile[d - 1]) / static_cast<double>(cfg.trials);
        est.ambiguous = !(prev < cfg.miss_threshold);
      }
      est.confidence_note = "first slice dimension with hit frequency >= " + std::to_string(cfg.hit_threshold) +
                            " is " + std::to_string(d) +
                            (est.ambiguous ? "; previous level not below miss threshold" : "");
      return est;
    }
  }
  est.confidence_note = "no slice dimension reached the hit threshold";
  return est;
}

std::size_t image_dim_estimate(const PrimeField& f, std::size_t param_dim, const JacobianFn& jacobian, Rng& rng,
                               std::size_t samples) {
  std::size_t best = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec x = random_vector(rng, f, param_dim);
    best = std::max(best, rank(jacobian(x)));
  }
  return best;
}

}  // namespace peskine
