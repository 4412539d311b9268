#include "peskine/checks.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <stdexcept>

#include "peskine/divisors.hpp"
#include "peskine/estimate.hpp"
#include "peskine/fibration.hpp"
#include "peskine/loci.hpp"
#include "peskine/orbit.hpp"

namespace peskine {

namespace {

struct Outcome {
  Status status = Status::Fail;
  Json p;
  Json metrics = Json::object();
};

std::uint64_t mix(std::uint64_t x) { return Rng(x).next(); }

// Independent stream per (check, job); never depends on the thread count.
Rng stream(std::uint64_t seed, std::uint64_t check, std::uint64_t job = 0) {
  return Rng(mix(seed) ^ mix(mix(check) + job));
}

struct Ctx {
  const CheckConfig& cfg;

  std::size_t n(std::size_t full, std::size_t quick) const { return cfg.quick ? quick : full; }
  std::vector<std::uint32_t> primes(std::initializer_list<std::uint32_t> defaults) const {
    if (cfg.p) return {*cfg.p};
    return defaults;
  }
  ScanOptions scan() const { return {cfg.budget, cfg.threads}; }
  SliceConfig slice() const {
    SliceConfig s;
    s.trials = cfg.trials.value_or(20);
    s.hit_threshold = cfg.hit_threshold;
    s.miss_threshold = cfg.miss_threshold;
    s.budget = cfg.budget;
    s.threads = cfg.threads;
    return s;
  }
};

Json prime_json(const std::vector<std::uint32_t>& ps) { return ps.size() == 1 ? Json(ps[0]) : Json(ps); }

std::size_t at_least(std::size_t total, std::size_t num, std::size_t den) { return (total * num + den - 1) / den; }

Status verdict(bool ok) { return ok ? Status::Pass : Status::Fail; }

Json histogram(const std::map<std::uint64_t, std::uint64_t>& h) {
  Json j = Json::object();
  for (const auto& [k, v] : h) j[std::to_string(k)] = v;
  return j;
}

// A D1_6_10 sample with nondegenerate omega; counts the redraws.
WitnessedTrivector good_sample(Rng& rng, const PrimeField& f, std::uint64_t& redraws) {
  for (;;) {
    auto w = sample_trivector(rng, DivisorKind::D1_6_10, f);
    if (contraction_rank(w.sigma, w.flag[0].basis_vector(0)) == 4) return w;
    ++redraws;
  }
}

Vec combine(const PrimeField& f, std::span<const Elem> y, const Matrix& rows) {
  Vec out(rows.cols(), 0);
  for (std::size_t i = 0; i < rows.rows(); ++i)
    for (std::size_t j = 0; j < rows.cols(); ++j) out[j] = f.fma(out[j], y[i], rows(i, j));
  return out;
}

Vec random_point_off(Rng& rng, const PrimeField& f, const Subspace& in, const Subspace& off) {
  for (;;) {
    Vec v = combine(f, random_vector(rng, f, in.dim()), in.basis());
    if (!off.contains(v)) return v;
  }
}

Outcome pfaffian_identity(const Ctx& c) {
  const auto primes = c.primes({101, 7});
  const std::size_t per = c.n(1000, 50);
  std::uint64_t forms = 0, mismatches = 0;
  for (std::uint32_t p : primes) {
    const PrimeField f(p);
    for (std::size_t k = 2; k <= 10; k += 2) {
      Rng rng = stream(c.cfg.seed, 1, p * 16 + k);
      for (std::size_t t = 0; t < per; ++t) {
        SkewForm m(f, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = i + 1; j < k; ++j) m.set(i, j, rng.uniform(f));
        const Elem pf = pfaffian(m);
        mismatches += f.mul(pf, pf) != determinant(m.matrix());
        ++forms;
      }
    }
  }
  return {verdict(mismatches == 0), prime_json(primes),
          Json{{"forms", forms}, {"mismatches", mismatches}, {"sizes", {2, 4, 6, 8, 10}}}};
}

Outcome low_dim_peskine(const Ctx& c) {
  const auto primes6 = c.primes({7, 11});
  const std::uint32_t p8 = c.cfg.p.value_or(7);
  const std::size_t seeds6 = c.n(20, 2), seeds8 = c.n(10, 1);
  bool ok = true;
  Json m6 = Json::object();
  for (std::uint32_t p : primes6) {
    const PrimeField f(p);
    const std::uint64_t plane = std::uint64_t{p} * p + p + 1;
    std::size_t conform = 0, ambiguous = 0;
    std::map<std::uint64_t, std::uint64_t> counts, dims;
    for (std::size_t s = 0; s < seeds6; ++s) {
      Rng rng = stream(c.cfg.seed, 2, p * 1000 + s);
      const Trivector sigma = Trivector::random(rng, f, 6);
      const PointTest test = [&](std::span<const Elem> u) { return peskine_member(sigma, u); };
      const std::uint64_t count = enumerate_projective(f, 6, test, c.scan(), false).count;
      const DimEstimate e = slice_dim_estimate(f, 6, affine_cone(test), rng, c.slice());
      const int dim = e.estimated_dim < 0 ? -1 : e.estimated_dim - 1;
      ++counts[count];
      ++dims[static_cast<std::uint64_t>(dim + 1)];
      ambiguous += e.ambiguous;
      conform += (count == 0 || count == 2 * plane) && dim == 2;
    }
    const std::size_t needed = at_least(seeds6, 9, 10);
    ok = ok && conform >= needed;
    m6[std::to_string(p)] = Json{{"seeds", seeds6},
                                 {"conforming", conform},
                                 {"required", needed},
                                 {"counts", histogram(counts)},
                                 {"slice_dims_plus_one", histogram(dims)},
                                 {"ambiguous", ambiguous}};
  }
  const PrimeField f8(p8);
  const std::uint64_t plane8 = std::uint64_t{p8} * p8 + p8 + 1;
  const std::uint64_t split = plane8 * plane8, twisted = std::uint64_t{p8} * p8 * p8 * p8 + std::uint64_t{p8} * p8 + 1;
  std::size_t dim4 = 0, conform8 = 0, ambiguous8 = 0;
  std::map<std::uint64_t, std::uint64_t> counts8, dims8;
  for (std::size_t s = 0; s < seeds8; ++s) {
    Rng rng = stream(c.cfg.seed, 2, 1'000'000 + s);
    const Trivector sigma = Trivector::random(rng, f8, 8);
    const PointTest test = [&](std::span<const Elem> u) { return peskine_member(sigma, u); };
    const std::uint64_t count = enumerate_projective(f8, 8, test, c.scan(), false).count;
    const DimEstimate e = slice_dim_estimate(f8, 8, affine_cone(test), rng, c.slice());
    const int dim = e.estimated_dim < 0 ? -1 : e.estimated_dim - 1;
    ++counts8[count];
    ++dims8[static_cast<std::uint64_t>(dim + 1)];
    ambiguous8 += e.ambiguous;
    dim4 += dim == 4;
    conform8 += count == split || count == twisted;
  }
  ok = ok && dim4 == seeds8 && conform8 * 10 >= seeds8 * 8;
  Json m8{{"p", p8},
          {"seeds", seeds8},
          {"slice_dim_4", dim4},
          {"slice_dims_plus_one", histogram(dims8)},
          {"ambiguous", ambiguous8},
          {"counts", histogram(counts8)},
          {"expected_counts", {split, twisted}},
          {"conforming_counts", conform8}};
  Json ps = prime_json(primes6);
  return {verdict(ok), Json{{"n6", ps}, {"n8", p8}}, Json{{"n6", m6}, {"n8", m8}}};
}

Outcome d3310_fibers(const Ctx& c) {
  const auto primes = c.primes({7, 101});
  const std::size_t seeds = c.n(5, 1), v4s = c.n(20, 5);
  bool ok = true;
  Json m = Json::object();
  for (std::uint32_t p : primes) {
    const PrimeField f(p);
    const bool exhaustive = p <= 13;
    std::size_t cases = 0, singletons = 0, degenerate = 0, empty = 0, disagreements = 0, compared = 0, nonlinear = 0;
    for (std::size_t s = 0; s < seeds; ++s) {
      Rng rng = stream(c.cfg.seed, 3, p * 1000 + s);
      const auto w = sample_trivector(rng, DivisorKind::D3_3_10, f);
      const Subspace& v3 = w.flag[0];
      for (std::size_t t = 0; t < v4s; ++t) {
        Subspace v4 = v3;
        while (v4.dim() != 4) v4 = join(v3, Subspace::span(f, 10, std::vector<Vec>{random_vector(rng, f, 10)}));
        ++cases;
        std::optional<AffineSolution> lin;
        try {
          lin = thm21_fiber_linear(w.sigma, v3, v4);
        } catch (const std::domain_error&) {
          ++degenerate;
          continue;
        }
        const std::size_t size = lin ? static_cast<std::size_t>(affine_count(p, lin->directions.dim())) : 0;
        singletons += size == 1;
        empty += size == 0;
        if (exhaustive) {
          const auto ex = thm21_fiber_exhaustive(w.sigma, v3, v4, c.scan());
          const auto lp = lin ? affine_points(f, *lin) : std::vector<Vec>{};
          ++compared;
          disagreements += ex != lp;
          // the exhaustive set must itself be an affine subspace
          if (ex.size() > 1) {
            for (std::size_t i = 1; i < ex.size(); ++i)
              for (Elem a = 0; a < f.p(); ++a) {
                Vec q(3);
                for (std::size_t k = 0; k < 3; ++k) q[k] = f.add(ex[0][k], f.mul(a, f.sub(ex[i][k], ex[0][k])));
                if (!std::binary_search(ex.begin(), ex.end(), q)) {
                  ++nonlinear;
                  i = ex.size();
                  break;
                }
              }
          }
        }
      }
    }
    const bool prime_ok = singletons * 100 >= cases * 95 && disagreements == 0 && nonlinear == 0;
    ok = ok && prime_ok;
    m[std::to_string(p)] = Json{{"mode", exhaustive ? "exhaustive+linear" : "linear"},
                                {"cases", cases},
                                {"singletons", singletons},
                                {"empty", empty},
                                {"degenerate_frames", degenerate},
                                {"compared", compared},
                                {"disagreements", disagreements},
                                {"non_affine_fibers", nonlinear}};
  }
  return {verdict(ok), prime_json(primes), m};
}

Outcome sigma_prime_rank_check(const Ctx& c) {
  const auto primes = c.primes({7});
  const std::size_t seeds = c.n(3, 1), u7s = c.n(5, 1);
  std::uint64_t scanned = 0, violations = 0, members = 0, redraws = 0;
  for (std::uint32_t p : primes) {
    const PrimeField f(p);
    for (std::size_t s = 0; s < seeds; ++s) {
      Rng rng = stream(c.cfg.seed, 4, p * 1000 + s);
      const auto w = good_sample(rng, f, redraws);
      const auto od = omega_data(w.sigma, w.flag);
      for (std::size_t t = 0; t < u7s; ++t) {
        const Subspace u7 = random_u7(od, rng);
        const SigmaPrime sp(w.sigma, od, u7);
        std::atomic<std::uint64_t> n_scanned{0}, n_members{0};
        violations += enumerate_projective(
                          u7.basis(),
                          [&](std::span<const Elem> l) {
                            if (w.flag[1].contains(l)) return false;
                            ++n_scanned;
                            const bool member = peskine_member(w.sigma, l);
                            n_members += member;
                            const std::size_t r = sp.rank(l);
                            return member != (r == 4) || r < 4;
                          },
                          c.scan(), false)
                          .count;
        scanned += n_scanned;
        members += n_members;
      }
    }
  }
  return {verdict(violations == 0 && scanned > 0), prime_json(primes),
          Json{{"scanned", scanned}, {"peskine_points", members}, {"violations", violations}, {"redraws", redraws}}};
}

Outcome cubic_fourfold(const Ctx& c) {
  const auto primes = c.primes({11});
  const std::size_t seeds = c.n(3, 1);
  bool ok = true;
  Json runs = Json::array();
  for (std::uint32_t p : primes) {
    const PrimeField f(p);
    for (std::size_t s = 0; s < seeds; ++s) {
      Rng rng = stream(c.cfg.seed, 5, p * 1000 + s);
      const auto w = sample_trivector(rng, DivisorKind::D1_6_10, f);
      Json run{{"p", p}};
      try {
        const CubicInterpolation ci = cubic_from_pfaffian(w.sigma, w.flag, rng);
        const auto scan = enumerate_projective(
            f, 6,
            [&](std::span<const Elem> x) {
              const bool zero = ci.cubic.eval(x) == 0;
              const bool low = contraction_rank(w.sigma, combine(f, x, ci.v6_basis)) <= 6;
              return zero != low;
            },
            c.scan(), false);
        const int degree = ci.cubic.total_degree();
        run["degree"] = degree;
        run["nodes"] = ci.nodes;
        run["points"] = projective_count(p, 6);
        run["mismatches"] = scan.count;
        ok = ok && degree == 3 && scan.count == 0;
      } catch (const std::domain_error& e) {
        run["error"] = e.what();
        ok = false;
      }
      runs.push_back(run);
    }
  }
  return {verdict(ok), prime_json(primes), Json{{"runs", runs}}};
}

Outcome cubic_singularity_probe_check(const Ctx& c) {
  const auto primes = c.primes({101});
  const std::size_t seeds = c.n(3, 1);
  Json runs = Json::array();
  for (std::uint32_t p : primes) {
    const PrimeField f(p);
    for (std::size_t s = 0; s < seeds; ++s) {
      Rng rng = stream(c.cfg.seed, 15, p * 1000 + s);
      const auto w = sample_trivector(rng, DivisorKind::D1_6_10, f);
      const Vec v1 = w.flag[0].basis_vector(0);
      Json run{{"p", p}};
      try {
        const CubicInterpolation ci = cubic_from_pfaffian(w.sigma, w.flag, rng);
        const Vec grad = cubic_singularity_probe(ci, v1);
        const auto x = coordinates_in(Subspace(ci.v6_basis), v1);
        run["value_at_v1"] = ci.cubic.eval(*x);
        run["gradient_at_v1"] = grad;
        run["singular_at_v1"] = std::all_of(grad.begin(), grad.end(), [](Elem e) { return e == 0; });
      } catch (const std::domain_error& e) {
        run["error"] = e.what();
      }
      runs.push_back(run);
    }
  }
  return {Status::ReportOnly, prime_json(primes), Json{{"runs", runs}}};
}

Outcome o2_dimension(const Ctx& c) {
  const auto primes = c.primes({5, 7});
  bool right = true, clear = true;
  Json m = Json::object();
  for (std::uint32_t p : primes) {
    const PrimeField f(p);
    const PencilCubics pc = pencil_cubics(f);
    Rng rng = stream(c.cfg.seed, 6, p);
    const DimEstimate o2 =
        slice_dim_estimate(f, kBDim, [&](std::span<const Elem> x) { return o2_member(pc, to_belement(x)); }, rng, c.slice());
    const DimEstimate sing = slice_dim_estimate(
        f, kBDim, [&](std::span<const Elem> x) { return sing_o2_member(pc, to_belement(x)); }, rng, c.slice());
    right = right && o2.estimated_dim == 18 && sing.estimated_dim == 15;
    clear = clear && !o2.ambiguous && !sing.ambiguous;
    m[std::to_string(p)] = Json{{"dim_O2", estimate_to_json(o2)}, {"dim_SingO2", estimate_to_json(sing)}};
  }
  m["expected"] = Json{{"dim_O2", 18}, {"dim_SingO2", 15}};
  return {right ? (clear ? Status::Pass : Status::Ambiguous) : Status::Fail, prime_json(primes), m};
}

SkewForm wedge_sum(const PrimeField& f, std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
  SkewForm m(f, 7);
  for (auto [i, j] : pairs) m.add(i, j, 1);
  return m;
}

Outcome cubic_pencil(const Ctx& c) {
  const auto primes = c.primes({7, 101});
  const std::size_t samples = c.n(500, 50), lines = c.n(20, 5);
  std::uint64_t checked = 0, mismatches = 0, lift_checked = 0, lift_mismatches = 0;
  for (std::uint32_t p : primes) {
    const PrimeField f(p);
    const PencilCubics pc = pencil_cubics(f);
    Rng rng = stream(c.cfg.seed, 7, p);
    std::vector<Vec> rows1, rows2;
    for (std::size_t k = 0; k < 7; ++k) {
      Vec e(7, 0);
      e[k] = 1;
      if (k != 1) rows1.push_back(e);
      if (k != 0) rows2.push_back(e);
    }
    const Matrix minor1 = Matrix::from_rows(f, 7, rows1), minor2 = Matrix::from_rows(f, 7, rows2);
    const BElement p1 = project_to_B(wedge_sum(f, {{0, 2}, {3, 4}, {5, 6}}));
    const BElement p2 = project_to_B(wedge_sum(f, {{1, 2}, {3, 4}, {5, 6}}));
    for (std::size_t t = 0; t < lines; ++t) {
      Elem a, b;
      do {
        a = rng.uniform(f);
        b = rng.uniform(f);
      } while (a == 0 && b == 0);
      const Elem l1 = pf_mod_line(f, p1, a, b), l2 = pf_mod_line(f, p2, a, b);
      for (std::size_t k = 0; k < samples; ++k) {
        BElement x;
        for (auto& e : x.c) e = rng.uniform(f);
        const Elem f1 = pc.f1.eval(x.c), f2 = pc.f2.eval(x.c);
        mismatches += pf_mod_line(f, x, a, b) != f.add(f.mul(l1, f1), f.mul(l2, f2));
        ++checked;
        // F1, F2 do not see the dropped a0^a1 coordinate
        const SkewForm full = lift(f, x, rng.uniform(f));
        lift_mismatches += pfaffian(restrict_skew(full, minor1)) != f1 || pfaffian(restrict_skew(full, minor2)) != f2;
        ++lift_checked;
      }
    }
  }
  return {verdict(mismatches == 0 && lift_mismatches == 0), prime_json(primes),
          Json{{"combination_checks", checked},
               {"combination_mismatches", mismatches},
               {"b01_independence_checks", lift_checked},
               {"b01_independence_mismatches", lift_mismatches}}};
}

Outcome o5_criterion(const Ctx& c) {
  const auto primes = c.primes({101});
  const std::size_t target = c.n(200, 20), samples = c.n(200, 20);
  std::uint64_t built = 0, sufficient = 0, decomposed = 0;
  std::size_t diff_rank = 0;
  for (std::uint32_t p : primes) {
    const PrimeField f(p);
    Rng rng = stream(c.cfg.seed, 8, p);
    std::uint64_t made = 0;
    while (made < target) {
      // rank-4 form on <l'> + 3 random vectors with l' in A2: rank 2 mod A2
      std::vector<Vec> w{Vec{rng.uniform(f), rng.uniform(f), 0, 0, 0, 0, 0}};
      for (int i = 0; i < 3; ++i) w.push_back(random_vector(rng, f, 7));
      SkewForm small(f, 4);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) small.set(i, j, rng.uniform(f));
      const SkewForm full = restrict_skew(small, transpose(Matrix::from_rows(f, 7, w)));
      if (skew_rank(full) != 4) continue;
      const BElement b = project_to_B(full);
      if (mod_a2_rank(f, b) != 2) continue;
      ++made;
      sufficient += o5_sufficient_member(f, b);
      const auto nf = o5_normal_form(f, b);
      decomposed += nf && o5_build(f, *nf) == b;
    }
    built += made;
    diff_rank = std::max(diff_rank, image_dim_estimate(f, kO5ParamDim, [&](auto x) { return o5_jacobian(f, x); }, rng, samples));
  }
  return {verdict(sufficient == built && decomposed == built && diff_rank <= 15), prime_json(primes),
          Json{{"constructed", built},
               {"sufficient", sufficient},
               {"normal_form", decomposed},
               {"o5_differential_rank", diff_rank},
               {"differential_rank_samples", samples}}};
}

Outcome sigma_dprime_generation(const Ctx& c) {
  const auto primes = c.primes({101});
  const std::size_t pairs = c.n(50, 5);
  std::uint64_t total = 0, reproduced = 0, flags = 0;
  for (std::uint32_t p : primes) {
    const PrimeField f(p);
    Rng rng = stream(c.cfg.seed, 9, p);
    for (std::size_t t = 0; t < pairs; ++t) {
      BElement x;
      for (auto& e : x.c) e = rng.uniform(f);
      const GenerationFrame fr = random_generation_frame(rng, f);
      const Trivector s = generating_trivector(f, fr.basis, x);
      ++total;
      flags += verify_flag(s, fr.flag, DivisorKind::D1_6_10);
      const auto od = omega_data(s, fr.flag);
      reproduced += sigma_dprime(s, od, fr.u7, fr.basis.row(0)) == x;
    }
  }
  return {verdict(reproduced == total && flags == total), prime_json(primes),
          Json{{"pairs", total}, {"reproduced", reproduced}, {"flag_verified", flags}}};
}

Outcome birationality(const Ctx& c) {
  const auto primes = c.primes({101});
  const std::size_t samples = c.n(100, 5);
  std::uint64_t total = 0, ones = 0, v1_on = 0, failures = 0, redraws = 0;
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint32_t p : primes) {
    const PrimeField f(p);
    for (std::size_t i = 0; i < samples; ++i) {
      Rng rng = stream(c.cfg.seed, 10, p * 100000 + i);
      const auto w = good_sample(rng, f, redraws);
      const auto od = omega_data(w.sigma, w.flag);
      ++total;
      std::optional<X11Point> pt;
      try {
        pt = sample_x11_point(w.sigma, od, rng);
      } catch (const BudgetExceeded&) {
        ++failures;
        continue;
      }
      const auto r = birationality_probe(w.sigma, od, pt->u7, pt->l);
      ++counts[r.count];
      ones += r.count == 1;
      v1_on += r.v1_on_locus;
    }
  }
  return {verdict(ones * 100 >= total * 95), prime_json(primes),
          Json{{"samples", total},
               {"count_one", ones},
               {"count_histogram", histogram(counts)},
               {"v1_on_locus", v1_on},
               {"sampling_failures", failures},
               {"redraws", redraws}}};
}

Outcome quadric_pencil_check(const Ctx& c) {
  const auto fwd_primes = c.primes({7});
  const auto rank_primes = c.primes({101});
  const std::size_t seeds = c.n(3, 1), u7s = c.n(10, 2), samples = c.n(100, 10);
  std::uint64_t checked = 0, exceptions = 0, degenerate = 0, redraws = 0;
  std::uint64_t zeros = 0, uncovered = 0, uncovered_v6 = 0;
  for (std::uint32_t p : fwd_primes) {
    const PrimeField f(p);
    for (std::size_t s = 0; s < seeds; ++s) {
      Rng rng = stream(c.cfg.seed, 11, p * 1000 + s);
      const auto w = good_sample(rng, f, redraws);
      const auto od = omega_data(w.sigma, w.flag);
      for (std::size_t t = 0; t < u7s; ++t) {
        const Subspace u7 = random_u7(od, rng);
        const QuadricPencil qp = quadric_pencil(w.sigma, od, u7, rng);
        degenerate += qp.degenerate;
        std::atomic<std::uint64_t> n_checked{0};
        exceptions += enumerate_projective(
                          u7.basis(),
                          [&](std::span<const Elem> l) {
                            if (w.flag[1].contains(l) || !peskine_member(w.sigma, l)) return false;
                            ++n_checked;
                            const Vec y = fiber_coordinates(qp, od.v1, l);
                            return quadric_value(qp.qa, y) != 0 || quadric_value(qp.qb, y) != 0;
                          },
                          c.scan(), false)
                          .count;
        checked += n_checked;
        if (t == 0) {
          const auto rc = reverse_coverage(w.sigma, od, qp, c.scan());
          zeros += rc.common_zeros;
          uncovered += rc.uncovered;
          uncovered_v6 += rc.uncovered_in_v6;
        }
      }
    }
  }
  std::uint64_t full = 0, total = 0;
  for (std::uint32_t p : rank_primes) {
    const PrimeField f(p);
    for (std::size_t i = 0; i < samples; ++i) {
      Rng rng = stream(c.cfg.seed, 11, 1'000'000 + p * 1000 + i);
      const auto w = good_sample(rng, f, redraws);
      const auto od = omega_data(w.sigma, w.flag);
      const QuadricPencil qp = quadric_pencil(w.sigma, od, random_u7(od, rng), rng);
      const Elem a = rng.uniform(f), b = rng.uniform(f);
      Matrix m(f, 6, 6);
      for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t k = 0; k < 6; ++k) m(r, k) = f.add(f.mul(a, qp.qa(r, k)), f.mul(b, qp.qb(r, k)));
      full += rank(m) == 6;
      ++total;
    }
  }
  const bool ok = exceptions == 0 && checked > 0 && full * 10 >= total * 9;
  return {verdict(ok), Json{{"forward", prime_json(fwd_primes)}, {"rank", prime_json(rank_primes)}},
          Json{{"forward_points", checked},
               {"forward_exceptions", exceptions},
               {"degenerate_pencils", degenerate},
               {"rank_samples", total},
               {"rank6", full},
               {"redraws", redraws},
               {"reverse_coverage",
                {{"status", "REPORT_ONLY"},
                 {"common_zeros", zeros},
                 {"uncovered", uncovered},
                 {"uncovered_in_v6", uncovered_v6}}}}};
}

Outcome fiber_singularities_check(const Ctx& c) {
  const auto primes = c.primes({7});
  const std::size_t sigmas = c.n(4, 1), u7s = c.n(5, 3);
  std::uint64_t total = 0, good = 0, redraws = 0;
  std::map<std::uint64_t, std::uint64_t> singular_hist;
  for (std::uint32_t p : primes) {
    const PrimeField f(p);
    for (std::size_t s = 0; s < sigmas; ++s) {
      Rng rng = stream(c.cfg.seed, 12, p * 1000 + s);
      const auto w = good_sample(rng, f, redraws);
      const auto od = omega_data(w.sigma, w.flag);
      for (std::size_t t = 0; t < u7s; ++t) {
        const QuadricPencil qp = quadric_pencil(w.sigma, od, random_u7(od, rng), rng);
        const auto fs = fiber_singularities(qp, c.scan());
        ++total;
        ++singular_hist[fs.singular];
        good += fs.points > 0 && fs.singular < 10 && fs.singular * 20 < fs.points;
      }
    }
  }
  return {verdict(good * 10 >= total * 9), prime_json(primes),
          Json{{"fibers", total}, {"conforming", good}, {"singular_histogram", histogram(singular_hist)}, {"redraws", redraws}}};
}

Outcome k3_conic_fibration(const Ctx& c) {
  const auto primes = c.primes({3, 5});
  bool ok = true;
  Json m = Json::object();
  for (std::uint32_t p : primes) {
    const PrimeField f(p);
    const std::size_t seeds = p == 3 ? c.n(100, 3) : c.n(10, 1);
    std::uint64_t nonempty = 0, planes = 0, witnesses = 0, fibers = 0, smooth = 0;
    std::map<std::uint64_t, std::uint64_t> sizes;
    for (std::size_t s = 0; s < seeds; ++s) {
      Rng rng = stream(c.cfg.seed, 13, p * 1000 + s);
      const auto w = sample_trivector(rng, DivisorKind::D1_6_10, f);
      bool any = false;
      for (const auto& u8 : isotropic_extensions(w.sigma, w.flag)) {
        ++planes;
        const auto r = k3_member(w.sigma, w.flag, u8);
        if (!r.member) continue;
        any = true;
        ++witnesses;
        const auto fiber = conic_fiber(w.sigma, *r.u4, u8);
        ++fibers;
        ++sizes[fiber.size()];
        smooth += fiber.size() == p + 1;
      }
      nonempty += any;
    }
    bool prime_ok = fibers > 0 && smooth * 10 >= fibers * 9;
    if (p == 3) prime_ok = prime_ok && nonempty * 10 >= seeds * 8;
    ok = ok && prime_ok;
    m[std::to_string(p)] = Json{{"seeds", seeds},
                                {"nonempty", nonempty},
                                {"isotropic_planes", planes},
                                {"witnesses", witnesses},
                                {"fibers", fibers},
                                {"fibers_with_p_plus_1_points", smooth},
                                {"fiber_sizes", histogram(sizes)}};
  }
  return {verdict(ok), prime_json(primes), m};
}

Outcome o5_locus_dimension(const Ctx& c) {
  // {[U2 < U7] : sigma'' has mod-A2 rank <= 2 and a lift of rank <= 4} on the chart
  // U7 = V6 + <c(t)>, u = c(t) + y.g
  const auto primes = c.primes({5});
  Json m = Json::object();
  for (std::uint32_t p : primes) {
    const PrimeField f(p);
    Rng rng = stream(c.cfg.seed, 16, p);
    std::uint64_t redraws = 0;
    const auto w = good_sample(rng, f, redraws);
    const auto od = omega_data(w.sigma, w.flag);
    const Matrix g = relative_complement(w.flag[0], w.flag[1]);
    const PointTest test = [&](std::span<const Elem> x) {
      Vec cvec(10, 0);
      cvec[od.complement[0]] = 1;
      for (std::size_t i = 0; i < 3; ++i) cvec[od.complement[i + 1]] = x[i];
      const Subspace u7 = join(w.flag[1], Subspace::span(f, 10, std::vector<Vec>{cvec}));
      Vec u = cvec;
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 10; ++j) u[j] = f.fma(u[j], x[3 + i], g(i, j));
      const BElement b = sigma_dprime(w.sigma, od, u7, u);
      if (mod_a2_rank(f, b) > 2) return false;
      for (Elem t = 0; t < f.p(); ++t)
        if (skew_rank(lift(f, b, t)) <= 4) return true;
      return false;
    };
    const DimEstimate e = slice_dim_estimate(f, 8, test, rng, c.slice());
    m[std::to_string(p)] = Json{{"chart_dim", 8}, {"estimate", estimate_to_json(e)}, {"redraws", redraws}};
  }
  m["reference"] = "codimension >= 5, i.e. dim <= 3 on the 8-dim chart";
  return {Status::ReportOnly, prime_json(primes), m};
}

Outcome determinism_equivariance(const Ctx& c);

using CheckFn = Outcome (*)(const Ctx&);

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> r{
      {"pfaffian-identity", pfaffian_identity},
      {"low-dim-peskine", low_dim_peskine},
      {"d3310-fibers", d3310_fibers},
      {"sigma-prime-rank", sigma_prime_rank_check},
      {"cubic-fourfold", cubic_fourfold},
      {"o2-dimension", o2_dimension},
      {"cubic-pencil", cubic_pencil},
      {"o5-criterion", o5_criterion},
      {"sigma-dprime-generation", sigma_dprime_generation},
      {"birationality", birationality},
      {"quadric-pencil", quadric_pencil_check},
      {"fiber-singularities", fiber_singularities_check},
      {"k3-conic-fibration", k3_conic_fibration},
      {"determinism-equivariance", determinism_equivariance},
      {"cubic-singularity-probe", cubic_singularity_probe_check},
      {"o5-locus-dimension", o5_locus_dimension},
  };
  return r;
}

Outcome determinism_equivariance(const Ctx& c) {
  Json identical = Json::object();
  bool same = true;
  for (const auto& [id, fn] : registry()) {
    if (id == "determinism-equivariance") continue;
    CheckConfig q = c.cfg;
    q.quick = true;
    q.threads = 1;
    const std::string one = serialize(run_check(id, q));
    q.threads = 3;
    const std::string three = serialize(run_check(id, q));
    identical[id] = one == three;
    same = same && one == three;
  }

  const std::size_t triples = c.n(100, 10);
  std::map<std::string, std::uint64_t> violations{{"peskine_member", 0}, {"dv_member", 0}, {"verify_flag", 0},
                                                  {"sigma_prime_rank", 0}, {"k3_member", 0}};
  std::uint64_t redraws = 0;
  const std::uint32_t p = c.cfg.p.value_or(7);
  const PrimeField f(p), f3(3);
  for (std::size_t t = 0; t < triples; ++t) {
    Rng rng = stream(c.cfg.seed, 14, t);
    const auto w = good_sample(rng, f, redraws);
    const Matrix g = sample_gl(rng, f, 10);
    const Trivector gs = gl_act(g, w.sigma);
    const Flag gflag = transform(g, w.flag);
    const Vec v1 = w.flag[0].basis_vector(0), u = random_vector(rng, f, 10);
    violations["peskine_member"] += peskine_member(w.sigma, v1) != peskine_member(gs, g * v1);
    violations["peskine_member"] += peskine_member(w.sigma, u) != peskine_member(gs, g * u);
    const Subspace r6 = sample_subspace(rng, f, 10, 6);
    violations["dv_member"] += dv_member(w.sigma, w.flag[1]) != dv_member(gs, gflag[1]);
    violations["dv_member"] += dv_member(w.sigma, r6) != dv_member(gs, transform(g, r6));
    violations["verify_flag"] += verify_flag(w.sigma, w.flag, DivisorKind::D1_6_10) !=
                                 verify_flag(gs, gflag, DivisorKind::D1_6_10);
    const auto od = omega_data(w.sigma, w.flag);
    const auto god = omega_data(gs, gflag);
    const Subspace u7 = random_u7(od, rng);
    const Vec l = random_point_off(rng, f, u7, w.flag[1]);
    violations["sigma_prime_rank"] +=
        sigma_prime_rank(w.sigma, od, u7, l) != sigma_prime_rank(gs, god, transform(g, u7), g * l);

    Rng rng3 = stream(c.cfg.seed, 14, 1'000'000 + t);
    const auto w3 = sample_trivector(rng3, DivisorKind::D1_6_10, f3);
    const auto ext = isotropic_extensions(w3.sigma, w3.flag);
    const Subspace& u8 = ext[rng3.below(ext.size())];
    const Matrix g3 = sample_gl(rng3, f3, 10);
    violations["k3_member"] += k3_member(w3.sigma, w3.flag, u8).member !=
                               k3_member(gl_act(g3, w3.sigma), transform(g3, w3.flag), transform(g3, u8)).member;
  }
  std::uint64_t total = 0;
  for (const auto& [k, v] : violations) total += v;
  return {verdict(same && total == 0), Json{{"equivariance", p}, {"k3", 3}},
          Json{{"identical_across_threads", identical},
               {"thread_counts", {1, 3}},
               {"triples", triples},
               {"violations", violations},
               {"redraws", redraws}}};
}

}  // namespace

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, fn] : registry()) out.push_back(id);
    return out;
  }();
  return ids;
}

bool is_check_id(const std::string& id) {
  const auto& ids = check_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

CheckReport run_check(const std::string& id, const CheckConfig& cfg) {
  const auto& reg = registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& e) { return e.first == id; });
  if (it == reg.end()) throw std::invalid_argument("unknown check id: " + id);
  if (cfg.p && !is_prime(*cfg.p)) throw std::invalid_argument("p is not prime");
  const auto start = std::chrono::steady_clock::now();
  const Ctx ctx{cfg};
  Outcome o = it->second(ctx);
  CheckReport r;
  r.check_id = id;
  r.seed = cfg.seed;
  r.p = std::move(o.p);
  r.params = config_params(cfg);
  r.params["trials"] = cfg.trials.value_or(20);
  r.status = o.status;
  r.metrics = std::move(o.metrics);
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace peskine
