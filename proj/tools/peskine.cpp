#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "peskine/checks.hpp"
#include "peskine/divisors.hpp"
#include "peskine/estimate.hpp"
#include "peskine/loci.hpp"
#include "peskine/orbit.hpp"
#include "peskine/report.hpp"

using namespace peskine;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kBudget = 3 };

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Turns { "key": value } into "--key value" arguments placed right after the subcommand,
// so that flags given on the command line come later and win.
std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  std::vector<std::string> out;
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  for (const auto& [key, v] : j.items()) {
    if (v.is_boolean()) {
      if (v.get<bool>()) out.push_back("--" + key);
    } else if (v.is_array()) {
      out.push_back("--" + key);
      for (const Json& e : v) out.push_back(scalar(e));
    } else if (!v.is_null()) {
      out.push_back("--" + key);
      out.push_back(scalar(v));
    }
  }
  return out;
}

std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path || rest.empty()) return rest;
  auto extra = config_args(*path);
  rest.insert(rest.begin() + 1, extra.begin(), extra.end());
  return rest;
}

struct Locus {
  bool projective = false;
  std::size_t dim = 0;  // ambient coordinates
  PointTest test;
};

struct LocusArgs {
  std::string name;
  std::uint32_t p = 7;
  std::size_t n = 6;
  std::uint64_t seed = 1;
  std::string kind = "GENERAL";
  std::string in;
};

// Owns whatever the predicate refers to.
struct LocusHolder {
  std::optional<Trivector> sigma;
  std::optional<PencilCubics> pc;
  std::optional<PrimeField> field;
  Locus locus;
};

void build_locus(const LocusArgs& a, LocusHolder& h) {
  if (!is_prime(a.p)) throw std::invalid_argument("p is not prime");
  h.field.emplace(a.p);
  const PrimeField& f = *h.field;
  if (a.name == "all") {
    h.locus = {true, a.n, [](std::span<const Elem>) { return true; }};
  } else if (a.name == "peskine") {
    if (!a.in.empty()) {
      h.sigma = load_trivector(a.in);
      if (h.sigma->field().p() != a.p) throw std::invalid_argument("--p does not match the trivector file");
    } else {
      Rng rng(a.seed);
      const DivisorKind kind = parse_divisor_kind(a.kind);
      h.sigma = kind == DivisorKind::General ? Trivector::random(rng, f, a.n) : sample_trivector(rng, kind, f).sigma;
    }
    const Trivector* s = &*h.sigma;
    h.locus = {true, s->n(), [s](std::span<const Elem> u) { return peskine_member(*s, u); }};
  } else if (a.name == "o2" || a.name == "sing-o2") {
    h.pc = pencil_cubics(f);
    const PencilCubics* pc = &*h.pc;
    if (a.name == "o2")
      h.locus = {false, kBDim, [pc](std::span<const Elem> x) { return o2_member(*pc, to_belement(x)); }};
    else
      h.locus = {false, kBDim, [pc](std::span<const Elem> x) { return sing_o2_member(*pc, to_belement(x)); }};
  } else if (a.name == "o5") {
    const PrimeField* fp = &*h.field;
    h.locus = {false, kBDim, [fp](std::span<const Elem> x) { return o5_sufficient_member(*fp, to_belement(x)); }};
  } else {
    throw std::invalid_argument("unknown locus '" + a.name + "' (all, peskine, o2, sing-o2, o5)");
  }
}

void add_locus_options(CLI::App* sub, LocusArgs& a) {
  sub->add_option("--locus", a.name, "all | peskine | o2 | sing-o2 | o5")->required();
  sub->add_option("--p", a.p, "prime");
  sub->add_option("--n", a.n, "ambient dimension for all / random peskine");
  sub->add_option("--seed", a.seed, "seed of the random trivector");
  sub->add_option("--kind", a.kind, "GENERAL | D3_3_10 | D1_6_10 | D4_7_7");
  sub->add_option("--in", a.in, "trivector JSON for peskine");
}

int run(int argc, char** argv) {
  CLI::App app{"Exact finite-field experiments on trivectors in ten variables"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;

  unsigned threads = default_threads();
  std::uint64_t budget = 100'000'000;

  // sample
  auto* sample = app.add_subcommand("sample", "write a random trivector of a given kind");
  std::string kind = "GENERAL", out;
  std::uint32_t p = 101;
  std::uint64_t seed = 1;
  std::size_t n = 10;
  sample->add_option("--kind", kind, "GENERAL | D3_3_10 | D1_6_10 | D4_7_7");
  sample->add_option("--p", p, "prime");
  sample->add_option("--seed", seed, "seed");
  sample->add_option("--n", n, "dimension for GENERAL");
  sample->add_option("--out", out, "output path (stdout if omitted)");

  // verify
  auto* verify = app.add_subcommand("verify", "run one check, or all of them");
  std::string check_id;
  CheckConfig cfg;
  std::optional<std::uint32_t> vp;
  std::optional<std::size_t> vtrials;
  std::string vout;
  verify->add_option("check_id", check_id, "check id or 'all'")->required();
  verify->add_option("--p", vp, "replace the default primes");
  verify->add_option("--seed", cfg.seed, "seed");
  verify->add_option("--trials", vtrials, "slice trials per level");
  verify->add_option("--threads", cfg.threads, "worker threads");
  verify->add_option("--budget", cfg.budget, "membership tests per scan");
  verify->add_option("--hit-threshold", cfg.hit_threshold, "slice hit threshold");
  verify->add_option("--miss-threshold", cfg.miss_threshold, "slice miss threshold");
  verify->add_flag("--quick", cfg.quick, "reduced sample sizes");
  verify->add_option("--out", vout, "report path (stdout if omitted)");

  // scan
  auto* scan = app.add_subcommand("scan", "enumerate a locus exhaustively");
  LocusArgs scan_args;
  bool points = false;
  std::string scan_out;
  add_locus_options(scan, scan_args);
  scan->add_option("--threads", threads, "worker threads");
  scan->add_option("--budget", budget, "membership tests");
  scan->add_flag("--points", points, "list the points");
  scan->add_option("--out", scan_out, "output path (stdout if omitted)");

  // estimate-dim
  auto* est = app.add_subcommand("estimate-dim", "slice estimate of a locus dimension");
  LocusArgs est_args;
  SliceConfig slice;
  std::uint64_t est_seed = 1;
  std::string est_out;
  add_locus_options(est, est_args);
  est->add_option("--trials", slice.trials, "slices per level");
  est->add_option("--slice-seed", est_seed, "seed of the slices");
  est->add_option("--threads", slice.threads, "worker threads");
  est->add_option("--budget", slice.budget, "membership tests");
  est->add_option("--hit-threshold", slice.hit_threshold, "hit threshold");
  est->add_option("--miss-threshold", slice.miss_threshold, "miss threshold");
  est->add_option("--out", est_out, "output path (stdout if omitted)");

  // report
  auto* rep = app.add_subcommand("report", "aggregate report files");
  std::vector<std::string> inputs;
  std::string rep_out;
  rep->add_option("--in", inputs, "report files")->required();
  rep->add_option("--out", rep_out, "aggregate path");

  for (auto* sub : {sample, verify, scan, est, rep}) sub->add_option("--config", config_path, "JSON file of flag values");

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sample) {
      if (!is_prime(p)) throw std::invalid_argument("p is not prime");
      const PrimeField f(p);
      Rng rng(seed);
      const DivisorKind k = parse_divisor_kind(kind);
      const Trivector s = k == DivisorKind::General ? Trivector::random(rng, f, n) : sample_trivector(rng, k, f).sigma;
      write_output(out, trivector_to_json(s).dump() + "\n");
      return kOk;
    }
    if (*verify) {
      cfg.p = vp;
      cfg.trials = vtrials;
      if (cfg.p && !is_prime(*cfg.p)) throw std::invalid_argument("p is not prime");
      std::vector<std::string> ids;
      if (check_id == "all") ids = check_ids();
      else if (is_check_id(check_id)) ids = {check_id};
      else throw std::invalid_argument("unknown check id '" + check_id + "'");
      std::vector<CheckReport> reports;
      for (const auto& id : ids) reports.push_back(run_check(id, cfg));
      if (ids.size() == 1) {
        write_output(vout, serialize(reports[0]));
        const bool ok = emit_report(reports, "", vout.empty() ? std::cerr : std::cout);
        return ok ? kOk : kFail;
      }
      const Json agg = aggregate(reports);
      if (vout.empty()) std::cout << agg.dump(2) << "\n";
      const bool ok = emit_report(reports, vout, vout.empty() ? std::cerr : std::cout);
      return ok ? kOk : kFail;
    }
    if (*scan) {
      LocusHolder h;
      build_locus(scan_args, h);
      const ScanOptions opts{budget, threads};
      const auto r = h.locus.projective ? enumerate_projective(*h.field, h.locus.dim, h.locus.test, opts, points)
                                        : enumerate_affine(*h.field, h.locus.dim, h.locus.test, opts, points);
      Json j{{"locus", scan_args.name},
             {"p", scan_args.p},
             {"ambient", h.locus.projective ? "projective" : "affine"},
             {"coordinates", h.locus.dim},
             {"count", r.count}};
      if (points) j["points"] = r.points;
      write_output(scan_out, j.dump(2) + "\n");
      return kOk;
    }
    if (*est) {
      LocusHolder h;
      build_locus(est_args, h);
      Rng rng(est_seed);
      const PointTest test = h.locus.projective ? affine_cone(h.locus.test) : h.locus.test;
      const DimEstimate e = slice_dim_estimate(*h.field, h.locus.dim, test, rng, slice);
      Json j{{"locus", est_args.name},
             {"p", est_args.p},
             {"ambient", h.locus.projective ? "projective" : "affine"},
             {"coordinates", h.locus.dim},
             {"estimate", estimate_to_json(e, h.locus.projective ? -1 : 0)},
             {"hit_threshold", slice.hit_threshold},
             {"miss_threshold", slice.miss_threshold}};
      write_output(est_out, j.dump(2) + "\n");
      return kOk;
    }
    if (*rep) {
      std::vector<CheckReport> reports;
      for (const auto& path : inputs) {
        auto more = load_reports(path);
        reports.insert(reports.end(), more.begin(), more.end());
      }
      return emit_report(reports, rep_out, std::cout) ? kOk : kFail;
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
