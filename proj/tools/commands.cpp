#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "allax/cmv.hpp"
#include "allax/flows.hpp"
#include "allax/hamiltonians.hpp"
#include "allax/lax.hpp"
#include "allax/opuc.hpp"
#include "allax/poisson.hpp"
#include "manifest.hpp"

namespace allax::cli {
namespace {

using nlohmann::json;

json cjson(Complex z) { return json::array({z.real(), z.imag()}); }

json cjson(const CoeffVector& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(cjson(z));
  return a;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
  if (!out) throw UsageError("write failed: " + path);
}

GradientMethod parse_method(const std::string& m) {
  if (m == "analytic") return GradientMethod::Analytic;
  if (m == "fd") return GradientMethod::FiniteDifference;
  throw UsageError("unknown gradient method '" + m + "' (analytic|fd)");
}

std::vector<GradientMethod> parse_methods(const std::string& m) {
  if (m == "both") return {GradientMethod::Analytic, GradientMethod::FiniteDifference};
  return {parse_method(m)};
}

std::string threshold_key(GradientMethod m) {
  return m == GradientMethod::Analytic ? "analytic" : "fd";
}

double threshold(const GlobalOptions& g, const std::string& key) {
  return g.thresholds.at(key);
}

RunManifest make_manifest(const GlobalOptions& g, std::string command,
                          std::string input, const std::string& bytes,
                          std::uint64_t seed) {
  RunManifest m;
  m.command = std::move(command);
  m.input = std::move(input);
  m.input_digest = sha256_hex(bytes);
  m.seed = seed;
  m.thresholds = g.thresholds;
  m.timestamp = utc_now();
  return m;
}

/// Coefficient data for one run, plus the bytes the digest covers.
struct Inputs {
  std::string description;
  std::string bytes;
  std::uint64_t seed = 0;
  /// File input: one sequence. Random input: one draw per case and index.
  std::vector<VerblunskySequence> sequences;
  bool random = false;
};

std::mt19937_64 run_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(index)};
  return std::mt19937_64(ss);
}

/// Draw `index` for every case: period p, finite length p + 1, half-line
/// length max(p, 12).
std::vector<VerblunskySequence> random_draws(std::size_t p, std::uint64_t seed,
                                             std::uint64_t index) {
  auto rng = run_rng(seed, index);
  std::vector<VerblunskySequence> out;
  out.push_back(VerblunskySequence::periodic(random_period(p, rng)));
  CoeffVector f = random_period(p, rng);
  f.push_back(Complex(-1.0, 0.0));
  out.push_back(VerblunskySequence::finite(std::move(f)));
  out.push_back(VerblunskySequence::infinite(random_period(std::max<std::size_t>(p, 12), rng)));
  return out;
}

Inputs load_inputs(const GlobalOptions& g, const InputOptions& o, bool periodic_only) {
  Inputs in;
  if (!o.coeffs.empty() && !o.random.empty())
    throw UsageError("--coeffs and --random are mutually exclusive");
  if (!o.coeffs.empty()) {
    in.description = o.coeffs;
    in.bytes = read_file(o.coeffs);
    in.seed = g.seed;
    in.sequences.push_back(parse_coefficients(in.bytes));
    if (periodic_only && in.sequences.front().sequence_case() != SequenceCase::Periodic)
      throw Error(ErrorCode::InvalidConfig, "periodic coefficients required");
    return in;
  }
  if (o.random.size() != 3) throw UsageError("need --coeffs FILE or --random P SEED COUNT");
  const auto p = static_cast<std::size_t>(o.random[0]);
  const std::uint64_t seed = o.random[1];
  const std::uint64_t count = o.random[2];
  if (p == 0 || count == 0) throw UsageError("--random needs P > 0 and COUNT > 0");
  in.random = true;
  in.seed = seed;
  in.description = "random p=" + std::to_string(p) + " seed=" + std::to_string(seed) +
                   " count=" + std::to_string(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    for (auto& s : random_draws(p, seed, i)) {
      if (periodic_only && s.sequence_case() != SequenceCase::Periodic) continue;
      in.bytes += dump_coefficients(s);
      in.sequences.push_back(std::move(s));
    }
  }
  return in;
}

VerblunskySequence load_one(const std::string& path, std::string& bytes) {
  if (path.empty()) throw UsageError("--coeffs FILE is required");
  bytes = read_file(path);
  return parse_coefficients(bytes);
}

VerblunskySequence require_periodic(VerblunskySequence s) {
  if (s.sequence_case() != SequenceCase::Periodic)
    throw Error(ErrorCode::InvalidConfig, "periodic coefficients required");
  return s;
}

/// Runs job(i) for i < count on up to `threads` workers. Results land by
/// index, so the output does not depend on scheduling. The first exception
/// in index order is rethrown.
template <typename Job>
void parallel_for(std::size_t count, unsigned threads, Job job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::size_t i) {
    try {
      job(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (threads == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, count); ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) run(i);
      });
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

json report_json(const ResidualReport& r, double limit) {
  json j;
  j["variant"] = r.variant.name();
  j["n"] = r.variant.n;
  j["case"] = std::string(to_string(r.variant.sequence_case()));
  j["method"] = std::string(to_string(r.method));
  j["d"] = r.d;
  j["matrix_dim"] = r.matrix_dim;
  j["max_abs_residual"] = r.max_abs_residual;
  j["worst_entry"] = json::array({r.worst_row, r.worst_col});
  j["orbit_class_max"] = r.orbit_class_max;
  j["other_max"] = r.other_max;
  j["rhs_outside_band"] = r.rhs_outside_band ? json(*r.rhs_outside_band) : json(nullptr);
  j["small_dp"] = r.small_dp;
  j["threshold"] = limit;
  j["pass"] = r.max_abs_residual < limit;
  return j;
}

/// JSON to --out when given; to stdout with --json, otherwise the text.
void emit(const GlobalOptions& g, const json& doc, const std::string& text) {
  if (!g.out.empty()) write_file(g.out, doc.dump(2) + "\n");
  if (g.json)
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << text;
}

std::string sci(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3e", x);
  return b;
}

}  // namespace

int cmd_verify(const GlobalOptions& g, const VerifyOptions& o) {
  if (!o.all && o.variants.empty()) throw UsageError("verify needs --all or --variant NAME");
  if (o.n.empty() || o.d.empty()) throw UsageError("--n and --d need at least one value");
  const Inputs in = load_inputs(g, o.input, false);
  const auto methods = parse_methods(o.method);

  struct Job {
    std::size_t input;
    LaxVariant variant;
    std::size_t d;
    GradientMethod method;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < in.sequences.size(); ++i) {
    const SequenceCase sc = in.sequences[i].sequence_case();
    for (unsigned n : o.n) {
      std::vector<LaxVariant> vs;
      if (o.all) {
        for (const auto& v : all_lax_variants(n))
          if (v.sequence_case() == sc) vs.push_back(v);
      } else {
        for (const auto& name : o.variants) {
          const auto v = LaxVariant::parse(name, n);
          // A named variant runs against every input in random mode and
          // must match the file's case otherwise.
          if (in.random && v.sequence_case() != sc) continue;
          vs.push_back(v);
        }
      }
      for (const auto& v : vs) {
        // K0 has no order, and only periodic variants depend on d.
        if (v.kind == LaxKind::PeriodicK0 && n != o.n.front()) continue;
        const bool uses_d = v.sequence_case() == SequenceCase::Periodic;
        for (std::size_t d : o.d) {
          if (!uses_d && d != o.d.front()) continue;
          for (auto m : methods) jobs.push_back({i, v, d, m});
        }
      }
    }
  }
  if (jobs.empty()) throw Error(ErrorCode::InvalidConfig, "no variant matches the input");

  std::vector<json> reports(jobs.size());
  parallel_for(jobs.size(), g.threads, [&](std::size_t k) {
    const Job& job = jobs[k];
    const auto r = lax_residual(job.variant, in.sequences[job.input], job.d, job.method);
    json j = report_json(r, threshold(g, threshold_key(job.method)));
    j["input"] = job.input;
    reports[k] = std::move(j);
  });

  bool pass = true;
  std::size_t failures = 0;
  std::map<std::string, double> worst;
  for (const auto& r : reports) {
    const bool ok = r["pass"].get<bool>();
    pass = pass && ok;
    failures += ok ? 0 : 1;
    auto& w = worst[r["method"].get<std::string>()];
    w = std::max(w, r["max_abs_residual"].get<double>());
  }
  json doc;
  doc["manifest"] = make_manifest(g, "verify", in.description, in.bytes, in.seed).to_json();
  doc["reports"] = reports;
  doc["summary"] = {{"count", reports.size()}, {"failures", failures}, {"worst", worst}};
  doc["pass"] = pass;

  std::ostringstream text;
  text << "verify: " << reports.size() << " reports over " << in.sequences.size()
       << " inputs, " << failures << " failures\n";
  for (const auto& [m, w] : worst) text << "  worst " << m << " residual " << sci(w) << "\n";
  text << (pass ? "PASS\n" : "FAIL\n");
  emit(g, doc, text.str());
  return pass ? 0 : 1;
}

int cmd_verify_lax(const GlobalOptions& g, const VerifyLaxOptions& o) {
  std::string bytes;
  const auto seq = load_one(o.coeffs, bytes);
  const auto method = parse_method(o.method);
  const auto v = LaxVariant::parse(o.variant, o.n);
  const auto r = lax_residual(v, seq, o.d, method);
  const double limit = threshold(g, threshold_key(method));
  json doc = report_json(r, limit);
  doc["manifest"] = make_manifest(g, "verify-lax", o.coeffs, bytes, g.seed).to_json();
  const bool pass = doc["pass"].get<bool>();
  emit(g, doc,
       v.name() + " n=" + std::to_string(v.n) + " d=" + std::to_string(r.d) +
           " residual " + sci(r.max_abs_residual) + (pass ? " PASS\n" : " FAIL\n"));
  return pass ? 0 : 1;
}

int cmd_verify_bracket(const GlobalOptions& g, const VerifyBracketOptions& o) {
  if (o.max_order == 0) throw UsageError("--n must be positive");
  const Inputs in = load_inputs(g, o.input, true);
  const unsigned top = o.max_order;

  std::vector<json> reports(in.sequences.size());
  parallel_for(in.sequences.size(), g.threads, [&](std::size_t i) {
    const auto& s = in.sequences[i];
    const std::size_t p = s.effective_period();
    double analytic_pair = 0.0, versus_fd = 0.0, commute = 0.0;
    std::vector<WirtingerGradient> grads;
    for (unsigned m = 1; m <= top; ++m) {
      std::size_t d = 1;
      while ((d * p) % 2 != 0 || d * p < 2 * m + 1) ++d;
      const auto closed = grad_K(m, s);
      const auto traced = grad_K_via_trace(m, s, d);
      const auto fd = fd_gradient([m](const VerblunskySequence& x) { return K(m, x); }, s);
      analytic_pair = std::max(analytic_pair, max_abs_diff(closed, traced));
      versus_fd = std::max({versus_fd, max_abs_diff(closed, fd), max_abs_diff(traced, fd)});
      grads.push_back(closed);
    }
    const auto g0 = grad_K0(s);
    for (std::size_t a = 0; a < grads.size(); ++a) {
      commute = std::max(commute, std::abs(bracket(g0, grads[a], s)));
      for (std::size_t b = 0; b < grads.size(); ++b) {
        commute = std::max(commute, std::abs(bracket(grads[a], grads[b], s)));
        commute = std::max(commute,
                           std::abs(bracket(grads[a], conjugate_gradient(grads[b]), s)));
      }
    }
    reports[i] = {{"input", i},
                  {"period", p},
                  {"gradient_analytic_pair", analytic_pair},
                  {"gradient_vs_fd", versus_fd},
                  {"commutation_max", commute},
                  {"pass", analytic_pair < threshold(g, "analytic") &&
                               versus_fd < threshold(g, "fd") &&
                               commute < threshold(g, "commute")}};
  });

  bool pass = true;
  double worst_pair = 0.0, worst_fd = 0.0, worst_commute = 0.0;
  for (const auto& r : reports) {
    pass = pass && r["pass"].get<bool>();
    worst_pair = std::max(worst_pair, r["gradient_analytic_pair"].get<double>());
    worst_fd = std::max(worst_fd, r["gradient_vs_fd"].get<double>());
    worst_commute = std::max(worst_commute, r["commutation_max"].get<double>());
  }
  json doc;
  doc["manifest"] =
      make_manifest(g, "verify-bracket", in.description, in.bytes, in.seed).to_json();
  doc["max_order"] = top;
  doc["reports"] = reports;
  doc["summary"] = {{"gradient_analytic_pair", worst_pair},
                    {"gradient_vs_fd", worst_fd},
                    {"commutation_max", worst_commute}};
  doc["pass"] = pass;
  emit(g, doc,
       "verify-bracket: gradients " + sci(worst_pair) + " (analytic pair), " + sci(worst_fd) +
           " (vs fd); brackets " + sci(worst_commute) + (pass ? "\nPASS\n" : "\nFAIL\n"));
  return pass ? 0 : 1;
}

namespace {

/// Monitors that a flow of `h` keeps constant for data of case `c`. "H" is
/// the generator itself.
std::vector<std::string> conserved_monitors(SequenceCase c, const HamiltonianSpec& h) {
  switch (c) {
    case SequenceCase::Periodic:
      return {"H", "K0", "ReK", "ImK", "cpoly", "inv", "unitarity"};
    case SequenceCase::Finite:
      // K_0^f does not commute with the K_n^f, so generators built from it
      // only conserve themselves.
      if (h.kind == HamiltonianKind::ReK || h.kind == HamiltonianKind::ImK)
        return {"H", "ReK", "ImK", "unitarity"};
      return {"H", "unitarity"};
    case SequenceCase::InfiniteTruncated:
      return {"H"};
  }
  return {"H"};
}

}  // namespace

int cmd_flow(const GlobalOptions& g, const FlowOptions& o) {
  if (g.out.empty()) throw UsageError("flow needs --out FILE for the trajectory CSV");
  std::string bytes;
  const auto seq = load_one(o.coeffs, bytes);
  FlowConfig cfg;
  cfg.hamiltonian = HamiltonianSpec::parse(o.hamiltonian);
  cfg.t_end = o.t_end;
  cfg.dt = o.dt;
  cfg.monitor_every = o.monitor_every;
  cfg.gradient_method = parse_method(o.method);
  cfg.backward = o.backward;

  auto traj = integrate(cfg, seq);
  for (auto& rec : traj) {
    const auto cur = VerblunskySequence::unchecked(seq.sequence_case(), rec.alphas);
    rec.monitors["H"] = cfg.hamiltonian.evaluate(cur).real();
  }
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  write_file(g.out, csv.str());

  const auto drifts = drift_report(traj);
  const auto conserved = conserved_monitors(seq.sequence_case(), cfg.hamiltonian);
  const double worst = max_drift(drifts, conserved);
  const double limit = threshold(g, "drift");
  const bool pass = worst < limit;

  json doc;
  doc["manifest"] = make_manifest(g, "flow", o.coeffs, bytes, g.seed).to_json();
  doc["config"] = {{"hamiltonian", cfg.hamiltonian.name()},
                   {"t_end", cfg.t_end},
                   {"dt", cfg.dt},
                   {"monitor_every", cfg.monitor_every},
                   {"method", std::string(to_string(cfg.gradient_method))},
                   {"backward", cfg.backward}};
  doc["trajectory"] = g.out;
  doc["records"] = traj.size();
  doc["t_final"] = traj.back().t;
  doc["drift"] = drifts;
  doc["conserved"] = conserved;
  doc["conserved_max_drift"] = worst;
  doc["threshold"] = limit;
  if (o.order_check) {
    std::vector<std::string> library_monitors;
    for (const auto& name : conserved)
      if (name != "H") library_monitors.push_back(name);
    const auto oc = order_check(cfg, seq, library_monitors);
    doc["order_check"] = {{"dt_coarse", oc.dt_coarse},
                          {"drift_coarse", oc.drift_coarse},
                          {"drift_fine", oc.drift_fine},
                          {"ratio", oc.ratio},
                          {"observed_order", oc.observed_order}};
  }
  doc["pass"] = pass;
  write_file(g.out + ".manifest.json", doc.dump(2) + "\n");

  if (g.json) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "flow " << cfg.hamiltonian.name() << ": " << traj.size() << " records to "
              << g.out << ", conserved drift " << sci(worst) << ", maxmod drift "
              << sci(drifts.at("maxmod")) << (pass ? " PASS\n" : " FAIL\n");
  }
  return pass ? 0 : 1;
}

int cmd_discriminant(const GlobalOptions& g, const DiscriminantOptions& o) {
  if (o.grid == 0) throw UsageError("--grid must be positive");
  std::string bytes;
  const auto seq = require_periodic(load_one(o.coeffs, bytes));
  const bool two = seq.effective_period() == 2;
  const Complex a0 = seq.alphas()[0];
  const Complex a1 = seq.alphas()[two ? 1 : 0];

  std::ostringstream csv;
  csv.precision(17);
  csv << "theta,re,im" << (two ? ",closed_form" : "") << "\n";
  json rows = json::array();
  for (std::size_t k = 0; k < o.grid; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(o.grid);
    const Complex delta = discriminant(seq, std::polar(1.0, theta));
    json row = {{"theta", theta}, {"re", delta.real()}, {"im", delta.imag()}};
    csv << theta << "," << delta.real() << "," << delta.imag();
    if (two) {
      const double closed = discriminant_period_two(a0, a1, theta);
      row["closed_form"] = closed;
      csv << "," << closed;
    }
    csv << "\n";
    rows.push_back(std::move(row));
  }
  const auto manifest = make_manifest(g, "discriminant", o.coeffs, bytes, g.seed).to_json();
  if (!g.out.empty()) {
    write_file(g.out, csv.str());
    write_file(g.out + ".manifest.json", manifest.dump(2) + "\n");
  }
  if (g.json)
    std::cout << json{{"manifest", manifest}, {"rows", rows}}.dump(2) << "\n";
  else if (g.out.empty())
    std::cout << csv.str();
  return 0;
}

int cmd_invariants(const GlobalOptions& g, const InvariantsOptions& o) {
  if (o.max_order == 0) throw UsageError("--n must be positive");
  std::string bytes;
  const auto seq = require_periodic(load_one(o.coeffs, bytes));
  json ks = json::array();
  for (unsigned n = 1; n <= o.max_order; ++n) ks.push_back(cjson(K(n, seq)));
  const auto poly = discriminant_poly(seq);
  json doc;
  doc["manifest"] = make_manifest(g, "invariants", o.coeffs, bytes, g.seed).to_json();
  doc["K"] = ks;
  doc["K0"] = K0(seq);
  doc["c"] = cjson(poly.c);
  doc["invariant_vector"] = invariant_vector(seq);
  if (!g.out.empty()) write_file(g.out, doc.dump(2) + "\n");
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int cmd_dump(const GlobalOptions& g, const DumpOptions& o) {
  std::string bytes;
  const auto seq = load_one(o.coeffs, bytes);
  ComplexMatrix m;
  if (o.what == "floquet") {
    m = build_floquet(require_periodic(seq), o.d);
  } else if (o.what == "finite") {
    if (seq.sequence_case() != SequenceCase::Finite)
      throw Error(ErrorCode::InvalidConfig, "finite coefficients required");
    m = build_finite_cmv(seq);
  } else if (o.what == "halfline") {
    const std::size_t size = o.size ? o.size : seq.size() + seq.size() % 2;
    m = build_half_line_section(seq, size);
  } else if (o.what == "theta") {
    m = make_theta(alpha_at(seq, o.index)).matrix();
  } else {
    throw UsageError("unknown matrix '" + o.what + "' (floquet|finite|halfline|theta)");
  }
  std::ostringstream csv;
  write_matrix_csv(csv, m);
  if (g.out.empty()) {
    std::cout << csv.str();
  } else {
    write_file(g.out, csv.str());
    write_file(g.out + ".manifest.json",
               make_manifest(g, "dump " + o.what, o.coeffs, bytes, g.seed).to_json().dump(2) +
                   "\n");
  }
  return 0;
}

int cmd_selftest(const GlobalOptions& g) {
  struct Check {
    std::string name;
    double value;
    double limit;
  };
  std::vector<Check> checks;
  const double analytic = threshold(g, "analytic");

  auto periodic = [&](std::size_t p, std::uint64_t i) {
    auto rng = run_rng(g.seed, i);
    return VerblunskySequence::periodic(random_period(p, rng));
  };

  double lax = 0.0;
  for (std::uint64_t i = 0; i < 4; ++i) {
    const auto draws = random_draws(4, g.seed, i);
    for (unsigned n = 1; n <= 2; ++n)
      for (const auto& v : all_lax_variants(n))
        for (const auto& s : draws)
          if (s.sequence_case() == v.sequence_case())
            lax = std::max(lax, lax_residual(v, s, 1).max_abs_residual);
  }
  checks.push_back({"lax_residuals", lax, analytic});

  double trace_d = 0.0;
  for (unsigned n = 1; n <= 3; ++n) {
    const auto s = periodic(4, 100 + n);
    const std::size_t d = minimal_d(4, n);
    trace_d = std::max(trace_d, std::abs(K_with_d(n, s, d) - K_with_d(n, s, d + 2)));
  }
  checks.push_back({"trace_d_independence", trace_d, 1e-12});

  {
    const auto s = periodic(4, 200);
    checks.push_back({"commutation_K1_K2",
                      std::abs(bracket(grad_K(1, s), grad_K(2, s), s)),
                      threshold(g, "commute")});
  }

  double zero_pair = 0.0;
  const auto zero = VerblunskySequence::periodic({Complex(0.0), Complex(0.0)});
  for (int k = 0; k < 16; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / 16.0;
    zero_pair = std::max(
        zero_pair, std::abs(discriminant(zero, std::polar(1.0, theta)) - 2.0 * std::cos(theta)));
  }
  checks.push_back({"discriminant_zero_pair", zero_pair, 1e-12});

  {
    FlowConfig cfg;
    cfg.t_end = 1.0;
    cfg.dt = 1e-3;
    cfg.monitor_every = 10;
    const auto s = VerblunskySequence::periodic({Complex(0.4), Complex(0.4)});
    checks.push_back({"geronimus_maxmod", drift_report(integrate(cfg, s)).at("maxmod"), 1e-8});
  }

  double det = 0.0;
  {
    auto rng = run_rng(g.seed, 300);
    const auto a = random_period(8, rng);
    for (int k = 0; k < 8; ++k) {
      const Complex z = std::polar(1.0, 0.7 * k);
      det = std::max(det, std::abs(transfer_determinant(a, 8, z) - std::pow(z, 8)));
    }
  }
  checks.push_back({"transfer_determinant", det, 1e-12});

  bool pass = true;
  json list = json::array();
  std::ostringstream text;
  for (const auto& c : checks) {
    const bool ok = c.value < c.limit;
    pass = pass && ok;
    list.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", ok}});
    text << (ok ? "PASS " : "FAIL ") << c.name << " " << sci(c.value) << " < " << sci(c.limit)
         << "\n";
  }
  json doc;
  doc["manifest"] = make_manifest(g, "selftest", "builtin", "", g.seed).to_json();
  doc["checks"] = list;
  doc["pass"] = pass;
  emit(g, doc, text.str());
  return pass ? 0 : 1;
}

}  // namespace allax::cli
