#include "outputs.hpp"

#include <binoed/io/experiment.hpp>
#include <binoed/oracle/enumerate.hpp>

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace binoed;
using namespace binoed::cli;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string bundle;
  std::string design;
  std::string out_dir = ".";
  Index m0 = -1;
  double delta = -1.0;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  Index count = 1000;
};

// Model state loaded from a bundle directory.
struct Session {
  Bundle bundle;
  ExperimentConfig config;
  LowRankObjective obj;
  std::uint64_t seed;

  Provenance prov(const std::string& command) const { return {bundle.config_hash, seed, command}; }

  ExperimentRecord record(const std::string& command) const {
    ExperimentRecord r;
    r.command = command;
    r.config = bundle.config;
    r.config_hash = bundle.config_hash;
    r.seed = seed;
    r.timings["build_seconds"] = bundle.build_seconds;
    return r;
  }
};

Session open_session(const Options& o) {
  if (o.bundle.empty()) throw ConfigError("--bundle is required");
  Bundle b = load_bundle(o.bundle);
  ExperimentConfig cfg = ExperimentConfig::from_json(b.config);
  LowRankObjective obj = b.objective();
  std::uint64_t seed = o.seed.value_or(cfg.seed);
  return Session{std::move(b), std::move(cfg), std::move(obj), seed};
}

Index require_m0(const Options& o, const LowRankObjective& obj) {
  if (o.m0 < 0) throw ConfigError("--m0 is required");
  if (o.m0 > obj.m()) {
    throw ConfigError("--m0 = " + std::to_string(o.m0) + " exceeds the number of sensors m = " +
                      std::to_string(obj.m()));
  }
  return o.m0;
}

fs::path prepare_out_dir(const Options& o) {
  fs::path dir(o.out_dir);
  fs::create_directories(dir);
  return dir;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs body(i) for i in [0, n) over the available cores; results are
// written by index, so the output order does not depend on scheduling.
template <typename F>
void parallel_for(Index n, F body) {
  unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                    static_cast<unsigned>(n)));
  std::atomic<Index> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (Index i = next++; i < n; i = next++) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int cmd_build(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config is required");
  ExperimentConfig cfg = load_config(o.config);
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.synthetic.seed = *o.seed;
  }
  BuiltModel model = build_model(cfg);
  fs::path dir = prepare_out_dir(o);
  Bundle b = model.to_bundle();
  save_bundle(dir, b);
  ExperimentRecord rec;
  rec.command = "build";
  rec.config = b.config;
  rec.config_hash = b.config_hash;
  rec.seed = cfg.seed;
  rec.results = {{"n", model.qr.n()},
                 {"m", model.m},
                 {"m_obs", model.m_obs},
                 {"rank", model.qr.rank()},
                 {"residual_estimate", model.qr.residual_estimate},
                 {"trace_C0", model.objective.trace_C0()},
                 {"noise_sigma", model.noise.sigma.size() ? model.noise.sigma(0) : 0.0}};
  rec.timings["build_seconds"] = model.build_seconds;
  rec.warnings = model.qr.warnings;
  rec.write(dir);
  std::printf("built n=%lld m=%lld m_obs=%lld rank=%lld in %.2f s -> %s\n",
              static_cast<long long>(model.qr.n()), static_cast<long long>(model.m),
              static_cast<long long>(model.m_obs), static_cast<long long>(model.qr.rank()),
              model.build_seconds, dir.string().c_str());
  return 0;
}

int cmd_solve(const Options& o) {
  Session s = open_session(o);
  Index m0 = require_m0(o, s.obj);
  SolverConfig cfg = s.config.solver;
  if (o.tol) cfg.gap_tol = *o.tol;
  auto t0 = std::chrono::steady_clock::now();
  ConvexResult r = solve_convex(s.obj, m0, cfg);
  double secs = seconds_since(t0);
  fs::path dir = prepare_out_dir(o);
  auto prov = s.prov("solve");
  write_design(dir / "solve_design.csv", r.w, prov);
  write_sorted_gradient(dir / "solve_gradient_sorted.csv", r.w, r.grad, r.report.classification, prov);
  write_trace(dir / "solve_trace.csv", r.trace, prov);
  ExperimentRecord rec = s.record("solve");
  rec.results = {{"m0", m0},
                 {"J", r.J},
                 {"converged", r.converged},
                 {"iterations", r.iterations},
                 {"w", vector_json(r.w)},
                 {"report", report_json(r.report)}};
  rec.timings["solve_seconds"] = secs;
  rec.warnings = r.warnings;
  rec.write(dir);
  std::printf("m0=%lld J=%.17g fw_gap=%.3e is_global=%s iterations=%d\n", static_cast<long long>(m0), r.J,
              r.report.fw_gap, r.report.is_global ? "true" : "false", r.iterations);
  if (!r.converged) {
    std::fprintf(stderr, "binoed: convex solve did not converge\n");
    return kExitNumerical;
  }
  return 0;
}

int cmd_continue(const Options& o) {
  Session s = open_session(o);
  Index m0 = require_m0(o, s.obj);
  double delta = o.delta > 0.0 ? o.delta : s.config.delta;
  auto t0 = std::chrono::steady_clock::now();
  ContinuationResult r = p_continuation(s.obj, m0, delta, s.config.solver);
  double secs = seconds_since(t0);
  fs::path dir = prepare_out_dir(o);
  auto prov = s.prov("continue");
  write_design(dir / "continue_design.csv", r.w_binary, prov);
  write_trace(dir / "continue_trace.csv", r.trace, prov);
  std::vector<std::string> cols{"step", "p", "J", "near_binary"};
  for (Index k = 0; k < s.obj.m(); ++k) cols.push_back("w" + std::to_string(k));
  {
    CsvWriter pseq(dir / "continue_pseq.csv", prov, cols);
    for (std::size_t i = 0; i < r.path.size(); ++i) {
      const auto& st = r.path[i];
      pseq.cell(static_cast<Index>(i)).cell(st.p).cell(st.J).cell(st.near_binary);
      for (Index k = 0; k < st.w.size(); ++k) pseq.cell(st.w(k));
      pseq.end_row();
    }
  }
  ExperimentRecord rec = s.record("continue");
  rec.results = {{"m0", m0},
                 {"delta", delta},
                 {"J_relaxed", r.convex.J},
                 {"J_binary", r.J_binary},
                 {"ones", ones_of(r.w_binary)},
                 {"binary", r.binary},
                 {"greedy_added", r.greedy_added},
                 {"fixed_ones", r.fixed_ones},
                 {"fixed_zeros", r.fixed_zeros},
                 {"steps", r.path.size()},
                 {"convex_report", report_json(r.convex.report)}};
  rec.timings["continue_seconds"] = secs;
  rec.warnings = r.warnings;
  rec.write(dir);
  std::printf("m0=%lld J_relaxed=%.17g J_binary=%.17g sensors=%s\n", static_cast<long long>(m0), r.convex.J,
              r.J_binary, join(ones_of(r.w_binary), ' ').c_str());
  return r.convex.converged ? 0 : kExitNumerical;
}

int cmd_verify(const Options& o) {
  Session s = open_session(o);
  Index m0 = require_m0(o, s.obj);
  if (o.design.empty()) throw ConfigError("--design is required");
  Vector w = read_vector_csv(o.design);
  if (w.size() != s.obj.m()) {
    throw ConfigError("design has " + std::to_string(w.size()) + " entries, expected m = " +
                      std::to_string(s.obj.m()));
  }
  check_feasible(w, m0);
  double tol = o.tol.value_or(s.config.solver.verify_tol);
  Vector g = s.obj.gradient(w);
  OptimalityReport r = verify_global(w, g, m0, tol);
  fs::path dir = prepare_out_dir(o);
  auto prov = s.prov("verify");
  write_sorted_gradient(dir / "verify_gradient_sorted.csv", w, g, r.classification, prov);
  ExperimentRecord rec = s.record("verify");
  rec.results = {{"m0", m0}, {"tol", tol}, {"J", s.obj.objective(w)}, {"report", report_json(r)}};
  rec.write(dir);
  std::printf("is_global=%s fw_gap=%.3e case=%s\n", r.is_global ? "true" : "false", r.fw_gap,
              to_string(r.classification.gap_case).c_str());
  for (const auto& v : r.violations) std::printf("violation: %s\n", v.c_str());
  return 0;
}

int cmd_oracle(const Options& o) {
  Session s = open_session(o);
  Index m0 = require_m0(o, s.obj);
  auto t0 = std::chrono::steady_clock::now();
  EnumerationTable t = enumerate_binary([&](const Vector& w) { return s.obj.objective(w); }, s.obj.m(), m0);
  ConvexResult r = solve_convex(s.obj, m0, s.config.solver);
  double secs = seconds_since(t0);
  fs::path dir = prepare_out_dir(o);
  {
    CsvWriter out(dir / "oracle_enumeration.csv", s.prov("oracle"), {"rank", "J", "sensors"});
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      out.cell(static_cast<Index>(i)).cell(t.rows[i].J).cell(join(t.rows[i].ones, ' '));
      out.end_row();
    }
  }
  ExperimentRecord rec = s.record("oracle");
  rec.results = {{"m", t.m},
                 {"m0", m0},
                 {"designs", t.rows.size()},
                 {"best_J", t.rows.front().J},
                 {"best_sensors", t.rows.front().ones},
                 {"best_at_most_J", t.best_at_most.J},
                 {"best_at_most_sensors", t.best_at_most.ones},
                 {"J_relaxed", r.J},
                 {"relaxation_gap", t.rows.front().J - r.J}};
  rec.timings["oracle_seconds"] = secs;
  rec.write(dir);
  std::printf("enumerated %zu designs; best J=%.17g sensors=%s; relaxed J=%.17g\n", t.rows.size(),
              t.rows.front().J, join(t.rows.front().ones, ' ').c_str(), r.J);
  return 0;
}

int cmd_baseline(const Options& o) {
  Session s = open_session(o);
  Index m0 = require_m0(o, s.obj);
  if (o.count < 1) throw ConfigError("--count must be >= 1");
  auto t0 = std::chrono::steady_clock::now();
  BaselineStats st = random_designs([&](const Vector& w) { return s.obj.objective(w); }, s.obj.m(), m0,
                                    o.count, s.seed);
  double secs = seconds_since(t0);
  fs::path dir = prepare_out_dir(o);
  {
    CsvWriter out(dir / "baseline_samples.csv", s.prov("baseline"), {"sample", "J", "sensors"});
    for (std::size_t i = 0; i < st.values.size(); ++i) {
      out.cell(static_cast<Index>(i)).cell(st.values[i]).cell(join(st.designs[i], ' '));
      out.end_row();
    }
  }
  ExperimentRecord rec = s.record("baseline");
  rec.results = {{"m0", m0},       {"count", o.count}, {"min", st.min}, {"max", st.max},
                 {"mean", st.mean}, {"q05", st.q05},    {"q25", st.q25}, {"q50", st.q50},
                 {"q75", st.q75},   {"q95", st.q95}};
  rec.timings["baseline_seconds"] = secs;
  rec.write(dir);
  std::printf("m0=%lld count=%lld min=%.17g mean=%.17g max=%.17g\n", static_cast<long long>(m0),
              static_cast<long long>(o.count), st.min, st.mean, st.max);
  return 0;
}

struct SweepRow {
  ConvexResult convex;
  ContinuationResult cont;
  BaselineStats baseline;
};

int cmd_sweep(const Options& o) {
  Session s = open_session(o);
  Index m0_max = o.m0 < 0 ? s.obj.m() : require_m0(o, s.obj);
  double delta = o.delta > 0.0 ? o.delta : s.config.delta;
  auto t0 = std::chrono::steady_clock::now();
  std::vector<SweepRow> rows(static_cast<std::size_t>(m0_max));
  parallel_for(m0_max, [&](Index i) {
    Index m0 = i + 1;
    auto& row = rows[static_cast<std::size_t>(i)];
    row.cont = p_continuation(s.obj, m0, delta, s.config.solver);
    row.convex = row.cont.convex;
    row.baseline = random_designs([&](const Vector& w) { return s.obj.objective(w); }, s.obj.m(), m0, o.count,
                                  s.seed + static_cast<std::uint64_t>(m0));
  });
  double secs = seconds_since(t0);
  fs::path dir = prepare_out_dir(o);
  ExperimentRecord rec = s.record("sweep");
  json per = json::array();
  bool all_converged = true;
  {
    CsvWriter out(dir / "sweep_comparison.csv", s.prov("sweep"),
                  {"m0", "J_relaxed", "fw_gap", "is_global", "J_binary", "random_min", "random_q05",
                   "random_mean", "random_q50", "random_max", "fraction_beaten", "sensors"});
    for (Index i = 0; i < m0_max; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      double beaten = fraction_beaten(row.baseline, row.cont.J_binary);
      out.cell(i + 1).cell(row.convex.J).cell(row.convex.report.fw_gap)
          .cell(static_cast<Index>(row.convex.report.is_global)).cell(row.cont.J_binary)
          .cell(row.baseline.min).cell(row.baseline.q05).cell(row.baseline.mean).cell(row.baseline.q50)
          .cell(row.baseline.max).cell(beaten).cell(join(ones_of(row.cont.w_binary), ' '));
      out.end_row();
      all_converged &= row.convex.converged;
      per.push_back({{"m0", i + 1},
                     {"J_relaxed", row.convex.J},
                     {"J_binary", row.cont.J_binary},
                     {"sensors", ones_of(row.cont.w_binary)},
                     {"w_relaxed", vector_json(row.convex.w)},
                     {"classification", classification_json(row.convex.report.classification)},
                     {"fw_gap", row.convex.report.fw_gap},
                     {"baseline_seed", s.seed + static_cast<std::uint64_t>(i + 1)},
                     {"fraction_beaten", beaten}});
      for (const auto& w : row.cont.warnings) rec.warnings.push_back("m0=" + std::to_string(i + 1) + ": " + w);
    }
  }
  rec.results = {{"delta", delta}, {"count", o.count}, {"rows", per}};
  rec.timings["sweep_seconds"] = secs;
  rec.write(dir);
  std::printf("swept m0=1..%lld in %.2f s -> %s\n", static_cast<long long>(m0_max), secs,
              (dir / "sweep_comparison.csv").string().c_str());
  return all_converged ? 0 : kExitNumerical;
}

int cmd_variance(const Options& o) {
  Session s = open_session(o);
  if (o.design.empty()) throw ConfigError("--design is required");
  Vector w = read_vector_csv(o.design);
  if (w.size() != s.obj.m()) throw ConfigError("design has the wrong number of entries");
  check_feasible(w, s.obj.m());
  std::optional<HelmholtzModel> helm;
  std::optional<PriorModel> prior;
  if (s.config.kind == ModelKind::helmholtz) {
    helm.emplace(s.config.helmholtz);
    prior.emplace(helm->make_prior(s.config.alpha, s.config.prior_beta()));
  } else {
    prior.emplace(make_synthetic(s.config.synthetic).prior);
  }
  Vector var = posterior_pointwise_variance(s.obj, s.bundle.qr, *prior, w);
  Vector var0 = prior->pointwise_variance();
  fs::path dir = prepare_out_dir(o);
  {
    CsvWriter out(dir / "variance.csv", s.prov("variance"), {"index", "x", "y", "variance", "prior_variance"});
    for (Index i = 0; i < var.size(); ++i) {
      double x = static_cast<double>(i), y = 0.0;
      if (helm) {
        Point p = helm->node_point(helm->source_nodes()[static_cast<std::size_t>(i)]);
        x = p[0];
        y = p[1];
      }
      out.cell(i).cell(x).cell(y).cell(var(i)).cell(var0(i));
      out.end_row();
    }
  }
  double integral = var.dot(prior->mass_diag());
  ExperimentRecord rec = s.record("variance");
  rec.results = {{"J", s.obj.objective(w)}, {"variance_integral", integral}, {"w", vector_json(w)}};
  rec.write(dir);
  std::printf("variance integral=%.17g J=%.17g\n", integral, s.obj.objective(w));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binary A-optimal sensor placement"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", o.out_dir, "Output directory");
    sub->add_option("--seed", o.seed, "Override the configured seed");
  };
  auto add_bundle = [&](CLI::App* sub) {
    sub->add_option("--bundle", o.bundle, "Model bundle directory")->required();
    add_common(sub);
  };

  auto* build = app.add_subcommand("build", "Build a model bundle from a JSON config");
  build->add_option("--config", o.config, "JSON config file")->required();
  add_common(build);

  auto* solve = app.add_subcommand("solve", "Solve the relaxed problem and certify optimality");
  add_bundle(solve);
  solve->add_option("--m0", o.m0, "Sensor budget")->required();
  solve->add_option("--tol", o.tol, "Frank-Wolfe gap tolerance");

  auto* cont = app.add_subcommand("continue", "Binary design by p-continuation");
  add_bundle(cont);
  cont->add_option("--m0", o.m0, "Sensor budget")->required();
  cont->add_option("--delta", o.delta, "Continuation step, p <- (1 - delta) p");

  auto* verify = app.add_subcommand("verify", "Check the global optimality conditions for a design");
  add_bundle(verify);
  verify->add_option("--m0", o.m0, "Sensor budget")->required();
  verify->add_option("--design", o.design, "Design CSV (index,w)")->required();
  verify->add_option("--tol", o.tol, "Verification tolerance");

  auto* oracle = app.add_subcommand("oracle", "Enumerate all binary designs with m0 sensors");
  add_bundle(oracle);
  oracle->add_option("--m0", o.m0, "Sensor budget")->required();

  auto* baseline = app.add_subcommand("baseline", "Objective values of random binary designs");
  add_bundle(baseline);
  baseline->add_option("--m0", o.m0, "Sensor budget")->required();
  baseline->add_option("--count", o.count, "Number of random designs");

  auto* sweep = app.add_subcommand("sweep", "Continuation versus random designs for m0 = 1..M");
  add_bundle(sweep);
  sweep->add_option("--m0", o.m0, "Largest budget M (default m)");
  sweep->add_option("--delta", o.delta, "Continuation step");
  sweep->add_option("--count", o.count, "Random designs per budget");

  auto* variance = app.add_subcommand("variance", "Posterior pointwise variance field for a design");
  add_bundle(variance);
  variance->add_option("--design", o.design, "Design CSV (index,w)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*build) return cmd_build(o);
    if (*solve) return cmd_solve(o);
    if (*cont) return cmd_continue(o);
    if (*verify) return cmd_verify(o);
    if (*oracle) return cmd_oracle(o);
    if (*baseline) return cmd_baseline(o);
    if (*sweep) return cmd_sweep(o);
    if (*variance) return cmd_variance(o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "binoed: config error: %s\n", e.what());
    return kExitConfig;
  } catch (const InfeasibleDesign& e) {
    std::fprintf(stderr, "binoed: infeasible design: %s\n", e.what());
    return kExitConfig;
  } catch (const LimitExceeded& e) {
    std::fprintf(stderr, "binoed: limit exceeded: %s\n", e.what());
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "binoed: numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "binoed: %s\n", e.what());
    return 1;
  }
  return 0;
}
