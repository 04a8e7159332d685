#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shks/cli.hpp"
#include "shks/error.hpp"
#include "shks/integrator.hpp"
#include "shks/montecarlo.hpp"
#include "shks/studies.hpp"

namespace shks::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::string config;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::vector<std::string> sets;
  long paths = 0;
};

struct Context {
  std::string subcommand;
  ConfigMap file_values;
  ConfigMap overrides;
  ExperimentConfig cfg;
  fs::path out_dir;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
  json parameters = json::object();
};

Context prepare(const std::string& name, const Common& c) {
  Context ctx;
  ctx.subcommand = name;
  if (!c.config.empty()) ctx.file_values = read_config_file(c.config);
  for (const auto& s : c.sets) {
    auto [key, value] = parse_assignment(s);
    ctx.overrides[key] = value;
  }
  ConfigMap merged = ctx.file_values;
  for (const auto& [k, v] : ctx.overrides) merged[k] = v;
  ctx.cfg = resolve_config(merged);
  ctx.warnings = ctx.cfg.solver.validate();
  ctx.out_dir = c.out_dir;
  ctx.seed = c.seed;
  return ctx;
}

void emit(Context& ctx, const std::string& file, const std::string& content) {
  write_file_atomic(ctx.out_dir / file, content);
  ctx.outputs.push_back(file);
}

void emit_json(Context& ctx, const std::string& file, const json& j) { emit(ctx, file, j.dump(2) + "\n"); }

json map_json(const ConfigMap& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

void write_manifest(Context& ctx, const std::string& config_path, double seconds) {
  json m;
  m["subcommand"] = ctx.subcommand;
  m["version"] = kVersion;
  m["master_seed"] = ctx.seed;
  m["config"] = map_json(config_echo(ctx.cfg));
  m["config_file"] = {{"path", config_path}, {"values", map_json(ctx.file_values)}};
  m["overrides"] = map_json(ctx.overrides);
  m["parameters"] = ctx.parameters;
  m["outputs"] = ctx.outputs;
  m["warnings"] = ctx.warnings;
  m["wall_clock_seconds"] = seconds;
  write_file_atomic(ctx.out_dir / "manifest.json", m.dump(2) + "\n");
}

std::string num(double x) { return format_double(x); }

std::vector<double> parse_number_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_number(key, item));
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::size_t require_paths(long paths) {
  if (paths < 1) throw ConfigError("--paths: must be at least 1");
  return static_cast<std::size_t>(paths);
}

json report_json(const McReport& r) {
  json j;
  j["n_paths"] = r.n_paths;
  j["n_survived"] = r.n_survived;
  j["n_stopped"] = r.n_stopped;
  j["n_nonfinite"] = r.n_nonfinite;
  j["p_hat"] = r.p_hat;
  j["ci_low"] = r.ci.low;
  j["ci_high"] = r.ci.high;
  j["ci_half_width"] = r.ci.half_width();
  j["max_initial_hs"] = r.max_initial_hs;
  j["data_bound"] = r.data_bound ? json(*r.data_bound) : json(nullptr);
  j["theory_bound"] = r.theory_bound ? json(*r.theory_bound) : json(nullptr);
  j["log_energy_slope_mean"] = r.log_energy_slope.mean;
  j["log_energy_slope_stderr"] = r.log_energy_slope.std_error;
  j["survival_meaning"] = "no stop and no overflow before t_final";
  j["surrogate"] = true;
  return j;
}

std::string event_time(PathStatus status, double t) {
  return status == PathStatus::survived ? std::string() : num(t);
}

int cmd_simulate(Context& ctx) {
  const SolverConfig& cfg = ctx.cfg.solver;
  const TrajectoryRecord rec = run_path(cfg, ctx.seed, 0);
  std::string csv = "t,hs_norm,w1inf_norm,log_energy\n";
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    csv += num(rec.times[i]) + "," + num(rec.hs_norms[i]) + "," + num(rec.w1inf_norms[i]) + "," +
           num(rec.log_energy[i]) + "\n";
  }
  emit(ctx, "trajectory.csv", csv);
  json meta;
  meta["status"] = status_name(rec.status);
  meta["t_stop"] = rec.status == PathStatus::stopped ? json(rec.t_event) : json(nullptr);
  meta["t_fail"] = rec.status == PathStatus::non_finite ? json(rec.t_event) : json(nullptr);
  meta["seed"] = rec.seed;
  meta["master_seed"] = ctx.seed;
  meta["surrogate"] = true;
  meta["diagnostic"] = rec.diagnostic;
  meta["config"] = map_json(config_echo(ctx.cfg));
  emit_json(ctx, "trajectory.json", meta);
  return 0;
}

int cmd_montecarlo(Context& ctx, std::size_t paths) {
  const McReport r = monte_carlo_survival(ctx.cfg.solver, paths, ctx.seed, ctx.cfg.theory);
  std::string csv = "path_id,status,t_stop,final_hs\n";
  for (const PathSummary& p : r.paths) {
    csv += std::to_string(p.path_id) + "," + status_name(p.status) + "," + event_time(p.status, p.t_event) + "," +
           num(p.final_hs) + "\n";
  }
  emit(ctx, "ensemble.csv", csv);
  emit_json(ctx, "report.json", report_json(r));
  return 0;
}

int cmd_scan(Context& ctx, std::size_t paths, const std::string& param, const std::string& values_text) {
  const ScanParameter p = parse_scan_parameter(param);
  const std::vector<double> values = parse_number_list("--values", values_text);
  ctx.parameters["param"] = scan_parameter_name(p);
  ctx.parameters["values"] = values;
  const auto rows = threshold_scan(ctx.cfg.solver, p, values, paths, ctx.seed, ctx.cfg.theory);
  std::string csv = "value,n_survived,p_hat,ci_low,ci_high,theory_bound\n";
  json reports = json::array();
  for (const ScanRow& row : rows) {
    const McReport& r = row.report;
    csv += num(row.value) + "," + std::to_string(r.n_survived) + "," + num(r.p_hat) + "," + num(r.ci.low) + "," +
           num(r.ci.high) + "," + (r.theory_bound ? num(*r.theory_bound) : std::string()) + "\n";
    json j = report_json(r);
    j["value"] = row.value;
    reports.push_back(j);
  }
  emit(ctx, "scan.csv", csv);
  emit_json(ctx, "report.json", json{{"param", scan_parameter_name(p)}, {"rows", reports}});
  return 0;
}

std::string ladder_csv(const char* column, const ConvergenceStudy& study) {
  std::string csv = std::string(column) + ",error\n";
  for (std::size_t i = 0; i < study.ladder.size(); ++i) csv += num(study.ladder[i]) + "," + num(study.errors[i]) + "\n";
  return csv;
}

json slope_json(double slope) { return std::isfinite(slope) ? json(slope) : json(nullptr); }

int cmd_transform_check(Context& ctx, std::size_t paths, const std::string& ladder_text) {
  const TransformComparison cmp = transform_compare(ctx.cfg.solver, ctx.seed, 0);
  std::string csv = "t,discrepancy\n";
  for (std::size_t i = 0; i < cmp.times.size(); ++i) csv += num(cmp.times[i]) + "," + num(cmp.discrepancy[i]) + "\n";
  emit(ctx, "transform.csv", csv);
  json rep;
  rep["complete"] = cmp.complete;
  rep["diagnostic"] = cmp.diagnostic;
  rep["max_discrepancy"] = cmp.max_discrepancy();
  rep["final_discrepancy"] = cmp.final_discrepancy();
  if (!ladder_text.empty() && cmp.complete) {
    const std::vector<double> ladder = parse_number_list("--dt-ladder", ladder_text);
    ctx.parameters["dt_ladder"] = ladder;
    const ConvergenceStudy study = transform_refinement(ctx.cfg.solver, ladder, paths, ctx.seed);
    emit(ctx, "transform_convergence.csv", ladder_csv("dt", study));
    rep["kind"] = "dt";
    rep["slope"] = slope_json(study.slope);
  }
  emit_json(ctx, "report.json", rep);
  if (!cmp.complete) throw StudyAbort("transform comparison aborted: " + cmp.diagnostic);
  return 0;
}

int cmd_kappa(Context& ctx, long samples, const std::string& amplitudes_text) {
  if (samples < 1) throw ConfigError("--samples: must be at least 1");
  const std::vector<double> amps = parse_number_list("--amplitudes", amplitudes_text);
  ctx.parameters["samples"] = samples;
  ctx.parameters["amplitudes"] = amps;
  const SolverConfig& cfg = ctx.cfg.solver;
  const KappaEstimate est = estimate_kappa(cfg.grid, cfg.s, static_cast<std::size_t>(samples), amps, ctx.seed);
  std::string csv = "sample,running_max\n";
  for (std::size_t i = 0; i < est.running_max.size(); ++i) csv += std::to_string(i) + "," + num(est.running_max[i]) + "\n";
  emit(ctx, "kappa.csv", csv);
  json j;
  j["kappa_hat"] = est.kappa_hat;
  j["n_samples"] = est.n_samples;
  j["n_skipped"] = est.n_skipped;
  j["argmax_sample"] = est.argmax_sample ? json(*est.argmax_sample) : json(nullptr);
  j["argmax_amplitude"] = est.argmax_amplitude;
  j["argmax_seed"] = est.argmax_seed;
  j["lower_estimate"] = true;
  j["s"] = cfg.s;
  j["grid"] = {{"d", cfg.grid.dimension()}, {"M", cfg.grid.points()}};
  emit_json(ctx, "kappa.json", j);
  return 0;
}

int cmd_gbm(Context& ctx, std::size_t paths, double lambda, double rho, double t, std::optional<double> exponent) {
  ctx.parameters["lambda"] = lambda;
  ctx.parameters["rho"] = rho;
  ctx.parameters["t"] = t;
  if (exponent) ctx.parameters["exponent"] = *exponent;
  const GbmMoment g = gbm_moment_check(lambda, rho, t, paths, ctx.seed, exponent);
  json j;
  j["exponent"] = g.exponent;
  j["empirical_moment"] = g.empirical_moment;
  j["stderr"] = g.std_error;
  j["expected"] = g.expected;
  j["n_paths"] = g.n_paths;
  j["z_score"] = g.std_error > 0.0 ? json((g.empirical_moment - g.expected) / g.std_error) : json(nullptr);
  emit_json(ctx, "gbm.json", j);
  return 0;
}

int cmd_converge_dt(Context& ctx, std::size_t paths, const std::string& ladder_text, int reference_factor) {
  const std::vector<double> ladder = parse_number_list("--dt-ladder", ladder_text);
  ctx.parameters["dt_ladder"] = ladder;
  ctx.parameters["reference_factor"] = reference_factor;
  const ConvergenceStudy study = temporal_convergence(ctx.cfg.solver, ladder, paths, ctx.seed, reference_factor);
  emit(ctx, "convergence.csv", ladder_csv("dt", study));
  emit_json(ctx, "report.json", json{{"kind", "dt"}, {"slope", slope_json(study.slope)}, {"n_paths", paths}});
  return 0;
}

int cmd_converge_n(Context& ctx, const std::string& ladder_text, double r) {
  std::vector<int> ladder;
  for (double n : parse_number_list("--n-ladder", ladder_text)) {
    if (n != std::round(n) || n < 1) throw ConfigError("--n-ladder: levels must be positive integers");
    if (n > ctx.cfg.solver.grid.points() / 2) throw ConfigError("--n-ladder: level exceeds M/2");
    ladder.push_back(static_cast<int>(n));
  }
  ctx.parameters["n_ladder"] = ladder;
  ctx.parameters["r"] = r;
  const SpectralStudy study = spectral_convergence(ctx.cfg.solver, r, ladder, ctx.seed);
  std::string csv = "n,error\n";
  for (std::size_t i = 0; i < study.ladder.size(); ++i) csv += num(study.ladder[i]) + "," + num(study.errors[i]) + "\n";
  emit(ctx, "convergence.csv", csv);
  emit_json(ctx, "report.json",
            json{{"kind", "n"},
                 {"slope", slope_json(study.slope)},
                 {"expected_slope", study.expected_slope},
                 {"profile_norm", study.profile_norm}});
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudo-spectral stochastic hyperbolic Keller-Segel simulator", "shks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  auto add_common = [&](CLI::App* sub, long default_paths) {
    sub->add_option("--config", common.config, "configuration file (key = value lines)");
    sub->add_option("--seed", common.seed, "master seed")->capture_default_str();
    sub->add_option("--out-dir", common.out_dir, "output directory")->capture_default_str();
    sub->add_option("--set", common.sets, "override a configuration key (key=value), repeatable");
    common.paths = default_paths;
    sub->add_option("--paths", common.paths, "number of paths");
  };

  auto* simulate = app.add_subcommand("simulate", "run one trajectory");
  auto* montecarlo = app.add_subcommand("montecarlo", "ensemble survival statistics");
  auto* scan = app.add_subcommand("scan", "survival statistics over a noise parameter");
  auto* transform = app.add_subcommand("transform-check", "direct vs transformed linear-noise paths");
  auto* kappa = app.add_subcommand("kappa", "random-search estimate of the energy constant");
  auto* gbm = app.add_subcommand("gbm-check", "moment identity of the auxiliary geometric Brownian motion");
  auto* cdt = app.add_subcommand("converge-dt", "strong error against a refined reference path");
  auto* cn = app.add_subcommand("converge-n", "Galerkin projection error over n");

  std::string param = "c_eff", values = "0,1,2,4,8", dt_ladder, n_ladder = "4,8,16,32", amplitudes = "0.01,0.1,1";
  std::string conv_ladder = "0.01,0.005,0.0025,0.00125";
  long samples = 100;
  int reference_factor = 32;
  double lambda = 1.0, rho = 4.0, t_gbm = 1.0, r = 1.0;
  std::optional<double> exponent;

  scan->add_option("--param", param, "c_eff, delta or lambda")->capture_default_str();
  scan->add_option("--values", values, "comma-separated values")->capture_default_str();
  transform->add_option("--dt-ladder", dt_ladder, "optional comma-separated dt refinement ladder");
  kappa->add_option("--samples", samples)->capture_default_str();
  kappa->add_option("--amplitudes", amplitudes, "comma-separated H^s norms")->capture_default_str();
  gbm->add_option("--lambda", lambda)->capture_default_str();
  gbm->add_option("--rho", rho)->capture_default_str();
  gbm->add_option("--t", t_gbm)->capture_default_str();
  gbm->add_option("--exponent", exponent, "moment exponent (default 1/2 - 1/(2 rho))");
  cdt->add_option("--dt-ladder", conv_ladder, "comma-separated dt values")->capture_default_str();
  cdt->add_option("--reference-factor", reference_factor)->capture_default_str();
  cn->add_option("--n-ladder", n_ladder, "comma-separated Galerkin levels")->capture_default_str();
  cn->add_option("--r", r, "norm index of the error")->capture_default_str();

  const std::vector<std::pair<CLI::App*, long>> subs = {{simulate, 1},  {montecarlo, 64}, {scan, 64},
                                                        {transform, 8}, {kappa, 1},       {gbm, 100000},
                                                        {cdt, 32},      {cn, 1}};
  for (const auto& [sub, paths] : subs) add_common(sub, paths);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  for (const auto& [sub, paths] : subs) {
    if (sub == chosen && chosen->count("--paths") == 0) common.paths = paths;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    Context ctx = prepare(chosen->get_name(), common);
    for (const auto& w : ctx.warnings) err << "warning: " << w << "\n";
    int code = 0;
    try {
      if (chosen == simulate) code = cmd_simulate(ctx);
      if (chosen == montecarlo) code = cmd_montecarlo(ctx, require_paths(common.paths));
      if (chosen == scan) code = cmd_scan(ctx, require_paths(common.paths), param, values);
      if (chosen == transform) code = cmd_transform_check(ctx, require_paths(common.paths), dt_ladder);
      if (chosen == kappa) code = cmd_kappa(ctx, samples, amplitudes);
      if (chosen == gbm) code = cmd_gbm(ctx, require_paths(common.paths), lambda, rho, t_gbm, exponent);
      if (chosen == cdt) code = cmd_converge_dt(ctx, require_paths(common.paths), conv_ladder, reference_factor);
      if (chosen == cn) code = cmd_converge_n(ctx, n_ladder, r);
    } catch (const StudyAbort&) {
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_manifest(ctx, common.config, secs);
      throw;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(ctx, common.config, secs);
    out << chosen->get_name() << ": wrote";
    for (const auto& f : ctx.outputs) out << " " << (ctx.out_dir / f).string();
    out << " " << (ctx.out_dir / "manifest.json").string() << "\n";
    return code;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const StudyAbort& e) {
    err << "study aborted: " << e.what() << "\n";
    return 3;
  } catch (const NonFiniteError& e) {
    err << "study aborted: " << e.what() << " (t = " << e.time() << ")\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace shks::cli
