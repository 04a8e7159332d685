#include "shks/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "shks/error.hpp"

namespace shks {

double survival_lower_bound(double R, double rho) {
  if (!(R > 1.0)) throw ConfigError("theory.R: must exceed 1");
  if (!(rho > 2.0)) throw ConfigError("theory.rho: must exceed 2");
  return 1.0 - std::pow(R, -(rho - 1.0) / (2.0 * rho));
}

double small_data_bound(double lambda, const TheoryParams& theory) {
  if (!(theory.c_tilde > 0.0)) throw ConfigError("theory.c_tilde: must be positive");
  return lambda * lambda / (2.0 * theory.R * theory.rho * theory.c_tilde);
}

double proof_stop_level(double lambda, const TheoryParams& theory) {
  if (!(theory.c_tilde > 0.0)) throw ConfigError("theory.c_tilde: must be positive");
  return lambda * lambda / (2.0 * theory.rho * theory.c_tilde);
}

std::size_t worker_count() {
  if (const char* env = std::getenv("SHKS_WORKERS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<std::size_t>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::size_t failed_index = n;
  std::exception_ptr failure;
  auto body = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

McReport monte_carlo_survival(const SolverConfig& cfg, std::size_t n_paths, std::uint64_t master_seed,
                              const std::optional<TheoryParams>& theory) {
  if (n_paths < 1) throw ConfigError("paths: need at least one path");
  cfg.validate();
  McReport report;
  report.n_paths = n_paths;
  report.paths.resize(n_paths);
  parallel_for(n_paths, [&](std::size_t i) {
    const TrajectoryRecord rec = run_path(cfg, master_seed, i);
    PathSummary& p = report.paths[i];
    p.path_id = i;
    p.status = rec.status;
    p.t_event = rec.t_event;
    p.initial_hs = sobolev_norm(*rec.initial_state, cfg.s);
    p.final_hs = rec.hs_norms.empty() ? std::nan("") : rec.hs_norms.back();
    if (rec.times.size() >= 2) p.log_energy_slope = least_squares_slope(rec.times, rec.log_energy);
  });

  std::vector<double> slopes;
  for (const PathSummary& p : report.paths) {
    switch (p.status) {
      case PathStatus::survived: ++report.n_survived; break;
      case PathStatus::stopped: ++report.n_stopped; break;
      case PathStatus::non_finite: ++report.n_nonfinite; break;
    }
    report.max_initial_hs = std::max(report.max_initial_hs, p.initial_hs);
    if (p.log_energy_slope) slopes.push_back(*p.log_energy_slope);
  }
  report.p_hat = static_cast<double>(report.n_survived) / static_cast<double>(n_paths);
  report.ci = wilson_interval(report.n_survived, n_paths);
  report.log_energy_slope = mean_with_stderr(slopes);

  if (const auto* lin = std::get_if<LinearNoise>(&cfg.noise); lin && theory && lin->lambda != 0.0) {
    report.data_bound = small_data_bound(lin->lambda, *theory);
    if (report.max_initial_hs <= *report.data_bound) {
      report.theory_bound = survival_lower_bound(theory->R, theory->rho);
    }
  }
  return report;
}

ScanParameter parse_scan_parameter(const std::string& name) {
  if (name == "c_eff") return ScanParameter::nonlinear_c;
  if (name == "delta") return ScanParameter::nonlinear_delta;
  if (name == "lambda") return ScanParameter::linear_lambda;
  throw ConfigError("param: unknown scan parameter '" + name + "' (expected c_eff, delta or lambda)");
}

std::string scan_parameter_name(ScanParameter p) {
  switch (p) {
    case ScanParameter::nonlinear_c: return "c_eff";
    case ScanParameter::nonlinear_delta: return "delta";
    case ScanParameter::linear_lambda: return "lambda";
  }
  return "unknown";
}

SolverConfig with_scan_value(const SolverConfig& base, ScanParameter p, double value) {
  SolverConfig cfg = base;
  const auto* nl = std::get_if<NonlinearNoise>(&base.noise);
  switch (p) {
    case ScanParameter::nonlinear_c:
      if (value == 0.0) {
        cfg.noise = ZeroNoise{};
      } else {
        cfg.noise = make_nonlinear_noise(nl ? nl->delta : 1.0, value);
      }
      break;
    case ScanParameter::nonlinear_delta:
      if (!nl) throw ConfigError("noise.type: scanning delta needs nonlinear noise in the base config");
      cfg.noise = make_nonlinear_noise(value, nl->c_eff);
      break;
    case ScanParameter::linear_lambda:
      cfg.noise = LinearNoise{value};
      break;
  }
  return cfg;
}

std::vector<ScanRow> threshold_scan(const SolverConfig& base, ScanParameter p, std::span<const double> values,
                                    std::size_t n_paths, std::uint64_t master_seed,
                                    const std::optional<TheoryParams>& theory) {
  if (values.empty()) throw ConfigError("values: scan needs at least one value");
  std::vector<ScanRow> rows;
  for (double v : values) {
    rows.push_back({v, monte_carlo_survival(with_scan_value(base, p, v), n_paths, master_seed, theory)});
  }
  return rows;
}

}  // namespace shks
