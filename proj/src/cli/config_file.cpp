#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "shks/cli.hpp"
#include "shks/error.hpp"

namespace shks::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

ConfigMap parse_config_text(std::string_view text, const std::string& source) {
  ConfigMap out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!out.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
  }
  return out;
}

ConfigMap read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

std::pair<std::string, std::string> parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("--set: expected key=value, got '" + text + "'");
  std::string key = trim(std::string_view(text).substr(0, eq));
  if (key.empty()) throw ConfigError("--set: empty key in '" + text + "'");
  return {key, trim(std::string_view(text).substr(eq + 1))};
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "grid.d",       "grid.M",        "s",           "dt",           "t_final",
      "cutoff.R",     "galerkin.n",    "noise.type",  "noise.lambda", "noise.delta",
      "noise.c_eff",  "stop_threshold", "record_every", "ic.kind",     "ic.value",
      "ic.amplitude", "ic.k",          "ic.target_norm", "ic.decay",  "theory.R",
      "theory.rho",   "theory.c_tilde", "theory.data_fraction",
  };
  return keys;
}

namespace {

class Reader {
 public:
  explicit Reader(const ConfigMap& values) : values_(values) {}

  const std::string* raw(const std::string& key) {
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
  }

  double number(const std::string& key, double fallback) {
    const std::string* v = raw(key);
    return v ? parse_double(key, *v) : fallback;
  }

  std::optional<double> optional_number(const std::string& key) {
    const std::string* v = raw(key);
    if (!v) return std::nullopt;
    return parse_double(key, *v);
  }

  long integer(const std::string& key, long fallback) {
    const std::string* v = raw(key);
    return v ? parse_long(key, *v) : fallback;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const std::string* v = raw(key);
    return v ? *v : fallback;
  }

  std::vector<int> int_list(const std::string& key, std::vector<int> fallback) {
    const std::string* v = raw(key);
    if (!v) return fallback;
    std::vector<int> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(static_cast<int>(parse_long(key, trim(item))));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
  }

  static double parse_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
      throw ConfigError(key + ": '" + v + "' is not a finite number");
    }
    return x;
  }

  static long parse_long(const std::string& key, const std::string& v) {
    long x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw ConfigError(key + ": '" + v + "' is not an integer");
    }
    return x;
  }

 private:
  const ConfigMap& values_;
};

void reject_unknown(const ConfigMap& values) {
  const auto& known = known_keys();
  std::vector<std::string> unknown;
  for (const auto& [key, value] : values) {
    if (std::find(known.begin(), known.end(), key) == known.end()) unknown.push_back(key);
  }
  if (unknown.empty()) return;
  std::string msg = "unknown configuration key(s):";
  for (const auto& k : unknown) msg += " " + k;
  throw ConfigError(msg);
}

InitialCondition read_initial(Reader& r, int dimension) {
  const std::string kind = r.text("ic.kind", "single_mode");
  if (kind == "constant") return ConstantInitial{r.number("ic.value", 0.0)};
  if (kind == "single_mode") {
    std::vector<int> k(static_cast<std::size_t>(dimension), 0);
    k[0] = 1;
    return SingleModeInitial{r.number("ic.amplitude", 0.1), r.int_list("ic.k", k)};
  }
  if (kind == "random_sobolev") return RandomSobolevInitial{r.number("ic.target_norm", 0.1), r.optional_number("ic.decay")};
  if (kind == "power_law") return PowerLawInitial{r.number("ic.amplitude", 1.0), r.number("ic.decay", 4.0)};
  throw ConfigError("ic.kind: unknown kind '" + kind + "' (constant, single_mode, random_sobolev, power_law)");
}

NoiseModel read_noise(Reader& r) {
  const std::string type = r.text("noise.type", "zero");
  if (type == "zero") return ZeroNoise{};
  if (type == "linear") return LinearNoise{r.number("noise.lambda", 1.0)};
  if (type == "nonlinear") return make_nonlinear_noise(r.number("noise.delta", 1.0), r.number("noise.c_eff", 1.0));
  throw ConfigError("noise.type: unknown type '" + type + "' (zero, linear, nonlinear)");
}

}  // namespace

double parse_number(const std::string& key, const std::string& text) {
  return Reader::parse_double(key, trim(text));
}

ExperimentConfig resolve_config(const ConfigMap& values) {
  reject_unknown(values);
  Reader r(values);
  ExperimentConfig ec;
  SolverConfig& cfg = ec.solver;

  const long d = r.integer("grid.d", 1);
  const long m = r.integer("grid.M", 128);
  if (d < 1 || d > 3) throw ConfigError("grid.d: dimension must be 1, 2 or 3");
  if (m < 4 || m % 2 != 0) throw ConfigError("grid.M: points per axis must be even and >= 4");
  cfg.grid = TorusGrid(static_cast<int>(d), static_cast<int>(m));
  cfg.s = r.number("s", 2.0);
  cfg.dt = r.number("dt", 1e-3);
  cfg.t_final = r.number("t_final", 1.0);
  const std::string cutoff = r.text("cutoff.R", "none");
  cfg.cutoff = cutoff == "none" ? CutoffSpec::unbounded() : CutoffSpec::radius(Reader::parse_double("cutoff.R", cutoff));
  cfg.galerkin_n = static_cast<int>(r.integer("galerkin.n", 0));
  cfg.noise = read_noise(r);
  cfg.record_every = static_cast<int>(r.integer("record_every", 10));
  ec.declared_initial = read_initial(r, cfg.grid.dimension());
  cfg.initial = ec.declared_initial;

  const bool any_theory = values.count("theory.R") || values.count("theory.rho") || values.count("theory.c_tilde");
  if (any_theory) {
    TheoryParams t;
    t.R = r.number("theory.R", t.R);
    t.rho = r.number("theory.rho", t.rho);
    t.c_tilde = r.number("theory.c_tilde", t.c_tilde);
    if (!(t.R > 1.0)) throw ConfigError("theory.R: must exceed 1");
    if (!(t.rho > 2.0)) throw ConfigError("theory.rho: must exceed 2");
    if (!(t.c_tilde > 0.0)) throw ConfigError("theory.c_tilde: must be positive");
    ec.theory = t;
  }
  ec.data_fraction = r.optional_number("theory.data_fraction");

  const std::string threshold = r.text("stop_threshold", "1000");
  ec.stop_at_proof_level = threshold == "proof_level";

  const auto* lin = std::get_if<LinearNoise>(&cfg.noise);
  if (ec.data_fraction || ec.stop_at_proof_level) {
    const char* key = ec.data_fraction ? "theory.data_fraction" : "stop_threshold";
    if (!lin || lin->lambda == 0.0) throw ConfigError(std::string(key) + ": needs linear noise with lambda != 0");
    if (!ec.theory) throw ConfigError(std::string(key) + ": needs theory.R, theory.rho, theory.c_tilde");
  }
  cfg.stop_threshold = ec.stop_at_proof_level ? proof_stop_level(lin->lambda, *ec.theory)
                                              : Reader::parse_double("stop_threshold", threshold);
  if (ec.data_fraction) {
    if (!(*ec.data_fraction > 0.0)) throw ConfigError("theory.data_fraction: must be positive");
    cfg.initial = with_initial_norm(cfg, *ec.data_fraction * small_data_bound(lin->lambda, *ec.theory));
  }
  cfg.validate();
  return ec;
}

ConfigMap config_echo(const ExperimentConfig& ec) {
  const SolverConfig& cfg = ec.solver;
  ConfigMap m;
  m["grid.d"] = std::to_string(cfg.grid.dimension());
  m["grid.M"] = std::to_string(cfg.grid.points());
  m["s"] = format_double(cfg.s);
  m["dt"] = format_double(cfg.dt);
  m["t_final"] = format_double(cfg.t_final);
  m["cutoff.R"] = cfg.cutoff.bounded() ? format_double(cfg.cutoff.value()) : "none";
  m["galerkin.n"] = std::to_string(cfg.galerkin_n);
  m["noise.type"] = noise_name(cfg.noise);
  if (const auto* lin = std::get_if<LinearNoise>(&cfg.noise)) m["noise.lambda"] = format_double(lin->lambda);
  if (const auto* nl = std::get_if<NonlinearNoise>(&cfg.noise)) {
    m["noise.delta"] = format_double(nl->delta);
    m["noise.c_eff"] = format_double(nl->c_eff);
  }
  m["stop_threshold"] = ec.stop_at_proof_level ? "proof_level" : format_double(cfg.stop_threshold);
  m["record_every"] = std::to_string(cfg.record_every);
  m["ic.kind"] = initial_kind(ec.declared_initial);
  std::visit(
      [&](const auto& ic) {
        using T = std::decay_t<decltype(ic)>;
        if constexpr (std::is_same_v<T, ConstantInitial>) {
          m["ic.value"] = format_double(ic.value);
        } else if constexpr (std::is_same_v<T, SingleModeInitial>) {
          m["ic.amplitude"] = format_double(ic.amplitude);
          std::string k;
          for (std::size_t i = 0; i < ic.wavevector.size(); ++i) k += (i ? "," : "") + std::to_string(ic.wavevector[i]);
          m["ic.k"] = k;
        } else if constexpr (std::is_same_v<T, RandomSobolevInitial>) {
          m["ic.target_norm"] = format_double(ic.target_norm);
          if (ic.decay) m["ic.decay"] = format_double(*ic.decay);
        } else {
          m["ic.amplitude"] = format_double(ic.amplitude);
          m["ic.decay"] = format_double(ic.decay);
        }
      },
      ec.declared_initial);
  if (ec.theory) {
    m["theory.R"] = format_double(ec.theory->R);
    m["theory.rho"] = format_double(ec.theory->rho);
    m["theory.c_tilde"] = format_double(ec.theory->c_tilde);
  }
  if (ec.data_fraction) m["theory.data_fraction"] = format_double(*ec.data_fraction);
  return m;
}

}  // namespace shks::cli
