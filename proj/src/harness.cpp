#include "prpr/harness.hpp"

#include "prpr/measurement.hpp"
#include "prpr/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace prpr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_frame_regularizer(const std::string& r) {
  return r == "analysis_l1" || r == "wavelet_synthesis";
}

const std::vector<std::string>& regularizer_names() {
  static const std::vector<std::string> names{"lasso", "group_lasso", "tv_1d", "analysis_l1",
                                              "wavelet_synthesis"};
  return names;
}

std::string canonical_regularizer(const std::string& name) {
  if (name == "glasso") return "group_lasso";
  if (name == "tv") return "tv_1d";
  if (name == "wavelet") return "wavelet_synthesis";
  return name;
}

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  for (double& x : v)
    if (std::isnan(x)) x = std::numeric_limits<double>::infinity();
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

std::string fmt_index(Index v) { return std::to_string(static_cast<long long>(v)); }

// --- JSON field readers --------------------------------------------------

[[noreturn]] void type_error(const std::string& key, const char* expected, const Json& v) {
  throw ConfigError("config field '" + key + "': expected " + expected + ", got " + v.dump());
}

double read_double(const std::string& key, const Json& v) {
  if (v.is_null()) return kNaN;
  if (!v.is_number()) type_error(key, "a number", v);
  return v.get<double>();
}

long long read_int(const std::string& key, const Json& v) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<long long>(d);
  }
  type_error(key, "an integer", v);
}

std::string read_string(const std::string& key, const Json& v) {
  if (!v.is_string()) type_error(key, "a string", v);
  return v.get<std::string>();
}

bool read_bool(const std::string& key, const Json& v) {
  if (!v.is_boolean()) type_error(key, "true or false", v);
  return v.get<bool>();
}

std::vector<double> read_double_list(const std::string& key, const Json& v) {
  if (!v.is_array()) type_error(key, "an array of numbers", v);
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(read_double(key + "[" + std::to_string(i) + "]", v[i]));
  return out;
}

std::vector<Index> read_index_list(const std::string& key, const Json& v) {
  if (!v.is_array()) type_error(key, "an array of integers", v);
  std::vector<Index> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(static_cast<Index>(read_int(key + "[" + std::to_string(i) + "]", v[i])));
  return out;
}

std::vector<std::string> read_string_list(const std::string& key, const Json& v) {
  if (!v.is_array()) type_error(key, "an array of strings", v);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(read_string(key + "[" + std::to_string(i) + "]", v[i]));
  return out;
}

Json bound_to_json(const BoundParams& p) {
  return Json{{"kind", to_string(p.kind)}, {"n", p.n},         {"s", p.s},
              {"B", p.block_size},         {"L", p.num_blocks}, {"delta", p.delta},
              {"C", p.c_tv}};
}

BoundParams bound_from_json(const std::string& key, const Json& v) {
  if (!v.is_object()) type_error(key, "an object", v);
  BoundParams p;
  for (const auto& [k, val] : v.items()) {
    const std::string field = key + "." + k;
    if (k == "kind") {
      try {
        p.kind = bound_kind_from_string(read_string(field, val));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("config field '" + field + "': " + e.what());
      }
    } else if (k == "n") {
      p.n = static_cast<Index>(read_int(field, val));
    } else if (k == "s") {
      p.s = static_cast<Index>(read_int(field, val));
    } else if (k == "B") {
      p.block_size = static_cast<Index>(read_int(field, val));
    } else if (k == "L") {
      p.num_blocks = static_cast<Index>(read_int(field, val));
    } else if (k == "delta") {
      p.delta = read_double(field, val);
    } else if (k == "C") {
      p.c_tv = read_double(field, val);
    } else {
      throw ConfigError("unknown config field '" + field + "'");
    }
  }
  return p;
}

Json nan_as_null(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

std::string timestamp_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

// --- configuration --------------------------------------------------------

Json ExperimentConfig::to_json() const {
  Json bounds = Json::array();
  for (const auto& b : bound_rows) bounds.push_back(bound_to_json(b));
  return Json{{"command", command},
              {"preset", preset},
              {"regularizer", regularizer},
              {"n", n},
              {"s", s},
              {"block_size", block_size},
              {"haar_levels", haar_levels},
              {"m", m},
              {"m_formula", m_formula},
              {"m_factor", m_factor},
              {"log_base", log_base},
              {"lambda", lambda},
              {"lambda_policy", lambda_policy},
              {"lambda_factor", lambda_factor},
              {"step", solver.step},
              {"L", solver.rel_smooth_l},
              {"fidelity_scale", solver.fidelity_scale},
              {"max_iters", solver.max_iters},
              {"x_change_tol", solver.x_change_tol},
              {"inner_gap_tol", solver.inner_gap_tol},
              {"dual_max_iters", dual_max_iters},
              {"trials", trials},
              {"seed", seed},
              {"write_traces", write_traces},
              {"sigmas", sigmas},
              {"sigma_min", sigma_min},
              {"sigma_max", sigma_max},
              {"sigma_count", sigma_count},
              {"m_grid", m_grid},
              {"s_grid", s_grid},
              {"success_tol", success_tol},
              {"ndsc_margin", ndsc_margin},
              {"ri_tol_rel", ri_tol_rel},
              {"rho", rho},
              {"bound_rows", bounds},
              {"bound_t", bound_t},
              {"width_samples", width_samples},
              {"conc_kinds", conc_kinds},
              {"conc_m_grid", conc_m_grid},
              {"conc_dim", conc_dim},
              {"conc_delta", conc_delta},
              {"conc_rho", conc_rho},
              {"assert_slope_min", nan_as_null(assert_slope_min)},
              {"assert_slope_max", nan_as_null(assert_slope_max)},
              {"assert_rate_min", nan_as_null(assert_rate_min)}};
}

void apply_overrides(ExperimentConfig& cfg, const Json& overrides) {
  if (!overrides.is_object()) throw ConfigError("config must be a JSON object");
  static const std::map<std::string, std::function<void(ExperimentConfig&, const std::string&,
                                                         const Json&)>>
      setters = {
          {"command", [](auto& c, auto& k, auto& v) { c.command = read_string(k, v); }},
          {"preset", [](auto& c, auto& k, auto& v) { c.preset = read_string(k, v); }},
          {"regularizer",
           [](auto& c, auto& k, auto& v) { c.regularizer = canonical_regularizer(read_string(k, v)); }},
          {"n", [](auto& c, auto& k, auto& v) { c.n = static_cast<Index>(read_int(k, v)); }},
          {"s", [](auto& c, auto& k, auto& v) { c.s = static_cast<Index>(read_int(k, v)); }},
          {"block_size",
           [](auto& c, auto& k, auto& v) { c.block_size = static_cast<Index>(read_int(k, v)); }},
          {"haar_levels",
           [](auto& c, auto& k, auto& v) { c.haar_levels = static_cast<int>(read_int(k, v)); }},
          {"m", [](auto& c, auto& k, auto& v) { c.m = static_cast<Index>(read_int(k, v)); }},
          {"m_formula", [](auto& c, auto& k, auto& v) { c.m_formula = read_string(k, v); }},
          {"m_factor", [](auto& c, auto& k, auto& v) { c.m_factor = read_double(k, v); }},
          {"log_base", [](auto& c, auto& k, auto& v) { c.log_base = read_string(k, v); }},
          {"lambda", [](auto& c, auto& k, auto& v) { c.lambda = read_double(k, v); }},
          {"lambda_policy", [](auto& c, auto& k, auto& v) { c.lambda_policy = read_string(k, v); }},
          {"lambda_factor", [](auto& c, auto& k, auto& v) { c.lambda_factor = read_double(k, v); }},
          {"step", [](auto& c, auto& k, auto& v) { c.solver.step = read_double(k, v); }},
          {"L", [](auto& c, auto& k, auto& v) { c.solver.rel_smooth_l = read_double(k, v); }},
          {"fidelity_scale",
           [](auto& c, auto& k, auto& v) { c.solver.fidelity_scale = read_double(k, v); }},
          {"max_iters",
           [](auto& c, auto& k, auto& v) { c.solver.max_iters = static_cast<int>(read_int(k, v)); }},
          {"x_change_tol",
           [](auto& c, auto& k, auto& v) { c.solver.x_change_tol = read_double(k, v); }},
          {"inner_gap_tol",
           [](auto& c, auto& k, auto& v) { c.solver.inner_gap_tol = read_double(k, v); }},
          {"dual_max_iters",
           [](auto& c, auto& k, auto& v) { c.dual_max_iters = static_cast<int>(read_int(k, v)); }},
          {"trials", [](auto& c, auto& k, auto& v) { c.trials = static_cast<int>(read_int(k, v)); }},
          {"seed",
           [](auto& c, auto& k, auto& v) {
             const long long s = read_int(k, v);
             if (s < 0) throw ConfigError("config field 'seed': must be >= 0");
             c.seed = static_cast<std::uint64_t>(s);
           }},
          {"write_traces", [](auto& c, auto& k, auto& v) { c.write_traces = read_bool(k, v); }},
          {"sigmas", [](auto& c, auto& k, auto& v) { c.sigmas = read_double_list(k, v); }},
          {"sigma_min", [](auto& c, auto& k, auto& v) { c.sigma_min = read_double(k, v); }},
          {"sigma_max", [](auto& c, auto& k, auto& v) { c.sigma_max = read_double(k, v); }},
          {"sigma_count",
           [](auto& c, auto& k, auto& v) { c.sigma_count = static_cast<int>(read_int(k, v)); }},
          {"m_grid", [](auto& c, auto& k, auto& v) { c.m_grid = read_index_list(k, v); }},
          {"s_grid", [](auto& c, auto& k, auto& v) { c.s_grid = read_index_list(k, v); }},
          {"success_tol", [](auto& c, auto& k, auto& v) { c.success_tol = read_double(k, v); }},
          {"ndsc_margin", [](auto& c, auto& k, auto& v) { c.ndsc_margin = read_double(k, v); }},
          {"ri_tol_rel", [](auto& c, auto& k, auto& v) { c.ri_tol_rel = read_double(k, v); }},
          {"rho", [](auto& c, auto& k, auto& v) { c.rho = read_double(k, v); }},
          {"bound_rows",
           [](auto& c, auto& k, auto& v) {
             if (!v.is_array()) type_error(k, "an array of objects", v);
             c.bound_rows.clear();
             for (std::size_t i = 0; i < v.size(); ++i)
               c.bound_rows.push_back(bound_from_json(k + "[" + std::to_string(i) + "]", v[i]));
           }},
          {"bound_t", [](auto& c, auto& k, auto& v) { c.bound_t = read_double(k, v); }},
          {"width_samples",
           [](auto& c, auto& k, auto& v) { c.width_samples = static_cast<int>(read_int(k, v)); }},
          {"conc_kinds", [](auto& c, auto& k, auto& v) { c.conc_kinds = read_string_list(k, v); }},
          {"conc_m_grid", [](auto& c, auto& k, auto& v) { c.conc_m_grid = read_index_list(k, v); }},
          {"conc_dim",
           [](auto& c, auto& k, auto& v) { c.conc_dim = static_cast<Index>(read_int(k, v)); }},
          {"conc_delta", [](auto& c, auto& k, auto& v) { c.conc_delta = read_double(k, v); }},
          {"conc_rho", [](auto& c, auto& k, auto& v) { c.conc_rho = read_double(k, v); }},
          {"assert_slope_min",
           [](auto& c, auto& k, auto& v) { c.assert_slope_min = read_double(k, v); }},
          {"assert_slope_max",
           [](auto& c, auto& k, auto& v) { c.assert_slope_max = read_double(k, v); }},
          {"assert_rate_min",
           [](auto& c, auto& k, auto& v) { c.assert_rate_min = read_double(k, v); }},
      };
  for (const auto& [key, value] : overrides.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config field '" + key + "'");
    it->second(cfg, key, value);
  }
}

void ExperimentConfig::validate() const {
  const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  static const std::vector<std::string> commands{"run",     "stability", "phase-diagram",
                                                 "certify", "bounds",    "concentration"};
  if (!contains(commands, command)) fail("config field 'command': unknown command '" + command + "'");
  if (!contains(regularizer_names(), regularizer))
    fail("config field 'regularizer': unknown value '" + regularizer +
         "' (lasso, group_lasso, tv_1d, analysis_l1, wavelet_synthesis)");
  if (n < 2) fail("config field 'n': must be >= 2");
  if (s < 0) fail("config field 's': must be >= 0");
  if (regularizer == "group_lasso") {
    if (block_size < 1 || n % block_size != 0)
      fail("config field 'block_size': must divide n=" + fmt_index(n));
    if (s > n / block_size) fail("config field 's': exceeds the number of blocks");
  } else if (regularizer == "lasso" && s > n) {
    fail("config field 's': exceeds n");
  } else if (regularizer != "lasso" && s > n - 1) {
    fail("config field 's': at most n-1 jumps");
  }
  if (is_frame_regularizer(regularizer)) {
    if ((n & (n - 1)) != 0) fail("config field 'n': the Haar frame needs a power of two");
    int max_levels = 0;
    while ((Index{1} << (max_levels + 1)) <= n) ++max_levels;
    if (haar_levels < 1 || haar_levels > max_levels)
      fail("config field 'haar_levels': must lie in [1, " + std::to_string(max_levels) + "]");
  }
  if (m < 0) fail("config field 'm': must be >= 0");
  static const std::vector<std::string> formulas{"s", "s^1.5", "s^2", "sB", "(sB)^2"};
  if (!contains(formulas, m_formula))
    fail("config field 'm_formula': unknown formula '" + m_formula + "' (s, s^1.5, s^2, sB, (sB)^2)");
  if (!(m_factor > 0.0)) fail("config field 'm_factor': must be > 0");
  if (log_base != "e" && log_base != "2" && log_base != "10")
    fail("config field 'log_base': must be e, 2 or 10");
  if (!(lambda >= 0.0)) fail("config field 'lambda': must be >= 0");
  if (lambda_policy != "fixed" && lambda_policy != "3sigma")
    fail("config field 'lambda_policy': must be fixed or 3sigma");
  if (!(lambda_factor > 0.0)) fail("config field 'lambda_factor': must be > 0");
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    fail(std::string("solver settings: ") + e.what());
  }
  if (dual_max_iters < 1) fail("config field 'dual_max_iters': must be >= 1");
  if (trials < 1) fail("config field 'trials': must be >= 1");
  if (!(success_tol > 0.0)) fail("config field 'success_tol': must be > 0");

  if (command == "stability") {
    if (sigmas.empty()) {
      if (sigma_count < 1) fail("config field 'sigma_count': must be >= 1");
      if (!(sigma_min > 0.0) || !(sigma_max >= sigma_min))
        fail("config fields 'sigma_min'/'sigma_max': need 0 < sigma_min <= sigma_max");
    }
    for (double v : sigmas)
      if (!(v > 0.0)) fail("config field 'sigmas': every sigma must be > 0");
  }
  if (command == "phase-diagram") {
    if (m_grid.empty()) fail("config field 'm_grid': required for phase-diagram");
    if (s_grid.empty()) fail("config field 's_grid': required for phase-diagram");
    for (Index v : m_grid)
      if (v < 1) fail("config field 'm_grid': entries must be >= 1");
    for (Index v : s_grid)
      if (v < 0) fail("config field 's_grid': entries must be >= 0");
  }
  if (command == "certify") {
    if (regularizer != "lasso" && regularizer != "group_lasso")
      fail("certify supports regularizer lasso or group_lasso, got '" + regularizer + "'");
    if (s < 1) fail("config field 's': certify needs s >= 1");
    if (!(rho > 0.0 && rho < 1.0)) fail("config field 'rho': must lie in (0,1)");
  }
  if (command == "bounds") {
    if (!(bound_t > 0.0)) fail("config field 'bound_t': must be > 0");
    if (width_samples < 1) fail("config field 'width_samples': must be >= 1");
  }
  if (command == "concentration") {
    if (conc_m_grid.empty()) fail("config field 'conc_m_grid': must not be empty");
    for (const auto& k : conc_kinds) {
      try {
        concentration_kind_from_string(k);
      } catch (const std::invalid_argument& e) {
        fail(std::string("config field 'conc_kinds': ") + e.what());
      }
    }
    for (Index v : conc_m_grid)
      if (v < 1) fail("config field 'conc_m_grid': entries must be >= 1");
    if (conc_dim < 1) fail("config field 'conc_dim': must be >= 1");
  }
}

std::vector<std::string> preset_names() {
  return {"lasso-fig1", "glasso-fig3", "tv-fig4", "wavelet-fig5", "stability-lasso", "stability-tv"};
}

Json preset(const std::string& name) {
  Json common{{"n", 128},          {"lambda", 1e-8},      {"fidelity_scale", 1.0},
              {"max_iters", 100000}, {"trials", 10},      {"m", 0},
              {"m_factor", 0.5},   {"log_base", "e"},     {"lambda_policy", "fixed"}};
  Json p = common;
  if (name == "lasso-fig1" || name == "stability-lasso") {
    p["regularizer"] = "lasso";
    p["s"] = 12;
    p["m_formula"] = "s^1.5";
  } else if (name == "glasso-fig3") {
    p["regularizer"] = "group_lasso";
    p["s"] = 2;
    p["block_size"] = 8;
    p["m_formula"] = "(sB)^2";
  } else if (name == "tv-fig4" || name == "stability-tv") {
    p["regularizer"] = "tv_1d";
    p["s"] = 12;
    p["m_formula"] = "s^2";
  } else if (name == "wavelet-fig5") {
    p["regularizer"] = "wavelet_synthesis";
    p["s"] = 12;
    p["m_formula"] = "s^2";
    p["haar_levels"] = 3;
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
  }
  if (name.rfind("stability-", 0) == 0) {
    p["lambda_policy"] = "3sigma";
    p["lambda_factor"] = 3.0;
    p["sigma_min"] = 1e-4;
    p["sigma_max"] = 1e-2;
    p["sigma_count"] = 8;
  }
  p["preset"] = name;
  return p;
}

Json parse_config_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": invalid JSON (" + e.what() + ")");
  }
}

Json parse_set_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(raw);
  } catch (const nlohmann::json::parse_error&) {
    value = raw;
  }
  return Json{{key, value}};
}

ExperimentConfig resolve_config(const std::string& command, const Json& file_overrides,
                                const std::vector<Json>& set_overrides) {
  std::string preset_name;
  if (file_overrides.is_object() && file_overrides.contains("preset"))
    preset_name = read_string("preset", file_overrides["preset"]);
  for (const auto& o : set_overrides)
    if (o.contains("preset")) preset_name = read_string("preset", o["preset"]);

  ExperimentConfig cfg;
  if (!preset_name.empty()) apply_overrides(cfg, preset(preset_name));
  if (!file_overrides.is_null()) apply_overrides(cfg, file_overrides);
  for (const auto& o : set_overrides) apply_overrides(cfg, o);
  cfg.command = command;
  cfg.validate();
  return cfg;
}

double config_log(const ExperimentConfig& cfg, double v) {
  if (cfg.log_base == "2") return std::log2(v);
  if (cfg.log_base == "10") return std::log10(v);
  return std::log(v);
}

Index resolve_m(const ExperimentConfig& cfg, Index s) {
  if (cfg.m > 0) return cfg.m;
  const double sd = static_cast<double>(s);
  const double bs = static_cast<double>(cfg.block_size);
  double base = 0.0;
  if (cfg.m_formula == "s") base = sd;
  else if (cfg.m_formula == "s^1.5") base = std::pow(sd, 1.5);
  else if (cfg.m_formula == "s^2") base = sd * sd;
  else if (cfg.m_formula == "sB") base = sd * bs;
  else if (cfg.m_formula == "(sB)^2") base = sd * bs * sd * bs;
  else throw ConfigError("unknown m_formula '" + cfg.m_formula + "'");
  const double v = cfg.m_factor * base * config_log(cfg, static_cast<double>(cfg.n));
  return std::max<Index>(1, static_cast<Index>(std::ceil(v)));
}

// --- parallelism ------------------------------------------------------------

int worker_count(std::size_t tasks) {
  long want = static_cast<long>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PRPR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) want = v;
  }
  want = std::max(1L, want);
  return static_cast<int>(std::min<long>(want, static_cast<long>(std::max<std::size_t>(tasks, 1))));
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task) {
  if (count == 0) return;
  const int workers = worker_count(count);
  std::vector<std::exception_ptr> errors(count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            task(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// --- instances ------------------------------------------------------------------

namespace {

double signed_amplitude(Rng& rng) {
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  return sign * (0.5 + rng.uniform());
}

// First k entries of a uniform random permutation of [lo, hi).
std::vector<Index> distinct_indices(Rng& rng, Index lo, Index hi, Index k) {
  std::vector<Index> pool(static_cast<std::size_t>(hi - lo));
  for (Index i = lo; i < hi; ++i) pool[static_cast<std::size_t>(i - lo)] = i;
  for (Index i = 0; i < k; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(hi - lo - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

}  // namespace

Vec sparse_signal(Index n, Index s, std::uint64_t seed) {
  if (s < 0 || s > n) throw std::invalid_argument("sparse_signal: need 0 <= s <= n");
  Rng rng(seed, 0x51);
  Vec x = Vec::Zero(n);
  for (Index i : distinct_indices(rng, 0, n, s)) x[i] = signed_amplitude(rng);
  return x;
}

Vec block_sparse_signal(Index n, Index block_size, Index active_blocks, std::uint64_t seed) {
  if (block_size < 1 || n % block_size != 0)
    throw std::invalid_argument("block_sparse_signal: block size must divide n");
  const Index blocks = n / block_size;
  if (active_blocks < 0 || active_blocks > blocks)
    throw std::invalid_argument("block_sparse_signal: too many active blocks");
  Rng rng(seed, 0x52);
  Vec x = Vec::Zero(n);
  for (Index b : distinct_indices(rng, 0, blocks, active_blocks))
    for (Index j = 0; j < block_size; ++j) x[b * block_size + j] = signed_amplitude(rng);
  return x;
}

Vec piecewise_constant_signal(Index n, Index jumps, std::uint64_t seed) {
  if (jumps < 0 || jumps > n - 1)
    throw std::invalid_argument("piecewise_constant_signal: need 0 <= jumps <= n-1");
  Rng rng(seed, 0x53);
  auto at = distinct_indices(rng, 1, n, jumps);
  std::sort(at.begin(), at.end());
  Vec x(n);
  double level = signed_amplitude(rng);
  std::size_t next = 0;
  for (Index i = 0; i < n; ++i) {
    if (next < at.size() && at[next] == i) {
      level += signed_amplitude(rng);
      ++next;
    }
    x[i] = level;
  }
  return x;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t cell, std::uint64_t trial) {
  return derive_seed(seed, {cell, trial});
}

Instance make_instance(const ExperimentConfig& cfg, Index m, Index s, std::uint64_t seed,
                       double sigma, std::uint64_t noise_stream) {
  Instance inst;
  const std::uint64_t truth_seed = derive_seed(seed, {2});
  if (cfg.regularizer == "lasso") inst.truth = sparse_signal(cfg.n, s, truth_seed);
  else if (cfg.regularizer == "group_lasso") inst.truth = block_sparse_signal(cfg.n, cfg.block_size, s, truth_seed);
  else inst.truth = piecewise_constant_signal(cfg.n, s, truth_seed);
  inst.a = sample_gaussian_map(cfg.n, m, derive_seed(seed, {1}));
  inst.clean = forward_intensity(inst.a, inst.truth);
  if (sigma > 0.0) {
    const double per_entry = sigma / std::sqrt(static_cast<double>(m));
    const Observation obs =
        make_observation(inst.clean, GaussianNoise{per_entry}, derive_seed(seed, {3, noise_stream}));
    inst.y = obs.intensities;
    inst.noise_norm = obs.noise_norm;
  } else {
    inst.y = inst.clean;
  }
  inst.lambda = cfg.lambda_policy == "3sigma" ? cfg.lambda_factor * sigma : cfg.lambda;
  return inst;
}

namespace {

std::shared_ptr<const FrameDescriptor> config_frame(const ExperimentConfig& cfg) {
  return std::make_shared<const FrameDescriptor>(haar_frame(cfg.n, cfg.haar_levels));
}

Mat dense_synthesis(const FrameDescriptor& f) {
  Mat w(f.n, f.p);
  Vec e = Vec::Zero(f.p);
  for (Index j = 0; j < f.p; ++j) {
    e[j] = 1.0;
    w.col(j) = f.synthesis(e);
    e[j] = 0.0;
  }
  return w;
}

}  // namespace

GaugeSpec solver_gauge(const ExperimentConfig& cfg) {
  GaugeSpec g;
  if (cfg.regularizer == "lasso") g = GaugeSpec::lasso(cfg.n);
  else if (cfg.regularizer == "group_lasso") g = GaugeSpec::group_lasso(cfg.n, cfg.block_size);
  else if (cfg.regularizer == "tv_1d") g = GaugeSpec::tv_1d(cfg.n);
  else if (cfg.regularizer == "analysis_l1") g = GaugeSpec::analysis_l1(config_frame(cfg));
  else g = GaugeSpec::lasso(static_cast<Index>(cfg.haar_levels + 1) * cfg.n);
  g.dual.max_iters = cfg.dual_max_iters;
  return g;
}

Index support_target(const ExperimentConfig& cfg, const Vec& truth) {
  if (cfg.regularizer == "wavelet_synthesis") return -1;
  return model_descriptor(solver_gauge(cfg), truth).t_dim;
}

TrialResult run_trial(const ExperimentConfig& cfg, Index m, Index s, std::uint64_t seed,
                      double sigma, std::uint64_t noise_stream) {
  const Instance inst = make_instance(cfg, m, s, seed, sigma, noise_stream);
  const GaugeSpec g = solver_gauge(cfg);

  TrialResult r;
  r.seed = seed;
  r.m = m;
  r.s = s;
  r.sigma = sigma;
  r.noise_norm = inst.noise_norm;
  r.lambda = inst.lambda;
  r.truth = inst.truth;
  r.support_target = support_target(cfg, inst.truth);

  SolverConfig sc = cfg.solver;
  sc.lambda = inst.lambda;
  sc.seed = derive_seed(seed, {4});

  const bool synthesis = cfg.regularizer == "wavelet_synthesis";
  Mat w;
  if (synthesis) w = dense_synthesis(*config_frame(cfg));
  try {
    SolveResult res = synthesis ? solve(g, sc, inst.a * w, inst.y, GaussianUnitInit{}, inst.truth, &w)
                                : solve(g, sc, inst.a, inst.y, GaussianUnitInit{}, inst.truth);
    r.estimate = synthesis ? Vec(w * res.x) : res.x;
    r.trace = std::move(res.trace);
    r.dist = dist_to_signclass(r.estimate, inst.truth);
    r.support_size = model_descriptor(g, res.x).t_dim;
    r.objective = objective(g, sc, synthesis ? Mat(inst.a * w) : inst.a, inst.y, res.x);
  } catch (const SolverFailure& e) {
    r.failed = true;
    r.error = e.what();
    r.dist = kNaN;
    r.iterations = e.iteration();
  }
  const double tn = inst.truth.norm();
  r.rel_dist = tn > 0.0 ? r.dist / tn : r.dist;
  if (!r.failed) {
    r.iterations = r.trace.iterations;
    r.termination = to_string(r.trace.reason);
    r.descent_violations = r.trace.descent_violations;
    r.max_relative_increase = r.trace.max_relative_increase;
    r.support_stable_from = r.support_target >= 0 ? r.trace.support_stable_from(r.support_target) : -1;
  } else {
    r.termination = "inner_failure";
  }
  return r;
}

// --- commands -----------------------------------------------------------------

RunOutput cmd_run(const ExperimentConfig& cfg) {
  RunOutput out;
  out.trials.resize(static_cast<std::size_t>(cfg.trials));
  const Index m = resolve_m(cfg, cfg.s);
  parallel_for(out.trials.size(), [&](std::size_t k) {
    out.trials[k] = run_trial(cfg, m, cfg.s, trial_seed(cfg.seed, 0, k));
  });
  std::vector<double> rel;
  int ok = 0;
  for (const auto& t : out.trials) {
    rel.push_back(t.rel_dist);
    if (!t.failed && t.rel_dist <= cfg.success_tol) ++ok;
  }
  out.median_rel_dist = median(rel);
  out.success_rate = static_cast<double>(ok) / cfg.trials;
  return out;
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || std::isinf(y[i])) return std::nullopt;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

namespace {

std::vector<double> sigma_grid(const ExperimentConfig& cfg) {
  if (!cfg.sigmas.empty()) return cfg.sigmas;
  std::vector<double> g;
  if (cfg.sigma_count == 1) return {cfg.sigma_min};
  const double lo = std::log10(cfg.sigma_min), hi = std::log10(cfg.sigma_max);
  for (int i = 0; i < cfg.sigma_count; ++i)
    g.push_back(std::pow(10.0, lo + (hi - lo) * i / (cfg.sigma_count - 1)));
  return g;
}

}  // namespace

StabilityOutput cmd_stability(const ExperimentConfig& cfg) {
  StabilityOutput out;
  out.sigmas = sigma_grid(cfg);
  const std::size_t ns = out.sigmas.size();
  const auto nt = static_cast<std::size_t>(cfg.trials);
  out.trials.assign(ns, std::vector<TrialResult>(nt));
  const Index m = resolve_m(cfg, cfg.s);
  parallel_for(ns * nt, [&](std::size_t idx) {
    const std::size_t i = idx / nt, k = idx % nt;
    out.trials[i][k] = run_trial(cfg, m, cfg.s, trial_seed(cfg.seed, 0, k), out.sigmas[i], i);
  });
  for (const auto& row : out.trials) {
    std::vector<double> d;
    for (const auto& t : row) d.push_back(t.dist);
    out.median_dist.push_back(median(d));
  }
  out.slope = loglog_slope(out.sigmas, out.median_dist);
  return out;
}

std::vector<PhaseCell> cmd_phase_diagram(const ExperimentConfig& cfg) {
  std::vector<PhaseCell> cells;
  for (Index s : cfg.s_grid)
    for (Index m : cfg.m_grid) cells.push_back({m, s, cfg.trials, 0});
  const auto nt = static_cast<std::size_t>(cfg.trials);
  std::vector<char> success(cells.size() * nt, 0);
  parallel_for(success.size(), [&](std::size_t idx) {
    const std::size_t c = idx / nt, k = idx % nt;
    const TrialResult r = run_trial(cfg, cells[c].m, cells[c].s, trial_seed(cfg.seed, c, k));
    success[idx] = (!r.failed && r.rel_dist <= cfg.success_tol) ? 1 : 0;
  });
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t k = 0; k < nt; ++k) cells[c].successes += success[c * nt + k];
  return cells;
}

CertifyOutput cmd_certify(const ExperimentConfig& cfg) {
  CertifyOutput out;
  out.m = resolve_m(cfg, cfg.s);
  const GaugeSpec g = solver_gauge(cfg);
  CertificateOptions opt;
  opt.ndsc_margin = cfg.ndsc_margin;
  opt.ri_tol_rel = cfg.ri_tol_rel;
  out.trials.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(out.trials.size(), [&](std::size_t k) {
    const std::uint64_t seed = trial_seed(cfg.seed, 0, k);
    const Instance inst = make_instance(cfg, out.m, cfg.s, seed);
    const ModelDescriptor desc = model_descriptor(g, inst.truth);
    CertifyTrial t;
    t.seed = seed;
    t.report = min_norm_certificate(g, inst.a, inst.truth, desc, opt);
    t.scaled_lambda_min = t.report.lambda_min_t * static_cast<double>(out.m) / inst.truth.squaredNorm();
    t.ri_scaled_pass = t.scaled_lambda_min >= (1.0 - cfg.rho) * (1.0 - cfg.rho);
    out.trials[k] = std::move(t);
  });
  int nd = 0, ri = 0, ris = 0;
  for (const auto& t : out.trials) {
    nd += t.report.ndsc_pass;
    ri += t.report.ri_pass;
    ris += t.ri_scaled_pass;
  }
  out.ndsc_rate = static_cast<double>(nd) / cfg.trials;
  out.ri_rate = static_cast<double>(ri) / cfg.trials;
  out.ri_scaled_rate = static_cast<double>(ris) / cfg.trials;
  return out;
}

std::vector<BoundRow> cmd_bounds(const ExperimentConfig& cfg) {
  std::vector<BoundRow> rows(cfg.bound_rows.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    BoundParams p = cfg.bound_rows[i];
    if (p.kind == BoundKind::group_lasso && p.n == 0) p.n = p.block_size * p.num_blocks;
    BoundRow& row = rows[i];
    row.report.params = p;
    row.report.t = cfg.bound_t;
    row.report.nu = nu_constant();
    row.report.prefactor = sample_prefactor(cfg.bound_t);
    try {
      row.report = sample_bound(p, cfg.bound_t);
    } catch (const std::invalid_argument& e) {
      row.valid = false;
      row.note = e.what();
      row.report.width_bound = kNaN;
      row.report.required_m = 0;
      return;
    }
    const std::uint64_t seed = trial_seed(cfg.seed, i, 0);
    if (p.kind == BoundKind::lasso && p.s >= 1) {
      const GaugeSpec g = GaugeSpec::lasso(p.n);
      const ModelDescriptor d = model_descriptor(g, sparse_signal(p.n, p.s, seed));
      row.mc = gaussian_width_mc(g, d, cfg.width_samples, derive_seed(seed, {9}));
      row.has_mc = true;
    } else if (p.kind == BoundKind::group_lasso && p.s >= 1) {
      const Index n = p.block_size * p.num_blocks;
      const GaugeSpec g = GaugeSpec::group_lasso(n, p.block_size);
      const ModelDescriptor d = model_descriptor(g, block_sparse_signal(n, p.block_size, p.s, seed));
      row.mc = gaussian_width_mc(g, d, cfg.width_samples, derive_seed(seed, {9}));
      row.has_mc = true;
    }
    if (row.has_mc)
      row.mc_within_bound = row.mc.width_sq <= row.report.width_bound + 3.0 * row.mc.width_sq_stderr;
  });
  return rows;
}

ConcentrationOutput cmd_concentration(const ExperimentConfig& cfg) {
  ConcentrationOutput out;
  std::vector<ConcentrationKind> kinds;
  for (const auto& k : cfg.conc_kinds) kinds.push_back(concentration_kind_from_string(k));
  for (auto k : kinds)
    for (Index m : cfg.conc_m_grid) out.rows.push_back({k, m, 0.0});
  parallel_for(out.rows.size(), [&](std::size_t i) {
    ConcentrationParams p;
    p.m = out.rows[i].m;
    p.dim = cfg.conc_dim;
    p.delta = cfg.conc_delta;
    p.rho = cfg.conc_rho;
    out.rows[i].pass_fraction = concentration_check(out.rows[i].kind, p, cfg.trials,
                                                    trial_seed(cfg.seed, i, 0));
  });
  for (auto k : kinds) {
    std::vector<double> ms, fr;
    for (const auto& r : out.rows)
      if (r.kind == k) {
        ms.push_back(static_cast<double>(r.m));
        fr.push_back(r.pass_fraction);
      }
    out.spearman.emplace_back(k, ms.size() >= 2 ? spearman(ms, fr) : kNaN);
  }
  return out;
}

// --- output ---------------------------------------------------------------------

const char* code_version() { return "0.1.0"; }

void add_standard_meta(ResultTable& t, const ExperimentConfig& cfg) {
  t.add_meta("tool", "prpr");
  t.add_meta("version", code_version());
  t.add_meta("command", cfg.command);
  t.add_meta("fidelity_scale", format_double(cfg.solver.fidelity_scale));
  t.add_meta("L", format_double(cfg.solver.rel_smooth_l));
  t.add_meta("gamma", format_double(cfg.solver.step));
  t.add_meta("log_base", cfg.log_base);
  t.add_meta("config", cfg.to_json().dump());
}

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
  if (dir.empty() || dir == ".") return file;
  return dir.back() == '/' ? dir + file : dir + "/" + file;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
}

std::string gnuplot_header(const std::string& png) {
  return "set datafile separator ','\nset terminal pngcairo size 900,600\nset output '" + png +
         "'\nset key off\n";
}

std::vector<std::string> trial_row(std::size_t k, const TrialResult& t) {
  return {std::to_string(k),
          std::to_string(t.seed),
          fmt_index(t.m),
          fmt_index(t.s),
          format_double(t.sigma),
          format_double(t.noise_norm),
          format_double(t.lambda),
          format_double(t.dist),
          format_double(t.rel_dist),
          fmt_index(t.support_size),
          fmt_index(t.support_target),
          std::to_string(t.support_stable_from),
          std::to_string(t.iterations),
          t.termination,
          std::to_string(t.descent_violations),
          format_double(t.max_relative_increase),
          format_double(t.objective),
          t.error};
}

const std::vector<std::string>& trial_columns() {
  static const std::vector<std::string> cols{
      "trial",      "seed",         "m",          "s",           "sigma",
      "noise_norm", "lambda",       "dist",       "rel_dist",    "support_size",
      "support_target", "support_stable_from", "iterations", "termination",
      "descent_violations", "max_relative_increase", "objective", "error"};
  return cols;
}

struct Emitter {
  const ExperimentConfig& cfg;
  std::string dir;
  std::string base;
  bool stamp;

  ResultTable table(std::vector<std::string> cols) const {
    ResultTable t;
    add_standard_meta(t, cfg);
    if (stamp) t.add_meta("timestamp", timestamp_now());
    t.columns = std::move(cols);
    return t;
  }
  std::string path(const std::string& suffix) const { return join_path(dir, base + suffix); }
};

}  // namespace

int execute(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& summary,
            bool with_timestamp) {
  const Emitter em{cfg, out_dir, cfg.preset.empty() ? cfg.command : cfg.preset, with_timestamp};
  std::vector<std::string> failed_asserts;
  std::ostringstream line;
  line << "RESULT command=" << cfg.command;

  const auto check_min = [&](const char* name, double value, double bound) {
    if (std::isnan(bound)) return;
    if (!(value >= bound)) {
      failed_asserts.push_back(name);
      summary << "ASSERT " << name << " value=" << format_double(value)
              << " min=" << format_double(bound) << " status=fail\n";
    }
  };

  if (cfg.command == "run") {
    const RunOutput out = cmd_run(cfg);
    ResultTable t = em.table(trial_columns());
    t.add_meta("median_rel_dist", format_double(out.median_rel_dist));
    t.add_meta("success_rate", format_double(out.success_rate));
    std::string plot = gnuplot_header(em.base + ".png") +
                       "set multiplot layout 1,2\nset logscale y\nset xlabel 'iteration'\n"
                       "set ylabel 'dist'\nplot ";
    std::string support_plot = "unset logscale y\nset ylabel 'support size'\nplot ";
    for (std::size_t k = 0; k < out.trials.size(); ++k) {
      const auto& tr = out.trials[k];
      t.add_row(trial_row(k, tr));
      if (!cfg.write_traces || tr.failed) continue;
      const std::string trace_name = em.base + "_trace_trial" + std::to_string(k) + ".csv";
      std::ostringstream body;
      ResultTable meta = em.table({});
      meta.add_meta("trial", std::to_string(k));
      meta.add_meta("truth_norm", format_double(tr.truth.norm()));
      for (const auto& [key, v] : meta.meta) body << "# " << key << '=' << v << '\n';
      write_trace_csv(body, tr.trace);
      write_text(join_path(out_dir, trace_name), body.str());
      const std::string sep = (plot.back() == ' ') ? "" : ", ";
      plot += sep + "'" + trace_name + "' using 1:3 with lines";
      support_plot += sep + "'" + trace_name + "' using 1:4 with lines";

      if (cfg.regularizer != "lasso" && cfg.regularizer != "group_lasso") {
        ResultTable sig = em.table({"i", "truth", "estimate"});
        const double sign = (tr.estimate - tr.truth).norm() <= (tr.estimate + tr.truth).norm() ? 1.0 : -1.0;
        for (Index i = 0; i < tr.truth.size(); ++i)
          sig.add_row({fmt_index(i), format_double(tr.truth[i]), format_double(sign * tr.estimate[i])});
        sig.write_file(em.path("_signal_trial" + std::to_string(k) + ".csv"));
      }
    }
    t.write_file(em.path(".csv"));
    if (plot.back() != ' ') write_text(em.path(".gp"), plot + "\n" + support_plot + "\nunset multiplot\n");
    else write_text(em.path(".gp"), gnuplot_header(em.base + ".png") +
                                        "plot '" + em.base + ".csv' using 1:9 with points\n");
    line << " median_rel_dist=" << format_double(out.median_rel_dist)
         << " success_rate=" << format_double(out.success_rate);
    check_min("success_rate", out.success_rate, cfg.assert_rate_min);
  } else if (cfg.command == "stability") {
    const StabilityOutput out = cmd_stability(cfg);
    const std::string slope = out.slope ? format_double(*out.slope) : "NA";
    ResultTable t = em.table({"sigma", "lambda", "median_dist", "min_dist", "max_dist", "failures",
                              "trials", "slope"});
    t.add_meta("slope", slope);
    ResultTable detail = em.table(trial_columns());
    for (std::size_t i = 0; i < out.sigmas.size(); ++i) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      int failures = 0;
      for (std::size_t k = 0; k < out.trials[i].size(); ++k) {
        const auto& tr = out.trials[i][k];
        detail.add_row(trial_row(k, tr));
        if (tr.failed) {
          ++failures;
          continue;
        }
        lo = std::min(lo, tr.dist);
        hi = std::max(hi, tr.dist);
      }
      t.add_row({format_double(out.sigmas[i]), format_double(out.trials[i].front().lambda),
                 format_double(out.median_dist[i]), format_double(lo), format_double(hi),
                 std::to_string(failures), std::to_string(cfg.trials), slope});
    }
    t.write_file(em.path(".csv"));
    detail.write_file(em.path("_trials.csv"));
    write_text(em.path(".gp"), gnuplot_header(em.base + ".png") +
                                   "set logscale xy\nset xlabel 'sigma'\nset ylabel 'median dist'\n"
                                   "plot '" + em.base + ".csv' using 1:3 with linespoints\n");
    line << " slope=" << slope;
    const double sv = out.slope ? *out.slope : kNaN;
    if (!std::isnan(cfg.assert_slope_min) || !std::isnan(cfg.assert_slope_max)) {
      const bool lo_ok = std::isnan(cfg.assert_slope_min) || sv >= cfg.assert_slope_min;
      const bool hi_ok = std::isnan(cfg.assert_slope_max) || sv <= cfg.assert_slope_max;
      if (!(lo_ok && hi_ok)) {
        failed_asserts.push_back("slope_range");
        summary << "ASSERT slope_range value=" << slope << " min=" << format_double(cfg.assert_slope_min)
                << " max=" << format_double(cfg.assert_slope_max) << " status=fail\n";
      }
    }
  } else if (cfg.command == "phase-diagram") {
    const auto cells = cmd_phase_diagram(cfg);
    ResultTable t = em.table({"m", "s", "trials", "successes", "rate"});
    for (const auto& c : cells)
      t.add_row({fmt_index(c.m), fmt_index(c.s), std::to_string(c.trials),
                 std::to_string(c.successes), format_double(c.rate())});
    t.write_file(em.path(".csv"));
    write_text(em.path(".gp"), gnuplot_header(em.base + ".png") +
                                   "set xlabel 'm'\nset ylabel 's'\nset cblabel 'success rate'\n"
                                   "set view map\nsplot '" + em.base +
                                   ".csv' using 1:2:5 with points pointtype 5 palette\n");
    double overall = 0.0;
    for (const auto& c : cells) overall += c.rate();
    overall /= static_cast<double>(cells.size());
    line << " cells=" << cells.size() << " mean_rate=" << format_double(overall);
    check_min("mean_rate", overall, cfg.assert_rate_min);
  } else if (cfg.command == "certify") {
    const CertifyOutput out = cmd_certify(cfg);
    std::vector<std::string> cols{"trial", "seed"};
    for (const auto& c : certificate_columns()) cols.push_back(c);
    cols.push_back("scaled_lambda_min");
    cols.push_back("ri_scaled_pass");
    ResultTable t = em.table(cols);
    t.add_meta("m", fmt_index(out.m));
    t.add_meta("ndsc_rate", format_double(out.ndsc_rate));
    t.add_meta("ri_rate", format_double(out.ri_rate));
    t.add_meta("ri_scaled_rate", format_double(out.ri_scaled_rate));
    for (std::size_t k = 0; k < out.trials.size(); ++k) {
      std::vector<std::string> row{std::to_string(k), std::to_string(out.trials[k].seed)};
      for (auto& f : certificate_row(out.trials[k].report)) row.push_back(std::move(f));
      row.push_back(format_double(out.trials[k].scaled_lambda_min));
      row.push_back(out.trials[k].ri_scaled_pass ? "1" : "0");
      t.add_row(std::move(row));
    }
    t.write_file(em.path(".csv"));
    write_text(em.path(".gp"), gnuplot_header(em.base + ".png") +
                                   "set xlabel 'trial'\nset ylabel 'sigma_C(w_S)'\n"
                                   "plot '" + em.base + ".csv' using 1:3 with points, 1 with lines\n");
    line << " m=" << out.m << " ndsc_rate=" << format_double(out.ndsc_rate)
         << " ri_rate=" << format_double(out.ri_rate)
         << " ri_scaled_rate=" << format_double(out.ri_scaled_rate);
    check_min("ndsc_rate", out.ndsc_rate, cfg.assert_rate_min);
  } else if (cfg.command == "bounds") {
    const auto rows = cmd_bounds(cfg);
    std::vector<std::string> cols = bound_columns();
    for (const char* c : {"valid", "note", "width_mc_sq", "width_mc_sq_stderr", "mc_within_bound"})
      cols.emplace_back(c);
    ResultTable t = em.table(cols);
    int invalid = 0, exceeded = 0;
    for (const auto& r : rows) {
      auto row = bound_row(r.report);
      if (!r.valid) row[10] = "";
      row.push_back(r.valid ? "1" : "0");
      row.push_back(r.note);
      row.push_back(r.has_mc ? format_double(r.mc.width_sq) : "");
      row.push_back(r.has_mc ? format_double(r.mc.width_sq_stderr) : "");
      row.push_back(r.has_mc ? (r.mc_within_bound ? "1" : "0") : "");
      t.add_row(std::move(row));
      invalid += !r.valid;
      exceeded += r.has_mc && !r.mc_within_bound;
    }
    t.write_file(em.path(".csv"));
    write_text(em.path(".gp"), gnuplot_header(em.base + ".png") +
                                   "set logscale y\nset ylabel 'required m'\n"
                                   "plot '" + em.base + ".csv' using 0:11 with points\n");
    line << " rows=" << rows.size() << " invalid=" << invalid << " mc_exceeds_bound=" << exceeded;
  } else if (cfg.command == "concentration") {
    const ConcentrationOutput out = cmd_concentration(cfg);
    ResultTable t = em.table({"kind", "m", "dim", "delta", "rho", "trials", "pass_fraction"});
    for (const auto& [k, rho_s] : out.spearman) t.add_meta("spearman_" + to_string(k), format_double(rho_s));
    double min_pass = 1.0;
    for (const auto& r : out.rows) {
      t.add_row({to_string(r.kind), fmt_index(r.m), fmt_index(cfg.conc_dim),
                 format_double(cfg.conc_delta), format_double(cfg.conc_rho),
                 std::to_string(cfg.trials), format_double(r.pass_fraction)});
      min_pass = std::min(min_pass, r.pass_fraction);
    }
    t.write_file(em.path(".csv"));
    write_text(em.path(".gp"), gnuplot_header(em.base + ".png") +
                                   "set key on\nset logscale x\nset xlabel 'm'\nset ylabel 'pass fraction'\n"
                                   "plot '" + em.base + ".csv' using 2:7 with points\n");
    for (const auto& [k, rho_s] : out.spearman) line << " spearman_" << to_string(k) << '=' << format_double(rho_s);
    check_min("min_pass_fraction", min_pass, cfg.assert_rate_min);
  }

  if (failed_asserts.empty()) {
    line << " status=ok";
    summary << line.str() << '\n';
    return exit_ok;
  }
  line << " status=assertion_failed failed=";
  for (std::size_t i = 0; i < failed_asserts.size(); ++i) line << (i ? ";" : "") << failed_asserts[i];
  summary << line.str() << '\n';
  return exit_assertion;
}

}  // namespace prpr
