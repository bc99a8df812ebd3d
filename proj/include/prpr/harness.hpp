#pragma once

#include "prpr/bpg.hpp"
#include "prpr/csv.hpp"
#include "prpr/gauges.hpp"
#include "prpr/theory.hpp"
#include "prpr/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace prpr {

using Json = nlohmann::ordered_json;

/// Invalid configuration; the message names the offending field (and the
/// line/column for syntax errors in a config file).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Fully resolved experiment configuration. Every field has a default, and
/// to_json() materializes all of them.
struct ExperimentConfig {
  std::string command = "run";
  std::string preset;

  // Problem. regularizer: lasso | group_lasso | tv_1d | analysis_l1 |
  // wavelet_synthesis (lasso on coefficients of the undecimated Haar frame).
  std::string regularizer = "lasso";
  Index n = 128;
  Index s = 12;  // nonzeros, active blocks or jumps
  Index block_size = 8;
  int haar_levels = 3;
  Index m = 0;                       // 0: use m_formula
  std::string m_formula = "s^1.5";   // s | s^1.5 | s^2 | sB | (sB)^2
  double m_factor = 0.5;
  std::string log_base = "e";        // e | 2 | 10

  // Solver.
  double lambda = 1e-8;
  std::string lambda_policy = "fixed";  // fixed | 3sigma
  double lambda_factor = 3.0;
  SolverConfig solver;
  int dual_max_iters = 20000;

  int trials = 10;
  std::uint64_t seed = 0;
  bool write_traces = true;

  // stability: σ is the noise norm ‖ε‖.
  std::vector<double> sigmas;  // empty: sigma_count log-spaced points
  double sigma_min = 1e-4;
  double sigma_max = 1e-2;
  int sigma_count = 8;

  // phase-diagram
  std::vector<Index> m_grid;
  std::vector<Index> s_grid;
  double success_tol = 1e-4;

  // certify
  double ndsc_margin = 1e-6;
  double ri_tol_rel = 1e-10;
  double rho = 0.5;

  // bounds
  std::vector<BoundParams> bound_rows;
  double bound_t = 1.0;
  int width_samples = 500;

  // concentration
  std::vector<std::string> conc_kinds{"inj", "inj_log", "hess"};
  std::vector<Index> conc_m_grid{100, 200, 400, 800, 1600};
  Index conc_dim = 8;
  double conc_delta = 1.0;
  double conc_rho = 0.5;

  // Assertions (NaN = off).
  double assert_slope_min = std::numeric_limits<double>::quiet_NaN();
  double assert_slope_max = std::numeric_limits<double>::quiet_NaN();
  double assert_rate_min = std::numeric_limits<double>::quiet_NaN();

  [[nodiscard]] Json to_json() const;
  /// Validates cross-field constraints; throws ConfigError.
  void validate() const;
};

/// Names accepted by preset().
std::vector<std::string> preset_names();

/// Preset overrides as a JSON object; throws ConfigError for unknown names.
Json preset(const std::string& name);

/// Applies a JSON object of overrides onto cfg. Unknown keys and type
/// mismatches raise ConfigError naming the field.
void apply_overrides(ExperimentConfig& cfg, const Json& overrides);

/// Parses a config document; syntax errors report line and column.
Json parse_config_text(const std::string& text, const std::string& source);

/// "key=value" → {key: parsed}. The value is parsed as JSON when possible
/// and taken as a string otherwise.
Json parse_set_override(const std::string& assignment);

/// Order: defaults, preset (from the override's or the file's "preset"),
/// file, then --set overrides.
ExperimentConfig resolve_config(const std::string& command, const Json& file_overrides,
                                const std::vector<Json>& set_overrides);

/// Number of measurements for n, s, B under the configured formula.
Index resolve_m(const ExperimentConfig& cfg, Index s);

/// ln, log2 or log10 according to cfg.log_base.
double config_log(const ExperimentConfig& cfg, double v);

/// Worker count: $PRPR_THREADS if set (≥ 1), else hardware concurrency, capped at `tasks`.
int worker_count(std::size_t tasks);

/// Runs task(i) for i in [0, count) on worker_count(count) threads. Exceptions
/// are rethrown on the calling thread (the lowest failing index wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

// Synthetic signals.
Vec sparse_signal(Index n, Index s, std::uint64_t seed);
Vec block_sparse_signal(Index n, Index block_size, Index active_blocks, std::uint64_t seed);
Vec piecewise_constant_signal(Index n, Index jumps, std::uint64_t seed);

/// Sub-seed for (cell, trial) under the root seed.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t cell, std::uint64_t trial);

/// One synthetic recovery instance.
struct Instance {
  Vec truth;
  Mat a;
  Vec clean;
  Vec y;
  double noise_norm = 0.0;
  double lambda = 0.0;
};

/// Truth and A from (cfg, m, s, seed); noise of norm σ (σ > 0) added on the
/// intensities with seed `noise_stream`.
Instance make_instance(const ExperimentConfig& cfg, Index m, Index s, std::uint64_t seed,
                       double sigma = 0.0, std::uint64_t noise_stream = 0);

struct TrialResult {
  std::uint64_t seed = 0;
  Index m = 0;
  Index s = 0;
  double sigma = 0.0;
  double noise_norm = 0.0;
  double lambda = 0.0;
  double dist = 0.0;
  double rel_dist = 0.0;
  Index support_size = 0;
  Index support_target = 0;  // -1 when there is no target model size
  int support_stable_from = -1;
  int iterations = 0;
  std::string termination;
  int descent_violations = 0;
  double max_relative_increase = 0.0;
  double objective = 0.0;
  bool failed = false;  // inner solver failure
  std::string error;
  SolverTrace trace;
  Vec truth;
  Vec estimate;  // in signal space
};

/// Builds the instance and solves it.
TrialResult run_trial(const ExperimentConfig& cfg, Index m, Index s, std::uint64_t seed,
                      double sigma = 0.0, std::uint64_t noise_stream = 0);

/// Regularizer in solver space (lasso on p coefficients for wavelet_synthesis).
GaugeSpec solver_gauge(const ExperimentConfig& cfg);

/// Model size that counts as "support identified" for the truth, -1 if none.
Index support_target(const ExperimentConfig& cfg, const Vec& truth);

struct RunOutput {
  std::vector<TrialResult> trials;
  double median_rel_dist = 0.0;
  double success_rate = 0.0;
};
RunOutput cmd_run(const ExperimentConfig& cfg);

struct StabilityOutput {
  std::vector<double> sigmas;
  std::vector<double> median_dist;
  std::vector<std::vector<TrialResult>> trials;  // [sigma][trial]
  std::optional<double> slope;                   // none for a single σ
};
StabilityOutput cmd_stability(const ExperimentConfig& cfg);

/// Least-squares slope of log(y) against log(x); nullopt for < 2 points or
/// nonpositive values.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct PhaseCell {
  Index m = 0;
  Index s = 0;
  int trials = 0;
  int successes = 0;
  [[nodiscard]] double rate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
};
std::vector<PhaseCell> cmd_phase_diagram(const ExperimentConfig& cfg);

struct CertifyTrial {
  std::uint64_t seed = 0;
  CertificateReport report;
  double scaled_lambda_min = 0.0;  // λ_min · m / ‖x̄‖²
  bool ri_scaled_pass = false;     // scaled ≥ (1 − ϱ)²
};
struct CertifyOutput {
  Index m = 0;
  std::vector<CertifyTrial> trials;
  double ndsc_rate = 0.0;
  double ri_rate = 0.0;
  double ri_scaled_rate = 0.0;
};
CertifyOutput cmd_certify(const ExperimentConfig& cfg);

struct BoundRow {
  BoundReport report;
  bool valid = true;
  std::string note;
  bool has_mc = false;
  WidthEstimate mc;
  bool mc_within_bound = false;  // width_sq ≤ bound + 3·stderr
};
std::vector<BoundRow> cmd_bounds(const ExperimentConfig& cfg);

struct ConcentrationRow {
  ConcentrationKind kind = ConcentrationKind::inj;
  Index m = 0;
  double pass_fraction = 0.0;
};
struct ConcentrationOutput {
  std::vector<ConcentrationRow> rows;
  std::vector<std::pair<ConcentrationKind, double>> spearman;  // per kind, vs m
};
ConcentrationOutput cmd_concentration(const ExperimentConfig& cfg);

/// Preamble shared by every output: resolved config, version, c_f, L, γ.
void add_standard_meta(ResultTable& t, const ExperimentConfig& cfg);

const char* code_version();

/// Exit status of the CLI: 0 ok, 1 runtime failure, 2 bad usage/config,
/// 3 an assertion flag failed.
enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_config = 2, exit_assertion = 3 };

/// Runs `cfg.command`, writing CSV and plot files to out_dir and a one-line
/// machine-readable summary to `summary`. Returns an ExitCode.
int execute(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& summary,
            bool with_timestamp = true);

}  // namespace prpr
