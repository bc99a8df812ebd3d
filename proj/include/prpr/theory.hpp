#pragma once

#include "prpr/gauges.hpp"
#include "prpr/types.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace prpr {

/// A parameter combination outside the domain where a formula is valid.
class PreconditionViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// B̄ = diag(A x̄) A together with the model support it is audited on.
struct LinearizedMap {
  Mat b_matrix;
  IndexSet t_indices;
};

LinearizedMap linearized_map(const Mat& a, const Vec& truth, IndexSet t_indices = {});

/// λ_min(B̄_Tᵀ B̄_T). Zero when |T| exceeds the row count.
double restricted_injectivity(const Mat& b, const IndexSet& t_indices);

struct CertificateOptions {
  double ri_tol_rel = 1e-10;  // ri_tol = ri_tol_rel · trace(B̄_Tᵀ B̄_T)
  double ndsc_margin = 1e-6;
};

struct CertificateReport {
  Vec eta;  // m
  Vec q;    // m
  Vec w;    // n, B̄ᵀ q
  double sigma_ws = 0.0;
  double lambda_min_t = 0.0;
  double ri_tol = 0.0;
  double q_norm = 0.0;
  double eta_norm = 0.0;
  double b_t_pinv_norm = 0.0;       // ‖B̄_T⁺‖ = λ_min^{-1/2}
  double interpolation_error = 0.0;  // ‖(B̄ᵀq)_T − e_T‖
  double eta_consistency = 0.0;      // ‖Aᵀη − B̄ᵀq‖
  bool ri_pass = false;
  bool ndsc_pass = false;
};

/// Minimal-norm certificate q = B̄_T(B̄_Tᵀ B̄_T)⁻¹ e, w = B̄ᵀq, and
/// η = diag(|A_T x̄|²) A_T (A_Tᵀ diag(|A_T x̄|²) A_T)⁻¹ e.
/// When RI fails, q, w, η are zero, sigma_ws is NaN and NDSC is skipped.
/// Lasso and group lasso only; x̄ must have a nonempty model.
CertificateReport min_norm_certificate(const GaugeSpec& g, const Mat& a, const Vec& truth,
                                       const ModelDescriptor& desc,
                                       const CertificateOptions& opt = {});

/// sqrt of the sum of the ⌈m/2⌉ smallest entries of (Az)², i.e. the minimum
/// of ‖A^I z‖ over row subsets |I| ≥ m/2, given az = A z.
double half_rows_min_norm(const Vec& az);

struct SminEstimate {
  double value = 0.0;  // min over accepted samples (an upper estimate)
  int accepted = 0;
  int draws = 0;
};

/// Monte-Carlo upper estimate of s_min over D_R(x̄) ∩ S^{n−1}. Candidates
/// z = normalize(ζ_T + β ζ_S), β ~ U[0,1], are accepted iff
/// R(x̄ + τz) ≤ R(x̄) with τ = 10⁻⁶‖x̄‖. Throws std::runtime_error if no
/// candidate is accepted within max_draws.
SminEstimate smin_mc(const GaugeSpec& g, const Mat& a, const Vec& truth,
                     const ModelDescriptor& desc, int n_samples, std::uint64_t seed,
                     int max_draws = 0);

struct WidthEstimate {
  double width_sq = 0.0;         // mean of dist(Z, cone(∂R(x̄)))²
  double width_sq_stderr = 0.0;  // standard error of that mean
  double estimate = 0.0;         // sqrt(width_sq)
  double std_error = 0.0;        // delta-method error of the sqrt
  int samples = 0;
};

/// min_{t ≥ 0} ‖z − proj_{t∂R(x̄)}(z)‖² by golden section on [0, 10‖z‖].
double dist_sq_to_normal_cone(const GaugeSpec& g, const ModelDescriptor& desc, const Vec& z,
                              double tol = 1e-8);

WidthEstimate gaussian_width_mc(const GaugeSpec& g, const ModelDescriptor& desc, int n_samples,
                                std::uint64_t seed);

enum class BoundKind { lasso, group_lasso, analysis_group_lasso, tv };
std::string to_string(BoundKind kind);
BoundKind bound_kind_from_string(const std::string& name);

struct BoundParams {
  BoundKind kind = BoundKind::lasso;
  Index n = 0;
  Index s = 0;           // sparsity, active blocks or jumps
  Index block_size = 1;  // B
  Index num_blocks = 0;  // L
  double delta = 0.0;    // TV jump separation Δ
  double c_tv = 1.0;     // TV constant C
};

/// Squared Gaussian-width bound of the descent cone.
///   lasso:  s((√(2 ln(n−s)) + 1)² + 1)
///   group:  s((√(2 ln(L−s)) + √B)² + B)   (also the analysis variant)
///   tv:     (C/Δ) s ln(n)², requires Δ ≥ 8s/n
double width_upper_bound(const BoundParams& p);

/// ν = √(π/2)/18.
double nu_constant();

/// 64(1+t)(ν+2)²/ν⁴.
double sample_prefactor(double t);

struct BoundReport {
  BoundParams params;
  double t = 0.0;
  double nu = 0.0;
  double prefactor = 0.0;
  double width_bound = 0.0;
  long long required_m = 1;
  std::string formula;
};

BoundReport sample_bound(const BoundParams& p, double t);

struct RateParams {
  double c = 3.0;  // λ = cσ
  double kappa = 0.5;
  double rho = 0.5;
  double delta = 1.0;
  double t = 2.0;
};

struct RateConstants {
  double literal = 0.0;       // closed-form lasso prefactor
  double empirical_2b = 0.0;  // 2b from measured quantities
  double a_coef = 0.0;
  double b_coef = 0.0;
  double alpha = 0.0;
  double sigma_max = 0.0;     // 1/(4ab): noise level below which dist ≤ 2bσ
};

/// Literal lasso rate prefactor with s = |T| and the empirical 2b. Requires
/// κ ∈ (0,1) and a report with ndsc_pass.
RateConstants rate_constant_lasso(const GaugeSpec& g, const Mat& a, const Vec& truth,
                                  const ModelDescriptor& desc, const CertificateReport& report,
                                  const RateParams& p);

enum class ConcentrationKind { inj, inj_log, hess };
std::string to_string(ConcentrationKind kind);
ConcentrationKind concentration_kind_from_string(const std::string& name);

struct ConcentrationParams {
  Index m = 100;
  Index dim = 20;  // n for inj, d = dim(T) for hess
  double delta = 1.0;
  double rho = 0.5;
};

/// Fraction of trials where the inequality holds:
///   inj:     ‖Ax‖_∞ ≤ (1+δ)/√m · ‖x‖
///   inj_log: ‖Ax‖_∞ ≤ √((1+δ)·2 ln m/m) · ‖x‖
///   hess:    ‖m A_Tᵀ diag(|A_T x̄|²) A_T − (2x̄x̄ᵀ + ‖x̄‖² I)‖ ≤ ϱ‖x̄‖²
double concentration_check(ConcentrationKind kind, const ConcentrationParams& p, int trials,
                           std::uint64_t seed);

/// Spearman rank correlation (average ranks for ties). NaN for a constant input.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct OracleResult {
  std::vector<Vec> minimizers;
  double min_value = 0.0;
  int feasible_patterns = 0;
};

/// Global minimizers of ‖x‖₁ subject to |Ax|² = y by enumerating the sign
/// patterns ε of √y and solving min ‖x‖₁ s.t. Ax = ε ⊙ √y for each. For
/// m ≥ n the constraint fixes x (least squares plus a feasibility check);
/// for m < n the linear program is solved exactly by enumerating its basic
/// solutions. Throws std::invalid_argument when m exceeds `cap`.
OracleResult oracle_exact_solve(const GaugeSpec& g, const Mat& a, const Vec& y, int cap = 16);

/// Flat key=value serialization.
std::string to_key_value(const CertificateReport& r);
std::string to_key_value(const BoundReport& r);

/// CSV header / row fragments (no trailing newline).
std::vector<std::string> certificate_columns();
std::vector<std::string> certificate_row(const CertificateReport& r);
std::vector<std::string> bound_columns();
std::vector<std::string> bound_row(const BoundReport& r);

}  // namespace prpr
