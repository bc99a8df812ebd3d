#pragma once

#include "prpr/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace prpr {

/// Operation not defined for this regularizer kind (e.g. polar of TV).
class UnsupportedForKind : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Inner iterative solver stopped before reaching its tolerance.
class ConvergenceFailure : public std::runtime_error {
public:
  ConvergenceFailure(const std::string& what, double achieved_gap, int iterations)
      : std::runtime_error(what), gap_(achieved_gap), iterations_(iterations) {}
  [[nodiscard]] double achieved_gap() const { return gap_; }
  [[nodiscard]] int iterations() const { return iterations_; }

private:
  double gap_;
  int iterations_;
};

/// Matrix-free analysis/synthesis pair. For a Parseval frame
/// synthesis(analysis(x)) == x.
struct FrameDescriptor {
  Index n = 0;
  Index p = 0;
  std::string name;
  std::function<Vec(const Vec&)> analysis;   // Dᵀ : Rⁿ → Rᵖ
  std::function<Vec(const Vec&)> synthesis;  // D  : Rᵖ → Rⁿ
};

/// Undecimated (à-trous) Haar transform with `levels` detail bands plus the
/// coarse approximation, periodic boundary, scaled so that D Dᵀ = Id.
/// Coefficients are laid out as [d_1, ..., d_J, a_J], each of length n.
FrameDescriptor haar_frame(Index n, int levels);

/// Largest deviation |D Dᵀ e_i − e_i| over the canonical basis.
double parseval_defect(const FrameDescriptor& frame);

enum class GaugeKind { lasso, group_lasso, tv_1d, analysis_l1 };

std::string to_string(GaugeKind kind);
GaugeKind gauge_kind_from_string(const std::string& name);

/// Settings for the dual accelerated projected-gradient prox used by tv_1d and
/// analysis_l1. Stopping rule: duality gap ≤ gap_tol · (1 + |primal|).
struct DualProxOptions {
  double gap_tol = 1e-8;
  int max_iters = 20000;
  int check_every = 5;
};

/// A symmetric gauge regularizer on Rⁿ.
struct GaugeSpec {
  GaugeKind kind = GaugeKind::lasso;
  Index n = 0;
  Index block_size = 1;                          // group_lasso only
  std::shared_ptr<const FrameDescriptor> frame;  // analysis_l1 only
  DualProxOptions dual;

  static GaugeSpec lasso(Index n);
  /// Contiguous blocks {0..B-1}, {B..2B-1}, ...; B must divide n.
  static GaugeSpec group_lasso(Index n, Index block_size);
  static GaugeSpec tv_1d(Index n);
  static GaugeSpec analysis_l1(std::shared_ptr<const FrameDescriptor> frame);

  [[nodiscard]] bool decomposable() const {
    return kind == GaugeKind::lasso || kind == GaugeKind::group_lasso;
  }
  [[nodiscard]] Index num_blocks() const { return n / block_size; }
};

/// Which space the model descriptor lives in: Rⁿ for lasso/group lasso, the
/// gradient (n−1) or frame-coefficient (p) space for tv_1d/analysis_l1.
enum class ModelSpace { primal, coefficients };

/// Model subspace T, generalized sign e and complement S at a point.
struct ModelDescriptor {
  ModelSpace space = ModelSpace::primal;
  IndexSet t_indices;      // coordinates spanning T (sorted)
  IndexSet active_blocks;  // group_lasso only
  Vec e_vector;            // supported on t_indices
  Index t_dim = 0;

  /// true iff coordinate i belongs to T.
  [[nodiscard]] std::vector<bool> t_mask(Index dim) const;
};

double gauge_value(const GaugeSpec& g, const Vec& x);

/// σ_C applied to v restricted to S. Only lasso and group lasso.
double polar_on_complement(const GaugeSpec& g, const Vec& v, const ModelDescriptor& desc);

/// Full polar (dual) gauge σ_C(v) for decomposable kinds.
double polar_value(const GaugeSpec& g, const Vec& v);

/// Result of the dual iterative prox (tv_1d, analysis_l1).
struct DualProxResult {
  Vec u;         // primal solution
  Vec dual;      // w with ‖w‖_∞ ≤ μ and u = p − Kᵀw
  double gap = 0.0;
  double primal = 0.0;
  int iterations = 0;
};

/// argmin_u μ‖K u‖₁ + ½‖u − p‖² for K = ∇ (tv_1d) or K = Dᵀ (analysis_l1),
/// solved by accelerated projected gradient on the dual box ‖w‖_∞ ≤ μ.
/// `warm_start`, when non-null and of the right size, seeds the dual iterate.
/// Throws ConvergenceFailure carrying the achieved gap.
DualProxResult dual_analysis_prox(const GaugeSpec& g, const Vec& p, double mu,
                                  const Vec* warm_start = nullptr);

/// argmin_u μ R(u) + ½‖u − p‖². μ must be > 0.
Vec euclidean_prox(const GaugeSpec& g, const Vec& p, double mu);

/// Unique real t > 0 with t³·s + t − 1 = 0 (s ≥ 0).
double bregman_scale_root(double z_norm_sq);

/// Gradient of the quartic entropy ψ(x) = ¼‖x‖⁴ + ½‖x‖²: (‖x‖² + 1) x.
Vec grad_entropy(const Vec& x);
double entropy(const Vec& x);

/// (∇ψ + μ∂R)⁻¹(p) computed as t·z with z = euclidean_prox(p, μ) and
/// t = bregman_scale_root(‖z‖²). μ = 0 inverts ∇ψ.
Vec bregman_prox(const GaugeSpec& g, const Vec& p, double mu, Vec* dual_warm_start = nullptr);

/// Default support threshold 1e-8·‖x‖_∞ (in the descriptor's space).
ModelDescriptor model_descriptor(const GaugeSpec& g, const Vec& x,
                                 std::optional<double> zero_tol = std::nullopt);

/// Euclidean projection of z onto t∂R(x) = {v : v_T = t e, σ_C(v_S) ≤ t}.
Vec project_scaled_subdiff(const GaugeSpec& g, const ModelDescriptor& desc, const Vec& z,
                           double t);

/// Discrete gradient (n → n−1) and its adjoint.
Vec forward_difference(const Vec& x);
Vec forward_difference_adjoint(const Vec& w, Index n);

}  // namespace prpr
