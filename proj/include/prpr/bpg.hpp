#pragma once

#include "prpr/gauges.hpp"
#include "prpr/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace prpr {

/// Parameters of Bregman proximal gradient on
///   F(x) = c_f ‖y − |Ax|²‖² + λ R(x)
/// with kernel ψ(x) = ¼‖x‖⁴ + ½‖x‖².
struct SolverConfig {
  double step = 0.99 / (3.0 + 1e-4);
  double rel_smooth_l = 3.0 + 1e-4;
  double lambda = 1e-8;
  double fidelity_scale = 0.25;  // c_f
  int max_iters = 5000;
  double x_change_tol = 1e-10;
  /// Duality-gap tolerance imposed on the inner TV / analysis prox during a
  /// solve (tighter of this and the gauge's own). Inexact prox steps show up
  /// as objective increases near convergence.
  double inner_gap_tol = 1e-12;
  std::uint64_t seed = 0;  // used by the default initialization
  bool record_trace = true;

  /// Throws std::invalid_argument unless 0 < γ < 1/L, λ ≥ 0, c_f > 0, inner_gap_tol > 0.
  void validate() const;
};

/// Inner prox failure during a solve, tagged with the outer iteration.
class SolverFailure : public std::runtime_error {
public:
  SolverFailure(const std::string& what, int iteration, double inner_gap)
      : std::runtime_error(what), iteration_(iteration), inner_gap_(inner_gap) {}
  [[nodiscard]] int iteration() const { return iteration_; }
  [[nodiscard]] double inner_gap() const { return inner_gap_; }

private:
  int iteration_;
  double inner_gap_;
};

struct SolverState {
  Vec x;
  int k = 0;
  Vec dual_warm_start;  // carried between TV / analysis prox calls
};

struct TraceRecord {
  int iter = 0;
  double objective = 0.0;
  double dist = 0.0;  // NaN when no truth is supplied
  Index support_size = 0;
  double x_change = 0.0;
};

enum class Termination { x_change_tol, max_iters };
std::string to_string(Termination t);

struct SolverTrace {
  std::vector<TraceRecord> records;  // record 0 is the initial point
  Termination reason = Termination::max_iters;
  int iterations = 0;
  /// Steps where F rose by more than 1e-12·(1 + |F|).
  int descent_violations = 0;
  double max_relative_increase = 0.0;

  /// First iteration from which the support size stays equal to `s` through
  /// the end of the trace, or -1.
  [[nodiscard]] int support_stable_from(Index s) const;
};

/// Seeded standard Gaussian vector scaled to unit norm.
struct GaussianUnitInit {};
using Initialization = std::variant<Vec, GaussianUnitInit>;

struct SolveResult {
  Vec x;
  SolverTrace trace;
};

double fidelity(const Mat& a, const Vec& y, const Vec& x, double c_f);

/// ∇ of c_f‖y − |Ax|²‖²: 4 c_f Aᵀ[((Ax)² − y) ⊙ Ax].
Vec grad_fidelity(const Mat& a, const Vec& y, const Vec& x, double c_f);

double objective(const GaugeSpec& g, const SolverConfig& cfg, const Mat& a, const Vec& y,
                 const Vec& x);

/// Bregman divergences D_h(x, z) = h(x) − h(z) − ⟨∇h(z), x − z⟩.
double bregman_divergence_fidelity(const Mat& a, const Vec& y, const Vec& x, const Vec& z,
                                   double c_f);
double bregman_divergence_entropy(const Vec& x, const Vec& z);

/// Global relative-smoothness constant from Hessian domination:
///   L_safe = max(12 c_f ‖A‖₂² max_r ‖a_r‖², 4 c_f ‖A‖₂² max(0, −min_r y_r)).
/// Conservative by orders of magnitude in the oversampled regime.
double safe_relative_smoothness(const Mat& a, const Vec& y, double c_f);

Vec initial_point(Index n, std::uint64_t seed);

/// One BPG iteration: x⁺ = (∇ψ + γλ∂R)⁻¹(∇ψ(x) − γ∇f(x)).
SolverState bpg_step(const SolverState& state, const GaugeSpec& g, const SolverConfig& cfg,
                     const Mat& a, const Vec& y);

/// Runs BPG until ‖x_{k+1} − x_k‖ / max(1, ‖x_k‖) ≤ x_change_tol or max_iters.
/// `truth` fills the dist column of the trace; with `synthesis` the distance
/// is taken between synthesis·x and truth (coefficient-space solves).
SolveResult solve(const GaugeSpec& g, const SolverConfig& cfg, const Mat& a, const Vec& y,
                  const Initialization& init = GaussianUnitInit{},
                  const std::optional<Vec>& truth = std::nullopt,
                  const Mat* synthesis = nullptr);

/// CSV with columns iter,objective,dist,support_size,x_change.
void write_trace_csv(std::ostream& os, const SolverTrace& trace);

}  // namespace prpr
