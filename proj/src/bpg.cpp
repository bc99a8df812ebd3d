#include "prpr/bpg.hpp"

#include "prpr/measurement.hpp"
#include "prpr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace prpr {

void SolverConfig::validate() const {
  if (!(rel_smooth_l > 0.0)) throw std::invalid_argument("solver: L must be > 0");
  if (!(step > 0.0) || !(step < 1.0 / rel_smooth_l))
    throw std::invalid_argument("solver: step must satisfy 0 < gamma < 1/L (gamma=" +
                                std::to_string(step) + ", L=" + std::to_string(rel_smooth_l) + ")");
  if (!(lambda >= 0.0)) throw std::invalid_argument("solver: lambda must be >= 0");
  if (!(fidelity_scale > 0.0)) throw std::invalid_argument("solver: fidelity_scale must be > 0");
  if (max_iters < 0) throw std::invalid_argument("solver: max_iters must be >= 0");
  if (!(inner_gap_tol > 0.0)) throw std::invalid_argument("solver: inner_gap_tol must be > 0");
}

std::string to_string(Termination t) {
  return t == Termination::x_change_tol ? "x_change_tol" : "max_iters";
}

int SolverTrace::support_stable_from(Index s) const {
  int from = -1;
  for (const auto& r : records) {
    if (r.support_size == s) {
      if (from < 0) from = r.iter;
    } else {
      from = -1;
    }
  }
  return from;
}

namespace {

void require_shapes(const Mat& a, const Vec& y, const Vec& x, const char* where) {
  if (a.cols() != x.size() || a.rows() != y.size())
    throw std::invalid_argument(std::string(where) + ": shape mismatch (A is " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                ", y has " + std::to_string(y.size()) + ", x has " +
                                std::to_string(x.size()) + ")");
}

Index support_size(const GaugeSpec& g, const Vec& x) { return model_descriptor(g, x).t_dim; }

}  // namespace

double fidelity(const Mat& a, const Vec& y, const Vec& x, double c_f) {
  require_shapes(a, y, x, "fidelity");
  return c_f * (y - (a * x).array().square().matrix()).squaredNorm();
}

Vec grad_fidelity(const Mat& a, const Vec& y, const Vec& x, double c_f) {
  require_shapes(a, y, x, "grad_fidelity");
  const Vec ax = a * x;
  const Vec weights = ((ax.array().square() - y.array()) * ax.array()).matrix();
  return (4.0 * c_f) * (a.transpose() * weights);
}

double objective(const GaugeSpec& g, const SolverConfig& cfg, const Mat& a, const Vec& y,
                 const Vec& x) {
  return fidelity(a, y, x, cfg.fidelity_scale) + cfg.lambda * gauge_value(g, x);
}

double bregman_divergence_fidelity(const Mat& a, const Vec& y, const Vec& x, const Vec& z,
                                   double c_f) {
  return fidelity(a, y, x, c_f) - fidelity(a, y, z, c_f) -
         grad_fidelity(a, y, z, c_f).dot(x - z);
}

double bregman_divergence_entropy(const Vec& x, const Vec& z) {
  return entropy(x) - entropy(z) - grad_entropy(z).dot(x - z);
}

double safe_relative_smoothness(const Mat& a, const Vec& y, double c_f) {
  const double op_sq = a.rows() && a.cols() ? Eigen::JacobiSVD<Mat>(a).singularValues()[0] : 0.0;
  const double a_sq = op_sq * op_sq;
  const double row_sq = a.rowwise().squaredNorm().maxCoeff();
  const double neg = std::max(0.0, -y.minCoeff());
  return std::max(12.0 * c_f * a_sq * row_sq, 4.0 * c_f * a_sq * neg);
}

Vec initial_point(Index n, std::uint64_t seed) {
  Rng rng(seed, 0x1417);
  Vec x(n);
  for (Index i = 0; i < n; ++i) x[i] = rng.normal();
  return x / x.norm();
}

SolverState bpg_step(const SolverState& state, const GaugeSpec& g, const SolverConfig& cfg,
                     const Mat& a, const Vec& y) {
  const Vec p = grad_entropy(state.x) - cfg.step * grad_fidelity(a, y, state.x, cfg.fidelity_scale);
  SolverState next;
  next.dual_warm_start = state.dual_warm_start;
  next.x = bregman_prox(g, p, cfg.step * cfg.lambda, &next.dual_warm_start);
  next.k = state.k + 1;
  return next;
}

SolveResult solve(const GaugeSpec& gauge, const SolverConfig& cfg, const Mat& a, const Vec& y,
                  const Initialization& init, const std::optional<Vec>& truth,
                  const Mat* synthesis) {
  cfg.validate();
  if (a.cols() != gauge.n || a.rows() != y.size())
    throw std::invalid_argument("solve: A, y and regularizer dimensions disagree");
  GaugeSpec g = gauge;
  g.dual.gap_tol = std::min(g.dual.gap_tol, cfg.inner_gap_tol);

  SolverState state;
  state.x = std::holds_alternative<Vec>(init) ? std::get<Vec>(init) : initial_point(g.n, cfg.seed);
  if (state.x.size() != g.n) throw std::invalid_argument("solve: x0 has the wrong length");
  if (synthesis && truth && (synthesis->cols() != g.n || synthesis->rows() != truth->size()))
    throw std::invalid_argument("solve: synthesis map does not match x and truth");

  SolveResult result;
  auto& trace = result.trace;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto record = [&](int iter, double obj, double change) {
    if (!cfg.record_trace) return;
    const double d = !truth       ? nan
                     : synthesis ? dist_to_signclass(*synthesis * state.x, *truth)
                                 : dist_to_signclass(state.x, *truth);
    trace.records.push_back({iter, obj, d,
                             support_size(g, state.x), change});
  };

  double obj = objective(g, cfg, a, y, state.x);
  record(0, obj, 0.0);
  for (int k = 0; k < cfg.max_iters; ++k) {
    SolverState next;
    try {
      next = bpg_step(state, g, cfg, a, y);
    } catch (const ConvergenceFailure& e) {
      throw SolverFailure(std::string("BPG iteration ") + std::to_string(k + 1) + ": " + e.what(),
                          k + 1, e.achieved_gap());
    }
    const double change = (next.x - state.x).norm() / std::max(1.0, state.x.norm());
    const double next_obj = objective(g, cfg, a, y, next.x);
    const double rise = next_obj - obj;
    if (rise > 1e-12 * (1.0 + std::abs(obj))) ++trace.descent_violations;
    trace.max_relative_increase =
        std::max(trace.max_relative_increase, rise / (1.0 + std::abs(obj)));
    state = std::move(next);
    obj = next_obj;
    trace.iterations = state.k;
    record(state.k, obj, change);
    if (change <= cfg.x_change_tol) {
      trace.reason = Termination::x_change_tol;
      break;
    }
  }
  result.x = std::move(state.x);
  return result;
}

void write_trace_csv(std::ostream& os, const SolverTrace& trace) {
  os << "iter,objective,dist,support_size,x_change\n";
  char buf[160];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%lld,%.17g\n", r.iter, r.objective, r.dist,
                  static_cast<long long>(r.support_size), r.x_change);
    os << buf;
  }
}

}  // namespace prpr
