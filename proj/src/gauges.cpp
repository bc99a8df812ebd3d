#include "prpr/gauges.hpp"

#include <algorithm>
#include <cmath>

namespace prpr {

namespace {

void require_length(const GaugeSpec& g, const Vec& x, const char* where) {
  if (x.size() != g.n)
    throw std::invalid_argument(std::string(where) + ": expected length " + std::to_string(g.n) +
                                ", got " + std::to_string(x.size()));
}

void require_decomposable(const GaugeSpec& g, const char* where) {
  if (!g.decomposable())
    throw UnsupportedForKind(std::string(where) + " is not available for " + to_string(g.kind) +
                             " (only lasso and group_lasso)");
}

Vec analysis_apply(const GaugeSpec& g, const Vec& x) {
  if (g.kind == GaugeKind::tv_1d) return forward_difference(x);
  return g.frame->analysis(x);
}

Vec analysis_adjoint(const GaugeSpec& g, const Vec& w) {
  if (g.kind == GaugeKind::tv_1d) return forward_difference_adjoint(w, g.n);
  return g.frame->synthesis(w);
}

// ‖K‖² for the analysis operator: 4 bounds ‖∇‖² in 1-D; a Parseval frame has
// ‖Dᵀ‖ = 1.
double analysis_norm_sq(const GaugeSpec& g) { return g.kind == GaugeKind::tv_1d ? 4.0 : 1.0; }

}  // namespace

std::string to_string(GaugeKind kind) {
  switch (kind) {
    case GaugeKind::lasso: return "lasso";
    case GaugeKind::group_lasso: return "group_lasso";
    case GaugeKind::tv_1d: return "tv_1d";
    case GaugeKind::analysis_l1: return "analysis_l1";
  }
  return "unknown";
}

GaugeKind gauge_kind_from_string(const std::string& name) {
  if (name == "lasso") return GaugeKind::lasso;
  if (name == "group_lasso" || name == "glasso") return GaugeKind::group_lasso;
  if (name == "tv_1d" || name == "tv") return GaugeKind::tv_1d;
  if (name == "analysis_l1" || name == "wavelet") return GaugeKind::analysis_l1;
  throw std::invalid_argument("unknown regularizer kind '" + name + "'");
}

GaugeSpec GaugeSpec::lasso(Index n) {
  if (n < 1) throw std::invalid_argument("lasso: n must be positive");
  GaugeSpec g;
  g.kind = GaugeKind::lasso;
  g.n = n;
  return g;
}

GaugeSpec GaugeSpec::group_lasso(Index n, Index block_size) {
  if (n < 1 || block_size < 1 || n % block_size != 0)
    throw std::invalid_argument("group_lasso: block size " + std::to_string(block_size) +
                                " does not partition n=" + std::to_string(n));
  GaugeSpec g;
  g.kind = GaugeKind::group_lasso;
  g.n = n;
  g.block_size = block_size;
  return g;
}

GaugeSpec GaugeSpec::tv_1d(Index n) {
  if (n < 2) throw std::invalid_argument("tv_1d: n must be at least 2");
  GaugeSpec g;
  g.kind = GaugeKind::tv_1d;
  g.n = n;
  return g;
}

GaugeSpec GaugeSpec::analysis_l1(std::shared_ptr<const FrameDescriptor> frame) {
  if (!frame) throw std::invalid_argument("analysis_l1: frame is required");
  GaugeSpec g;
  g.kind = GaugeKind::analysis_l1;
  g.n = frame->n;
  g.frame = std::move(frame);
  return g;
}

std::vector<bool> ModelDescriptor::t_mask(Index dim) const {
  std::vector<bool> mask(static_cast<std::size_t>(dim), false);
  for (Index i : t_indices) mask[static_cast<std::size_t>(i)] = true;
  return mask;
}

Vec forward_difference(const Vec& x) {
  if (x.size() < 2) return Vec::Zero(0);
  return x.tail(x.size() - 1) - x.head(x.size() - 1);
}

Vec forward_difference_adjoint(const Vec& w, Index n) {
  // (∇ᵀw)[i] = w[i−1] − w[i] with w[−1] = w[n−1] = 0.
  Vec out = Vec::Zero(n);
  for (Index i = 0; i < w.size(); ++i) {
    out[i] -= w[i];
    out[i + 1] += w[i];
  }
  return out;
}

double gauge_value(const GaugeSpec& g, const Vec& x) {
  require_length(g, x, "gauge_value");
  switch (g.kind) {
    case GaugeKind::lasso: return x.lpNorm<1>();
    case GaugeKind::group_lasso: {
      double total = 0.0;
      for (Index b = 0; b < g.num_blocks(); ++b)
        total += x.segment(b * g.block_size, g.block_size).norm();
      return total;
    }
    case GaugeKind::tv_1d: return forward_difference(x).lpNorm<1>();
    case GaugeKind::analysis_l1: return g.frame->analysis(x).lpNorm<1>();
  }
  return 0.0;
}

double polar_value(const GaugeSpec& g, const Vec& v) {
  require_decomposable(g, "polar_value");
  require_length(g, v, "polar_value");
  if (g.kind == GaugeKind::lasso) return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0;
  double best = 0.0;
  for (Index b = 0; b < g.num_blocks(); ++b)
    best = std::max(best, v.segment(b * g.block_size, g.block_size).norm());
  return best;
}

double polar_on_complement(const GaugeSpec& g, const Vec& v, const ModelDescriptor& desc) {
  require_decomposable(g, "polar_on_complement");
  require_length(g, v, "polar_on_complement");
  const auto in_t = desc.t_mask(g.n);
  double best = 0.0;
  if (g.kind == GaugeKind::lasso) {
    for (Index i = 0; i < g.n; ++i)
      if (!in_t[static_cast<std::size_t>(i)]) best = std::max(best, std::abs(v[i]));
    return best;
  }
  for (Index b = 0; b < g.num_blocks(); ++b) {
    if (in_t[static_cast<std::size_t>(b * g.block_size)]) continue;
    best = std::max(best, v.segment(b * g.block_size, g.block_size).norm());
  }
  return best;
}

DualProxResult dual_analysis_prox(const GaugeSpec& g, const Vec& p, double mu,
                                  const Vec* warm_start) {
  if (g.kind != GaugeKind::tv_1d && g.kind != GaugeKind::analysis_l1)
    throw UnsupportedForKind("dual_analysis_prox requires tv_1d or analysis_l1");
  require_length(g, p, "dual_analysis_prox");
  if (!(mu > 0.0)) throw std::invalid_argument("dual_analysis_prox: mu must be > 0");

  const Index dual_dim = g.kind == GaugeKind::tv_1d ? g.n - 1 : g.frame->p;
  const double step = 1.0 / analysis_norm_sq(g);
  const auto clip = [mu](Vec w) { return w.cwiseMax(-mu).cwiseMin(mu).eval(); };

  Vec w = (warm_start && warm_start->size() == dual_dim) ? clip(*warm_start)
                                                         : Vec::Zero(dual_dim).eval();
  Vec w_prev = w;
  Vec y = w;
  double theta = 1.0;

  DualProxResult res;
  const auto evaluate = [&](const Vec& wk) {
    res.u = p - analysis_adjoint(g, wk);
    const Vec ku = analysis_apply(g, res.u);
    const Vec ktw = p - res.u;
    res.primal = mu * ku.lpNorm<1>() + 0.5 * ktw.squaredNorm();
    // primal − dual with u = p − Kᵀw collapses to Σ μ|Ku| − w·Ku, which is
    // termwise nonnegative on the box and avoids cancelling ‖p‖² terms.
    res.gap = (mu * ku.array().abs() - wk.array() * ku.array()).sum();
    return res.gap <= g.dual.gap_tol * (1.0 + std::abs(res.primal));
  };

  if (evaluate(w)) {
    res.dual = w;
    return res;
  }
  for (int k = 1; k <= g.dual.max_iters; ++k) {
    const Vec u_y = p - analysis_adjoint(g, y);
    Vec w_next = clip(y + step * analysis_apply(g, u_y));
    // Gradient-based adaptive restart of the momentum.
    if ((y - w_next).dot(w_next - w) > 0.0) {
      theta = 1.0;
      y = w;
      w_next = clip(y + step * analysis_apply(g, p - analysis_adjoint(g, y)));
    }
    const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    y = w_next + ((theta - 1.0) / theta_next) * (w_next - w);
    theta = theta_next;
    w_prev = w;
    w = std::move(w_next);
    res.iterations = k;
    if (k % g.dual.check_every == 0 || k == g.dual.max_iters) {
      if (evaluate(w)) {
        res.dual = w;
        return res;
      }
    }
  }
  throw ConvergenceFailure("dual prox for " + to_string(g.kind) + " did not reach gap tolerance",
                           res.gap, res.iterations);
}

Vec euclidean_prox(const GaugeSpec& g, const Vec& p, double mu) {
  require_length(g, p, "euclidean_prox");
  if (!(mu > 0.0)) throw std::invalid_argument("euclidean_prox: mu must be > 0");
  switch (g.kind) {
    case GaugeKind::lasso: {
      Vec out(p.size());
      for (Index i = 0; i < p.size(); ++i) {
        const double a = std::abs(p[i]);
        out[i] = a <= mu ? 0.0 : std::copysign(a - mu, p[i]);
      }
      return out;
    }
    case GaugeKind::group_lasso: {
      Vec out = Vec::Zero(p.size());
      for (Index b = 0; b < g.num_blocks(); ++b) {
        const auto seg = p.segment(b * g.block_size, g.block_size);
        const double nrm = seg.norm();
        if (nrm > mu) out.segment(b * g.block_size, g.block_size) = (1.0 - mu / nrm) * seg;
      }
      return out;
    }
    case GaugeKind::tv_1d:
    case GaugeKind::analysis_l1: return dual_analysis_prox(g, p, mu).u;
  }
  return p;
}

double bregman_scale_root(double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("bregman_scale_root: argument must be >= 0");
  if (s == 0.0) return 1.0;
  // f(t) = s t³ + t − 1 is convex increasing on t > 0 and min(1, s^{-1/3}) lies
  // right of the root, so Newton decreases monotonically onto it.
  double t = std::min(1.0, std::cbrt(1.0 / s));
  for (int it = 0; it < 100; ++it) {
    const double f = s * t * t * t + t - 1.0;
    const double df = 3.0 * s * t * t + 1.0;
    const double next = t - f / df;
    if (!(next < t)) break;
    t = next;
  }
  return t;
}

double entropy(const Vec& x) {
  const double r = x.squaredNorm();
  return 0.25 * r * r + 0.5 * r;
}

Vec grad_entropy(const Vec& x) { return (x.squaredNorm() + 1.0) * x; }

Vec bregman_prox(const GaugeSpec& g, const Vec& p, double mu, Vec* dual_warm_start) {
  require_length(g, p, "bregman_prox");
  if (mu < 0.0) throw std::invalid_argument("bregman_prox: mu must be >= 0");
  Vec z;
  if (mu == 0.0) {
    z = p;
  } else if (g.kind == GaugeKind::tv_1d || g.kind == GaugeKind::analysis_l1) {
    DualProxResult r = dual_analysis_prox(g, p, mu, dual_warm_start);
    if (dual_warm_start) *dual_warm_start = r.dual;
    z = std::move(r.u);
  } else {
    z = euclidean_prox(g, p, mu);
  }
  return bregman_scale_root(z.squaredNorm()) * z;
}

ModelDescriptor model_descriptor(const GaugeSpec& g, const Vec& x, std::optional<double> zero_tol) {
  require_length(g, x, "model_descriptor");
  ModelDescriptor d;
  const auto sparse_sign = [&](const Vec& c) {
    const double inf = c.size() ? c.lpNorm<Eigen::Infinity>() : 0.0;
    const double tol = zero_tol.value_or(1e-8 * inf);
    d.e_vector = Vec::Zero(c.size());
    for (Index i = 0; i < c.size(); ++i) {
      if (std::abs(c[i]) > tol) {
        d.t_indices.push_back(i);
        d.e_vector[i] = c[i] > 0 ? 1.0 : -1.0;
      }
    }
    d.t_dim = static_cast<Index>(d.t_indices.size());
  };

  switch (g.kind) {
    case GaugeKind::lasso: sparse_sign(x); break;
    case GaugeKind::group_lasso: {
      double max_norm = 0.0;
      for (Index b = 0; b < g.num_blocks(); ++b)
        max_norm = std::max(max_norm, x.segment(b * g.block_size, g.block_size).norm());
      const double tol = zero_tol.value_or(1e-8 * max_norm);
      d.e_vector = Vec::Zero(g.n);
      for (Index b = 0; b < g.num_blocks(); ++b) {
        const auto seg = x.segment(b * g.block_size, g.block_size);
        const double nrm = seg.norm();
        if (nrm <= tol) continue;
        d.active_blocks.push_back(b);
        d.e_vector.segment(b * g.block_size, g.block_size) = seg / nrm;
        for (Index j = 0; j < g.block_size; ++j) d.t_indices.push_back(b * g.block_size + j);
      }
      d.t_dim = static_cast<Index>(d.t_indices.size());
      break;
    }
    case GaugeKind::tv_1d:
      d.space = ModelSpace::coefficients;
      sparse_sign(forward_difference(x));
      break;
    case GaugeKind::analysis_l1:
      d.space = ModelSpace::coefficients;
      sparse_sign(g.frame->analysis(x));
      break;
  }
  return d;
}

Vec project_scaled_subdiff(const GaugeSpec& g, const ModelDescriptor& desc, const Vec& z, double t) {
  require_decomposable(g, "project_scaled_subdiff");
  require_length(g, z, "project_scaled_subdiff");
  if (t < 0.0) throw std::invalid_argument("project_scaled_subdiff: t must be >= 0");
  const auto in_t = desc.t_mask(g.n);
  Vec v(g.n);
  if (g.kind == GaugeKind::lasso) {
    for (Index i = 0; i < g.n; ++i)
      v[i] = in_t[static_cast<std::size_t>(i)] ? t * desc.e_vector[i] : std::clamp(z[i], -t, t);
    return v;
  }
  const Index bs = g.block_size;
  for (Index b = 0; b < g.num_blocks(); ++b) {
    if (in_t[static_cast<std::size_t>(b * bs)]) {
      v.segment(b * bs, bs) = t * desc.e_vector.segment(b * bs, bs);
      continue;
    }
    const auto seg = z.segment(b * bs, bs);
    const double nrm = seg.norm();
    v.segment(b * bs, bs) = nrm > t ? ((t / nrm) * seg).eval() : seg.eval();
  }
  return v;
}

}  // namespace prpr
