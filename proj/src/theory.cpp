#include "prpr/theory.hpp"

#include "prpr/csv.hpp"
#include "prpr/measurement.hpp"
#include "prpr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace prpr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Mat select_columns(const Mat& a, const IndexSet& cols) {
  Mat out(a.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = a.col(cols[j]);
  return out;
}

Vec select(const Vec& v, const IndexSet& idx) {
  Vec out(static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out[static_cast<Index>(j)] = v[idx[j]];
  return out;
}

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Mat>(a).singularValues()[0];
}

double min_eigenvalue(const Mat& sym) {
  if (sym.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

Vec standard_normal(Rng& rng, Index n) {
  Vec z(n);
  for (Index i = 0; i < n; ++i) z[i] = rng.normal();
  return z;
}

void require_decomposable(const GaugeSpec& g, const char* where) {
  if (!g.decomposable())
    throw UnsupportedForKind(std::string(where) + " supports lasso and group_lasso only, got " +
                             to_string(g.kind));
}

}  // namespace

LinearizedMap linearized_map(const Mat& a, const Vec& truth, IndexSet t_indices) {
  if (a.cols() != truth.size())
    throw std::invalid_argument("linearized_map: A has " + std::to_string(a.cols()) +
                                " columns but x has length " + std::to_string(truth.size()));
  LinearizedMap map;
  map.b_matrix = (a * truth).asDiagonal() * a;
  map.t_indices = std::move(t_indices);
  return map;
}

double restricted_injectivity(const Mat& b, const IndexSet& t_indices) {
  if (t_indices.empty()) return 0.0;
  const Mat bt = select_columns(b, t_indices);
  if (bt.rows() < bt.cols()) return 0.0;
  return std::max(0.0, min_eigenvalue(bt.transpose() * bt));
}

CertificateReport min_norm_certificate(const GaugeSpec& g, const Mat& a, const Vec& truth,
                                       const ModelDescriptor& desc,
                                       const CertificateOptions& opt) {
  require_decomposable(g, "min_norm_certificate");
  if (a.cols() != g.n || truth.size() != g.n)
    throw std::invalid_argument("min_norm_certificate: dimension mismatch");
  if (desc.t_indices.empty())
    throw std::invalid_argument("min_norm_certificate: empty model subspace (x = 0)");

  const Index m = a.rows();
  const Index n = g.n;
  const Mat b = linearized_map(a, truth).b_matrix;
  const Mat bt = select_columns(b, desc.t_indices);
  const Mat gram = bt.transpose() * bt;
  const Vec e_t = select(desc.e_vector, desc.t_indices);

  CertificateReport r;
  r.eta = Vec::Zero(m);
  r.q = Vec::Zero(m);
  r.w = Vec::Zero(n);
  r.lambda_min_t = restricted_injectivity(b, desc.t_indices);
  r.ri_tol = opt.ri_tol_rel * std::max(gram.trace(), std::numeric_limits<double>::min());
  r.ri_pass = r.lambda_min_t > r.ri_tol;
  r.sigma_ws = kNaN;
  r.b_t_pinv_norm = r.lambda_min_t > 0.0 ? 1.0 / std::sqrt(r.lambda_min_t)
                                         : std::numeric_limits<double>::infinity();
  if (!r.ri_pass) return r;

  const Eigen::LDLT<Mat> ldlt(gram);
  const Vec coef = ldlt.solve(e_t);
  r.q = bt * coef;
  r.w = b.transpose() * r.q;

  // η uses A_T x̄, which equals A x̄ because x̄ ∈ T.
  const Mat at = select_columns(a, desc.t_indices);
  const Vec weights = (at * select(truth, desc.t_indices)).array().square().matrix();
  const Mat weighted_gram = at.transpose() * weights.asDiagonal() * at;
  r.eta = weights.asDiagonal() * (at * Eigen::LDLT<Mat>(weighted_gram).solve(e_t));

  r.q_norm = r.q.norm();
  r.eta_norm = r.eta.norm();
  r.interpolation_error = (select(r.w, desc.t_indices) - e_t).norm();
  r.eta_consistency = (a.transpose() * r.eta - r.w).norm();
  r.sigma_ws = polar_on_complement(g, r.w, desc);
  r.ndsc_pass = r.sigma_ws < 1.0 - opt.ndsc_margin;
  return r;
}

double half_rows_min_norm(const Vec& az) {
  std::vector<double> sq(static_cast<std::size_t>(az.size()));
  for (Index r = 0; r < az.size(); ++r) sq[static_cast<std::size_t>(r)] = az[r] * az[r];
  const std::size_t keep = (sq.size() + 1) / 2;
  std::partial_sort(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(keep), sq.end());
  double total = 0.0;
  for (std::size_t i = 0; i < keep; ++i) total += sq[i];
  return std::sqrt(total);
}

SminEstimate smin_mc(const GaugeSpec& g, const Mat& a, const Vec& truth,
                     const ModelDescriptor& desc, int n_samples, std::uint64_t seed,
                     int max_draws) {
  require_decomposable(g, "smin_mc");
  if (n_samples < 1) throw std::invalid_argument("smin_mc: n_samples must be >= 1");
  if (a.cols() != g.n || truth.size() != g.n)
    throw std::invalid_argument("smin_mc: dimension mismatch");
  if (max_draws <= 0) max_draws = 1000 * n_samples;

  const auto in_t = desc.t_mask(g.n);
  const double r0 = gauge_value(g, truth);
  const double tau = 1e-6 * std::max(truth.norm(), 1.0);
  Rng rng(seed, 0x5171);

  SminEstimate est;
  est.value = std::numeric_limits<double>::infinity();
  while (est.accepted < n_samples && est.draws < max_draws) {
    ++est.draws;
    Vec z = standard_normal(rng, g.n);
    const double beta = rng.uniform();
    for (Index i = 0; i < g.n; ++i)
      if (!in_t[static_cast<std::size_t>(i)]) z[i] *= beta;
    const double nz = z.norm();
    if (nz == 0.0) continue;
    z /= nz;
    if (gauge_value(g, truth + tau * z) > r0) continue;
    ++est.accepted;
    est.value = std::min(est.value, half_rows_min_norm(a * z));
  }
  if (est.accepted == 0)
    throw std::runtime_error("smin_mc: no descent direction accepted in " +
                             std::to_string(est.draws) + " draws");
  return est;
}

double dist_sq_to_normal_cone(const GaugeSpec& g, const ModelDescriptor& desc, const Vec& z,
                              double tol) {
  const auto phi = [&](double t) { return (z - project_scaled_subdiff(g, desc, z, t)).squaredNorm(); };
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0;
  double hi = 10.0 * z.norm();
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = phi(x1);
  double f2 = phi(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = phi(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = phi(x2);
    }
  }
  return std::min({f1, f2, phi(0.5 * (lo + hi))});
}

WidthEstimate gaussian_width_mc(const GaugeSpec& g, const ModelDescriptor& desc, int n_samples,
                                std::uint64_t seed) {
  require_decomposable(g, "gaussian_width_mc");
  if (n_samples < 1) throw std::invalid_argument("gaussian_width_mc: n_samples must be >= 1");
  Rng rng(seed, 0x3d7);
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    const double d = dist_sq_to_normal_cone(g, desc, standard_normal(rng, g.n));
    sum += d;
    sum_sq += d * d;
  }
  WidthEstimate w;
  w.samples = n_samples;
  w.width_sq = sum / n_samples;
  if (n_samples > 1) {
    const double var = std::max(0.0, (sum_sq - n_samples * w.width_sq * w.width_sq) / (n_samples - 1));
    w.width_sq_stderr = std::sqrt(var / n_samples);
  }
  w.estimate = std::sqrt(w.width_sq);
  w.std_error = w.estimate > 0.0 ? w.width_sq_stderr / (2.0 * w.estimate) : 0.0;
  return w;
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::lasso: return "lasso";
    case BoundKind::group_lasso: return "group_lasso";
    case BoundKind::analysis_group_lasso: return "analysis_group_lasso";
    case BoundKind::tv: return "tv";
  }
  return "unknown";
}

BoundKind bound_kind_from_string(const std::string& name) {
  if (name == "lasso") return BoundKind::lasso;
  if (name == "group_lasso" || name == "glasso") return BoundKind::group_lasso;
  if (name == "analysis_group_lasso") return BoundKind::analysis_group_lasso;
  if (name == "tv" || name == "tv_1d") return BoundKind::tv;
  throw std::invalid_argument("unknown bound kind '" + name + "'");
}

double width_upper_bound(const BoundParams& p) {
  const double s = static_cast<double>(p.s);
  switch (p.kind) {
    case BoundKind::lasso: {
      if (p.s < 0 || p.s >= p.n)
        throw PreconditionViolation("lasso width bound needs 0 <= s < n (s=" +
                                    std::to_string(p.s) + ", n=" + std::to_string(p.n) + ")");
      const double root = std::sqrt(2.0 * std::log(static_cast<double>(p.n - p.s))) + 1.0;
      return s * (root * root + 1.0);
    }
    case BoundKind::group_lasso:
    case BoundKind::analysis_group_lasso: {
      if (p.block_size < 1) throw PreconditionViolation("group width bound needs B >= 1");
      if (p.s < 0 || p.s >= p.num_blocks)
        throw PreconditionViolation("group width bound needs 0 <= s < L (s=" +
                                    std::to_string(p.s) + ", L=" + std::to_string(p.num_blocks) +
                                    ")");
      const double bsz = static_cast<double>(p.block_size);
      const double root =
          std::sqrt(2.0 * std::log(static_cast<double>(p.num_blocks - p.s))) + std::sqrt(bsz);
      return s * (root * root + bsz);
    }
    case BoundKind::tv: {
      if (p.n < 2 || p.s < 0) throw PreconditionViolation("tv width bound needs n >= 2, s >= 0");
      const double min_delta = 8.0 * s / static_cast<double>(p.n);
      if (!(p.delta >= min_delta) || !(p.delta > 0.0))
        throw PreconditionViolation("tv width bound needs delta >= 8s/n = " +
                                    std::to_string(min_delta) + " (delta=" +
                                    std::to_string(p.delta) + ")");
      const double ln = std::log(static_cast<double>(p.n));
      return p.c_tv / p.delta * s * ln * ln;
    }
  }
  return 0.0;
}

double nu_constant() { return std::sqrt(M_PI / 2.0) / 18.0; }

double sample_prefactor(double t) {
  const double nu = nu_constant();
  return 64.0 * (1.0 + t) * (nu + 2.0) * (nu + 2.0) / (nu * nu * nu * nu);
}

BoundReport sample_bound(const BoundParams& p, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("sample_bound: t must be > 0");
  BoundReport r;
  r.params = p;
  r.t = t;
  r.nu = nu_constant();
  r.prefactor = sample_prefactor(t);
  r.width_bound = width_upper_bound(p);
  r.required_m = std::max(1LL, static_cast<long long>(std::ceil(r.prefactor * r.width_bound)));
  switch (p.kind) {
    case BoundKind::lasso: r.formula = "s((sqrt(2ln(n-s))+1)^2+1)"; break;
    case BoundKind::group_lasso:
    case BoundKind::analysis_group_lasso: r.formula = "s((sqrt(2ln(L-s))+sqrt(B))^2+B)"; break;
    case BoundKind::tv: r.formula = "(C/delta)s ln(n)^2"; break;
  }
  return r;
}

RateConstants rate_constant_lasso(const GaugeSpec& g, const Mat& a, const Vec& truth,
                                  const ModelDescriptor& desc, const CertificateReport& report,
                                  const RateParams& p) {
  require_decomposable(g, "rate_constant_lasso");
  if (!(p.kappa > 0.0 && p.kappa < 1.0))
    throw std::invalid_argument("rate_constant_lasso: kappa must lie in (0,1)");
  if (!(p.rho > 0.0 && p.rho < 1.0))
    throw std::invalid_argument("rate_constant_lasso: rho must lie in (0,1)");
  if (!(p.c > 0.0)) throw std::invalid_argument("rate_constant_lasso: c must be > 0");
  if (!report.ndsc_pass)
    throw std::invalid_argument("rate_constant_lasso: certificate does not satisfy NDSC");

  const double m = static_cast<double>(a.rows());
  const double n = static_cast<double>(g.n);
  const double xn = truth.norm();
  const double c = p.c;
  RateConstants out;

  // Closed form with concentration estimates substituted.
  const double s = g.kind == GaugeKind::lasso ? static_cast<double>(desc.t_dim)
                                              : static_cast<double>(desc.active_blocks.size());
  const double pinv_est = std::sqrt(m) / ((1.0 - p.rho) * xn);
  const double q_est = std::sqrt(s * m) / ((1.0 - p.rho) * xn);
  double col_est;
  if (g.kind == GaugeKind::lasso) {
    col_est = 1.0 + std::sqrt(2.0 * p.t * std::log(n) / m);
  } else {
    const double blocks = static_cast<double>(g.num_blocks());
    col_est = 1.0 + std::sqrt(static_cast<double>(g.block_size) / m) +
              std::sqrt(2.0 * p.t * std::log(blocks) / m);
  }
  const double half = 2.0 + 0.5 * c * q_est;
  out.literal = 2.0 * pinv_est * (2.0 + c * q_est) +
                (1.0 + (1.0 + p.delta) / (1.0 - p.rho) * col_est) / (1.0 - p.kappa) * half * half /
                    (2.0 * c);

  // Measured quantities.
  const auto in_t = desc.t_mask(g.n);
  double max_col = 0.0;
  if (g.kind == GaugeKind::lasso) {
    for (Index i = 0; i < g.n; ++i)
      if (!in_t[static_cast<std::size_t>(i)]) max_col = std::max(max_col, a.col(i).norm());
  } else {
    const Index bs = g.block_size;
    for (Index b = 0; b < g.num_blocks(); ++b)
      if (!in_t[static_cast<std::size_t>(b * bs)])
        max_col = std::max(max_col, spectral_norm(a.middleCols(b * bs, bs)));
  }
  const double ax_inf = (a * truth).lpNorm<Eigen::Infinity>();
  const double pinv = report.b_t_pinv_norm;
  const double qn = report.q_norm;
  out.alpha = (1.0 + pinv * ax_inf * max_col) / (1.0 - report.sigma_ws);
  const double a_op = spectral_norm(a);
  out.a_coef = 0.5 * a_op * a_op * (3.0 * pinv + out.alpha * qn);
  const double h = 2.0 + 0.5 * c * qn;
  out.b_coef = pinv * (2.0 + c * qn) + out.alpha * h * h / (2.0 * c);
  out.empirical_2b = 2.0 * out.b_coef;
  out.sigma_max = 1.0 / (4.0 * out.a_coef * out.b_coef);
  return out;
}

std::string to_string(ConcentrationKind kind) {
  switch (kind) {
    case ConcentrationKind::inj: return "inj";
    case ConcentrationKind::inj_log: return "inj_log";
    case ConcentrationKind::hess: return "hess";
  }
  return "unknown";
}

ConcentrationKind concentration_kind_from_string(const std::string& name) {
  if (name == "inj") return ConcentrationKind::inj;
  if (name == "inj_log") return ConcentrationKind::inj_log;
  if (name == "hess") return ConcentrationKind::hess;
  throw std::invalid_argument("unknown concentration kind '" + name + "' (inj, inj_log, hess)");
}

double concentration_check(ConcentrationKind kind, const ConcentrationParams& p, int trials,
                           std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("concentration_check: trials must be >= 1");
  if (p.m < 1 || p.dim < 1) throw std::invalid_argument("concentration_check: m, dim must be >= 1");
  const double m = static_cast<double>(p.m);
  int pass = 0;
  for (int k = 0; k < trials; ++k) {
    const auto idx = static_cast<std::uint64_t>(k);
    const Mat a = sample_gaussian_map(p.dim, p.m, derive_seed(seed, {idx, 0}));
    Rng rng(derive_seed(seed, {idx, 1}));
    const Vec x = standard_normal(rng, p.dim);
    bool ok = false;
    switch (kind) {
      case ConcentrationKind::inj:
        ok = (a * x).lpNorm<Eigen::Infinity>() <= (1.0 + p.delta) / std::sqrt(m) * x.norm();
        break;
      case ConcentrationKind::inj_log:
        ok = (a * x).lpNorm<Eigen::Infinity>() <=
             std::sqrt((1.0 + p.delta) * 2.0 * std::log(m) / m) * x.norm();
        break;
      case ConcentrationKind::hess: {
        const Vec w = (a * x).array().square().matrix();
        const Mat dev = m * (a.transpose() * w.asDiagonal() * a) -
                        (2.0 * x * x.transpose() +
                         x.squaredNorm() * Mat::Identity(p.dim, p.dim));
        Eigen::SelfAdjointEigenSolver<Mat> es(dev, Eigen::EigenvaluesOnly);
        const double nrm = es.eigenvalues().cwiseAbs().maxCoeff();
        ok = nrm <= p.rho * x.squaredNorm();
        break;
      }
    }
    pass += ok ? 1 : 0;
  }
  return static_cast<double>(pass) / trials;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("spearman: need two sequences of equal length >= 2");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return kNaN;
  return sxy / std::sqrt(sxx * syy);
}

OracleResult oracle_exact_solve(const GaugeSpec& g, const Mat& a, const Vec& y, int cap) {
  if (g.kind != GaugeKind::lasso)
    throw UnsupportedForKind("oracle_exact_solve supports lasso only, got " + to_string(g.kind));
  const Index m = a.rows();
  const Index n = a.cols();
  if (n != g.n || y.size() != m) throw std::invalid_argument("oracle_exact_solve: dimension mismatch");
  if (m > cap || m > 30)
    throw std::invalid_argument("oracle_exact_solve: m=" + std::to_string(m) +
                                " exceeds the enumeration cap " + std::to_string(cap));
  if (m < 1) throw std::invalid_argument("oracle_exact_solve: m must be >= 1");
  if (y.minCoeff() < 0.0) throw std::invalid_argument("oracle_exact_solve: y must be nonnegative");

  const Vec amp = y.cwiseSqrt();
  std::vector<IndexSet> bases;
  const bool overdetermined = m >= n;
  Eigen::ColPivHouseholderQR<Mat> qr;
  if (overdetermined) {
    qr.compute(a);
  } else {
    // All column subsets of size m.
    double count = 1.0;
    for (Index k = 0; k < m; ++k) count = count * static_cast<double>(n - k) / static_cast<double>(k + 1);
    if (count * std::ldexp(1.0, static_cast<int>(m) - 1) > 5e7)
      throw std::invalid_argument("oracle_exact_solve: instance too large to enumerate");
    std::vector<bool> pick(static_cast<std::size_t>(n), false);
    std::fill(pick.begin(), pick.begin() + m, true);
    do {
      IndexSet s;
      for (Index i = 0; i < n; ++i)
        if (pick[static_cast<std::size_t>(i)]) s.push_back(i);
      bases.push_back(std::move(s));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  std::vector<Eigen::FullPivLU<Mat>> lus;
  for (const auto& s : bases) lus.emplace_back(select_columns(a, s));

  std::vector<Vec> candidates;
  std::vector<double> values;
  OracleResult res;
  // ε and −ε give ±x; fix the first sign and negate afterwards.
  const std::uint64_t patterns = std::uint64_t{1} << (m - 1);
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    Vec b = amp;
    for (Index r = 1; r < m; ++r)
      if ((mask >> (r - 1)) & 1U) b[r] = -b[r];
    const double feas_tol = 1e-8 * (1.0 + b.norm());
    bool any = false;
    if (overdetermined) {
      const Vec x = qr.solve(b);
      if ((a * x - b).norm() <= feas_tol) {
        candidates.push_back(x);
        values.push_back(x.lpNorm<1>());
        any = true;
      }
    } else {
      std::vector<std::pair<double, Vec>> vertices;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < bases.size(); ++k) {
        if (lus[k].rank() < m) continue;
        const Vec xs = lus[k].solve(b);
        Vec x = Vec::Zero(n);
        for (std::size_t j = 0; j < bases[k].size(); ++j) x[bases[k][j]] = xs[static_cast<Index>(j)];
        best = std::min(best, xs.lpNorm<1>());
        vertices.emplace_back(xs.lpNorm<1>(), std::move(x));
      }
      for (auto& [v, x] : vertices) {
        if (v > best + 1e-9 * (1.0 + best)) continue;
        candidates.push_back(std::move(x));
        values.push_back(v);
        any = true;
      }
    }
    if (any) res.feasible_patterns += 2;
  }
  if (candidates.empty()) {
    res.min_value = kNaN;
    return res;
  }
  res.min_value = *std::min_element(values.begin(), values.end());
  const double tie = 1e-9 * (1.0 + res.min_value);
  const auto push_unique = [&](const Vec& x) {
    for (const auto& z : res.minimizers)
      if ((z - x).norm() <= 1e-9 * (1.0 + x.norm())) return;
    res.minimizers.push_back(x);
  };
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (values[k] > res.min_value + tie) continue;
    push_unique(candidates[k]);
    push_unique(-candidates[k]);
  }
  return res;
}

std::string to_key_value(const CertificateReport& r) {
  std::ostringstream os;
  os << "sigma_ws=" << format_double(r.sigma_ws) << '\n'
     << "lambda_min_T=" << format_double(r.lambda_min_t) << '\n'
     << "ri_tol=" << format_double(r.ri_tol) << '\n'
     << "q_norm=" << format_double(r.q_norm) << '\n'
     << "eta_norm=" << format_double(r.eta_norm) << '\n'
     << "b_t_pinv_norm=" << format_double(r.b_t_pinv_norm) << '\n'
     << "interpolation_error=" << format_double(r.interpolation_error) << '\n'
     << "eta_consistency=" << format_double(r.eta_consistency) << '\n'
     << "ndsc_pass=" << (r.ndsc_pass ? "true" : "false") << '\n'
     << "ri_pass=" << (r.ri_pass ? "true" : "false") << '\n';
  return os.str();
}

std::string to_key_value(const BoundReport& r) {
  std::ostringstream os;
  os << "kind=" << to_string(r.params.kind) << '\n'
     << "n=" << r.params.n << '\n'
     << "s=" << r.params.s << '\n'
     << "B=" << r.params.block_size << '\n'
     << "L=" << r.params.num_blocks << '\n'
     << "delta=" << format_double(r.params.delta) << '\n'
     << "t=" << format_double(r.t) << '\n'
     << "nu=" << format_double(r.nu) << '\n'
     << "prefactor=" << format_double(r.prefactor) << '\n'
     << "width_bound=" << format_double(r.width_bound) << '\n'
     << "required_m=" << r.required_m << '\n'
     << "formula=" << r.formula << '\n';
  return os.str();
}

std::vector<std::string> certificate_columns() {
  return {"sigma_ws", "lambda_min_T", "q_norm", "eta_norm", "ndsc_pass", "ri_pass",
          "interpolation_error", "eta_consistency"};
}

std::vector<std::string> certificate_row(const CertificateReport& r) {
  return {format_double(r.sigma_ws),
          format_double(r.lambda_min_t),
          format_double(r.q_norm),
          format_double(r.eta_norm),
          r.ndsc_pass ? "1" : "0",
          r.ri_pass ? "1" : "0",
          format_double(r.interpolation_error),
          format_double(r.eta_consistency)};
}

std::vector<std::string> bound_columns() {
  return {"kind", "n", "s", "B", "L", "delta", "t", "nu", "prefactor", "width_bound",
          "required_m", "formula"};
}

std::vector<std::string> bound_row(const BoundReport& r) {
  return {to_string(r.params.kind),
          std::to_string(r.params.n),
          std::to_string(r.params.s),
          std::to_string(r.params.block_size),
          std::to_string(r.params.num_blocks),
          format_double(r.params.delta),
          format_double(r.t),
          format_double(r.nu),
          format_double(r.prefactor),
          format_double(r.width_bound),
          std::to_string(r.required_m),
          r.formula};
}

}  // namespace prpr
