// Acceptance suite: one PASS/FAIL line per criterion, at full tolerances.
//
// The process exits 0 when every criterion was evaluated, even if some of
// them fail, so a failing criterion is reported rather than hidden behind a
// crashed test. It exits 1 only if the suite itself could not run.

#include "prpr/bpg.hpp"
#include "prpr/csv.hpp"
#include "prpr/gauges.hpp"
#include "prpr/harness.hpp"
#include "prpr/measurement.hpp"
#include "prpr/rng.hpp"
#include "prpr/theory.hpp"

#include "../common/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace prpr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  Outcome outcome;
  double elapsed_s = 0.0;
};

// Descent statistics collected from every solver run in the suite.
struct DescentLedger {
  long runs = 0;
  long violations = 0;
  double worst = 0.0;
  void add(const TrialResult& t) {
    if (t.failed) return;
    ++runs;
    violations += t.descent_violations;
    worst = std::max(worst, t.max_relative_increase);
  }
  void add(const SolverTrace& t) {
    ++runs;
    violations += t.descent_violations;
    worst = std::max(worst, t.max_relative_increase);
  }
} descent;

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Vec normal_vec(Rng& r, Index n, double scale = 1.0) {
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = scale * r.normal();
  return v;
}

double median(std::vector<double> v) {
  for (double& x : v)
    if (std::isnan(x)) x = INFINITY;
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

ExperimentConfig preset_config(const std::string& command, const std::string& name) {
  return resolve_config(command, Json{{"preset", name}}, {});
}

// --- 1 ---------------------------------------------------------------------

// Subgradient residual of u = argmin μR(u) + ½c‖u‖²-type conditions for the
// separable gauges: stationarity where u ≠ 0, and |p| ≤ μ where u = 0.
double closed_form_residual(const GaugeSpec& g, const Vec& p, const Vec& u, double mu, double c) {
  double worst = 0.0;
  const Index bs = g.kind == GaugeKind::lasso ? 1 : g.block_size;
  for (Index b = 0; b < g.n / bs; ++b) {
    const Vec pb = p.segment(b * bs, bs), ub = u.segment(b * bs, bs);
    const double nu = ub.norm();
    if (nu > 0.0) worst = std::max(worst, (c * ub + mu * ub / nu - pb).lpNorm<Eigen::Infinity>());
    else worst = std::max(worst, std::max(0.0, pb.norm() - mu));
  }
  return worst;
}

Vec analysis_adjoint(const GaugeSpec& g, const Vec& w) {
  return g.kind == GaugeKind::tv_1d ? forward_difference_adjoint(w, g.n) : g.frame->synthesis(w);
}
Vec analysis_forward(const GaugeSpec& g, const Vec& u) {
  return g.kind == GaugeKind::tv_1d ? forward_difference(u) : g.frame->analysis(u);
}

Outcome criterion_prox() {
  Rng r(101);
  double euclid = 0.0, gap_ratio = 0.0, foc = 0.0, comp = 0.0, cubic = 0.0;
  int cases = 0;
  for (int kind = 0; kind < 4; ++kind) {
    for (int k = 0; k < 1000; ++k) {
      GaugeSpec g;
      if (kind == 0) {
        g = GaugeSpec::lasso(2 + static_cast<Index>(r.below(63)));
      } else if (kind == 1) {
        const Index bsz = Index{1} << r.below(3);
        g = GaugeSpec::group_lasso(bsz * (1 + static_cast<Index>(r.below(16))), bsz);
      } else if (kind == 2) {
        g = GaugeSpec::tv_1d(2 + static_cast<Index>(r.below(63)));
      } else {
        const int lg = 2 + static_cast<int>(r.below(5));
        const int levels = 1 + static_cast<int>(r.below(static_cast<std::uint64_t>(lg)));
        g = GaugeSpec::analysis_l1(std::make_shared<const FrameDescriptor>(haar_frame(Index{1} << lg, levels)));
      }
      const double scale = std::pow(10.0, -1.0 + 2.0 * r.uniform());
      const Vec p = normal_vec(r, g.n, scale);
      const double mu = scale * std::pow(10.0, -2.0 + 2.5 * r.uniform());
      ++cases;

      if (g.decomposable()) {
        euclid = std::max(euclid, closed_form_residual(g, p, euclidean_prox(g, p, mu), mu, 1.0));
        const Vec u = bregman_prox(g, p, mu);
        foc = std::max(foc, closed_form_residual(g, p, u, mu, 1.0 + u.squaredNorm()));
      } else {
        const DualProxResult d = dual_analysis_prox(g, p, mu);
        gap_ratio = std::max(gap_ratio, d.gap / (1e-8 * (1.0 + std::abs(d.primal))));
        // The solver runs this prox at its inner tolerance.
        GaugeSpec inner = g;
        inner.dual.gap_tol = SolverConfig{}.inner_gap_tol;
        Vec w;
        const Vec u = bregman_prox(inner, p, mu, &w);
        const Vec ku = analysis_forward(g, u);
        foc = std::max(foc, (p - grad_entropy(u) - analysis_adjoint(g, w)).lpNorm<Eigen::Infinity>());
        foc = std::max(foc, std::max(0.0, w.lpNorm<Eigen::Infinity>() - mu));
        comp = std::max(comp, (mu * ku.lpNorm<1>() - w.dot(ku)) /
                                  (1.0 + mu * ku.lpNorm<1>() + u.squaredNorm()));
      }
    }
  }
  for (int k = 0; k < 1000; ++k) {
    const double s = std::pow(10.0, -12.0 + 24.0 * r.uniform());
    const double t = bregman_scale_root(s);
    cubic = std::max(cubic, std::abs(t * t * t * s + t - 1.0));
  }
  Outcome o;
  o.pass = euclid <= 1e-10 && gap_ratio <= 1.0 && foc <= 1e-8 && comp <= 1e-8 && cubic <= 1e-12;
  o.detail = std::to_string(cases) + " prox cases; closed-form residual " + fmt(euclid) +
             ", dual gap / tol " + fmt(gap_ratio) + ", Bregman FOC " + fmt(std::max(foc, comp)) +
             ", cubic residual " + fmt(cubic);
  return o;
}

// --- 2 ---------------------------------------------------------------------

Outcome criterion_grid() {
  Rng r(202);
  const auto frame = std::make_shared<const FrameDescriptor>(haar_frame(2, 1));
  // Analysis operator of the n = 2 Haar frame as an explicit matrix.
  Mat dt(frame->p, 2);
  for (Index j = 0; j < 2; ++j) dt.col(j) = frame->analysis(Vec::Unit(2, j));
  const std::vector<GaugeSpec> gauges{GaugeSpec::lasso(2), GaugeSpec::group_lasso(2, 2),
                                      GaugeSpec::tv_1d(2), GaugeSpec::analysis_l1(frame)};
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const GaugeSpec& g = gauges[static_cast<std::size_t>(k % 4)];
    Vec p(2);
    p << -8 + 16 * r.uniform(), -8 + 16 * r.uniform();
    const double mu = 3 * r.uniform();
    const auto reg = [&](double a, double b) {
      switch (g.kind) {
        case GaugeKind::lasso: return std::abs(a) + std::abs(b);
        case GaugeKind::group_lasso: return std::sqrt(a * a + b * b);
        case GaugeKind::tv_1d: return std::abs(b - a);
        case GaugeKind::analysis_l1: {
          double s = 0;
          for (Index i = 0; i < dt.rows(); ++i) s += std::abs(dt(i, 0) * a + dt(i, 1) * b);
          return s;
        }
      }
      return 0.0;
    };
    const Vec grid = oracle::grid_argmin_2d(
        [&](double a, double b) {
          const double n2 = a * a + b * b;
          return mu * reg(a, b) + 0.25 * n2 * n2 + 0.5 * n2 - p[0] * a - p[1] * b;
        },
        -3.0, 3.0, 1e-3);
    worst = std::max(worst, (grid - bregman_prox(g, p, mu)).lpNorm<Eigen::Infinity>());
  }
  return {worst <= 2e-3, "50 instances over lasso, group, tv, analysis; max |grid - prox| " + fmt(worst)};
}

// --- 3 ---------------------------------------------------------------------

Outcome criterion_gradients() {
  Rng r(303);
  double worst_f = 0.0, worst_e = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Index n = 2 + static_cast<Index>(r.below(30));
    const Index m = 2 + static_cast<Index>(r.below(60));
    const Mat a = sample_gaussian_map(n, m, 1000 + static_cast<std::uint64_t>(k));
    const Vec y = forward_intensity(a, normal_vec(r, n)) + normal_vec(r, m, 0.05);
    const Vec x = normal_vec(r, n, 0.2 + r.uniform());
    const double cf = k % 2 ? 1.0 : 0.25;
    const double h = 1e-5 * (1.0 + x.norm());
    const Vec gf = grad_fidelity(a, y, x, cf);
    const Vec fd = oracle::central_gradient([&](const Vec& v) { return fidelity(a, y, v, cf); }, x, h);
    worst_f = std::max(worst_f, (fd - gf).norm() / gf.norm());
    const Vec ge = grad_entropy(x);
    const Vec fe = oracle::central_gradient([](const Vec& v) { return entropy(v); }, x, h);
    worst_e = std::max(worst_e, (fe - ge).norm() / ge.norm());
  }
  return {worst_f <= 1e-5 && worst_e <= 1e-5,
          "100 points; max rel error fidelity " + fmt(worst_f) + ", entropy " + fmt(worst_e)};
}

// --- 4 ---------------------------------------------------------------------

Outcome criterion_descent() {
  Rng r(404);
  const double l = 3.0 + 1e-4;
  double worst_ratio = 0.0;
  int pairs = 0, bad = 0;
  const std::vector<std::pair<Index, Index>> shapes{{128, 101}, {128, 350}, {128, 621}, {16, 64}};
  for (const auto& [n, m] : shapes) {
    const Mat a = sample_gaussian_map(n, m, 4000 + static_cast<std::uint64_t>(m));
    const Vec y = forward_intensity(a, sparse_signal(n, std::min<Index>(12, n), 7));
    for (double cf : {0.25, 1.0}) {
      for (int k = 0; k < 125; ++k) {
        Vec x = normal_vec(r, n), z = normal_vec(r, n);
        x *= 3.0 * r.uniform() / x.norm();
        z *= 3.0 * r.uniform() / z.norm();
        const double df = bregman_divergence_fidelity(a, y, x, z, cf);
        const double dpsi = bregman_divergence_entropy(x, z);
        ++pairs;
        if (df > l * dpsi + 1e-12 * (1.0 + dpsi)) ++bad;
        worst_ratio = std::max(worst_ratio, df / dpsi);
      }
    }
  }
  Outcome o;
  o.pass = bad == 0 && descent.runs > 0 && descent.violations == 0;
  o.detail = std::to_string(pairs) + " pairs, " + std::to_string(bad) + " with D_f > L D_psi (max ratio " +
             fmt(worst_ratio) + "); " + std::to_string(descent.runs) + " solver runs, " +
             std::to_string(descent.violations) + " descent violations (max rel increase " +
             fmt(descent.worst) + ")";
  return o;
}

// --- 5, 6 ------------------------------------------------------------------

struct RunSummary {
  double median_rel = 0.0;
  int support_by_1500 = 0;
  int successes = 0;
  int trials = 0;
};

RunSummary run_preset(const std::string& name, Index support_size) {
  const RunOutput out = cmd_run(preset_config("run", name));
  RunSummary s;
  std::vector<double> rel;
  for (const auto& t : out.trials) {
    descent.add(t);
    rel.push_back(t.rel_dist);
    if (t.support_stable_from >= 0 && t.support_stable_from < 1500 && t.support_target == support_size)
      ++s.support_by_1500;
    if (!t.failed && t.rel_dist <= 1e-4) ++s.successes;
  }
  s.median_rel = median(rel);
  s.trials = static_cast<int>(out.trials.size());
  return s;
}

Outcome criterion_lasso() {
  const RunSummary s = run_preset("lasso-fig1", 12);
  return {s.median_rel <= 1e-4 && s.support_by_1500 >= 7,
          "median dist/|x| " + fmt(s.median_rel) + " (need <= 1e-4), support 12 stable before iter 1500 in " +
              std::to_string(s.support_by_1500) + "/10 (need >= 7)"};
}

Outcome criterion_group_tv() {
  const RunSummary g = run_preset("glasso-fig3", 16);
  const RunSummary t = run_preset("tv-fig4", 12);
  return {g.median_rel <= 1e-3 && t.median_rel <= 1e-3,
          "group median dist/|x| " + fmt(g.median_rel) + " (" + std::to_string(g.successes) +
              "/10 below 1e-4), tv median " + fmt(t.median_rel) + " (" + std::to_string(t.successes) +
              "/10 below 1e-4); need <= 1e-3"};
}

// --- 7 ---------------------------------------------------------------------

Outcome criterion_stability() {
  bool ok = true;
  std::string detail;
  for (const std::string name : {"stability-lasso", "stability-tv"}) {
    const StabilityOutput out = cmd_stability(preset_config("stability", name));
    for (const auto& row : out.trials)
      for (const auto& t : row) descent.add(t);
    const double slope = out.slope ? *out.slope : NAN;
    ok = ok && slope >= 0.8 && slope <= 1.2;
    detail += (detail.empty() ? "" : ", ") + name + " slope " + fmt(slope) + " (median dist " +
              fmt(out.median_dist.front()) + " .. " + fmt(out.median_dist.back()) + ")";
  }
  return {ok, detail + "; need slope in [0.8, 1.2]"};
}

// --- 8 ---------------------------------------------------------------------

Outcome criterion_certificate() {
  double closed = 0.0;
  {
    Vec x(6);
    x << 2, 0, -0.5, 0, 1.5, -1;
    const GaugeSpec g = GaugeSpec::lasso(6);
    const ModelDescriptor d = model_descriptor(g, x);
    const CertificateReport r = min_norm_certificate(g, Mat::Identity(6, 6), x, d);
    for (Index i = 0; i < 6; ++i) {
      const double q = x[i] != 0 ? 1.0 / std::abs(x[i]) : 0.0;
      closed = std::max({closed, std::abs(r.q[i] - q), std::abs(r.w[i] - d.e_vector[i]),
                         std::abs(r.eta[i] - d.e_vector[i])});
    }
    closed = std::max({closed, std::abs(r.sigma_ws), std::abs(r.lambda_min_t - 0.25)});
    if (!r.ndsc_pass || !r.ri_pass) closed = INFINITY;
  }
  {
    Vec x(6);
    x << 0, 0, 3, 4, 0, 0;
    const GaugeSpec g = GaugeSpec::group_lasso(6, 2);
    const ModelDescriptor d = model_descriptor(g, x);
    const CertificateReport r = min_norm_certificate(g, Mat::Identity(6, 6), x, d);
    for (Index i = 0; i < 6; ++i) {
      const double q = x[i] != 0 ? d.e_vector[i] / x[i] : 0.0;
      closed = std::max({closed, std::abs(r.q[i] - q), std::abs(r.w[i] - d.e_vector[i])});
    }
    if (!r.ndsc_pass) closed = INFINITY;
  }
  const ExperimentConfig cfg = resolve_config(
      "certify",
      Json{{"regularizer", "lasso"}, {"n", 64}, {"s", 4}, {"m_formula", "s"}, {"m_factor", 10.0}, {"trials", 100},
           {"seed", 8}},
      {});
  const CertifyOutput out = cmd_certify(cfg);
  const bool ok = closed <= 1e-8 && out.ndsc_rate >= 0.95 && out.ri_scaled_rate >= 0.9;
  return {ok, "identity closed-form error " + fmt(closed) + "; m=" + std::to_string(out.m) +
                  ", ndsc rate " + fmt(out.ndsc_rate) + " (need >= 0.95), scaled RI rate " +
                  fmt(out.ri_scaled_rate) + " (need >= 0.9)"};
}

// --- 9 ---------------------------------------------------------------------

Outcome criterion_width() {
  std::string detail;
  bool ok = true;
  const auto check = [&](const GaugeSpec& g, const Vec& x, const BoundParams& p, const std::string& label) {
    const WidthEstimate mc = gaussian_width_mc(g, model_descriptor(g, x), 2000, 9000 + p.s);
    const double bound = width_upper_bound(p);
    const bool within = mc.width_sq <= bound + 3.0 * mc.width_sq_stderr;
    ok = ok && within;
    detail += label + " " + fmt(mc.width_sq) + "<=" + fmt(bound) + (within ? "" : " (exceeds)") + "; ";
  };
  for (Index s : {2, 4, 8}) {
    BoundParams p;
    p.kind = BoundKind::lasso;
    p.n = 64;
    p.s = s;
    check(GaugeSpec::lasso(64), sparse_signal(64, s, 90 + static_cast<std::uint64_t>(s)), p,
          "lasso s=" + std::to_string(s));
  }
  for (Index s : {1, 2}) {
    BoundParams p;
    p.kind = BoundKind::group_lasso;
    p.s = s;
    p.block_size = 8;
    p.num_blocks = 8;
    check(GaugeSpec::group_lasso(64, 8), block_sparse_signal(64, 8, s, 95 + static_cast<std::uint64_t>(s)), p,
          "group s=" + std::to_string(s));
  }
  Rng r(909);
  int mismatches = 0, compared = 0;
  for (int m = 1; m <= 12; ++m) {
    for (int k = 0; k < 20; ++k) {
      const Mat a = sample_gaussian_map(6, m, 100u * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(k));
      Vec z = normal_vec(r, 6);
      z /= z.norm();
      const Vec az = a * z;
      ++compared;
      if (half_rows_min_norm(az) != oracle::half_rows_brute(az)) ++mismatches;
    }
  }
  ok = ok && mismatches == 0;
  detail += "smin inner minimum vs subset enumeration: " + std::to_string(mismatches) + "/" +
            std::to_string(compared) + " mismatches";
  return {ok, detail};
}

// --- 10 --------------------------------------------------------------------

Outcome criterion_tiny() {
  const GaugeSpec g = GaugeSpec::lasso(3);
  int agree = 0, recovered = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vec truth = sparse_signal(3, 1, derive_seed(10, {seed, 0}));
    const Mat a = sample_gaussian_map(3, 5, derive_seed(10, {seed, 1}));
    const Vec y = forward_intensity(a, truth);
    const OracleResult orc = oracle_exact_solve(g, a, y);
    bool only_truth = orc.minimizers.size() == 2;
    for (const Vec& v : orc.minimizers) only_truth = only_truth && dist_to_signclass(v, truth) <= 1e-6;
    if (!only_truth) continue;
    ++agree;
    bool hit = false;
    for (std::uint64_t start = 0; start < 5 && !hit; ++start) {
      // Library default c_f: at m = 5, c_f = 1 breaks D_f <= L D_psi for L = 3.
      // Some instances are flat near the truth and need ~250k iterations to
      // meet the x_change test, so the cap is only a safety net here.
      SolverConfig c;
      c.max_iters = 1000000;
      c.seed = derive_seed(10, {seed, 2, start});
      const SolveResult res = solve(g, c, a, y, GaussianUnitInit{}, truth);
      descent.add(res.trace);
      hit = dist_to_signclass(res.x, truth) <= 1e-4;
    }
    recovered += hit;
  }
  return {agree > 0 && recovered == agree,
          "oracle returned {+-x} on " + std::to_string(agree) + "/20 seeds (agreement rate " +
              fmt(agree / 20.0) + "); BPG reached dist <= 1e-4 on " + std::to_string(recovered) + "/" +
              std::to_string(agree) + " of those"};
}

// --- 11 --------------------------------------------------------------------

Outcome criterion_concentration() {
  const std::vector<Index> inj_grid{100, 200, 400, 800, 1600};
  // Scale where m = 50 d ln m for d = 8.
  double m_star = 1000;
  for (int k = 0; k < 50; ++k) m_star = 400.0 * std::log(m_star);
  const std::vector<Index> hess_grid{200, 400, 800, 1600, static_cast<Index>(std::ceil(m_star))};

  const auto sweep = [](ConcentrationKind kind, const std::vector<Index>& grid, Index dim, int trials) {
    std::vector<double> ms, fr;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ConcentrationParams p;
      p.m = grid[i];
      p.dim = dim;
      p.delta = 1.0;
      p.rho = 0.5;
      ms.push_back(static_cast<double>(grid[i]));
      fr.push_back(concentration_check(kind, p, trials, derive_seed(11, {static_cast<std::uint64_t>(kind), i})));
    }
    return std::make_pair(ms, fr);
  };
  const auto [im, inj] = sweep(ConcentrationKind::inj, inj_grid, 20, 200);
  const auto [lm, inj_log] = sweep(ConcentrationKind::inj_log, inj_grid, 20, 200);
  const auto [hm, hess] = sweep(ConcentrationKind::hess, hess_grid, 8, 100);
  const double rho_inj = spearman(im, inj), rho_hess = spearman(hm, hess);
  const double min_inj = *std::min_element(inj.begin(), inj.end());
  const bool ok = min_inj >= 0.55 && rho_inj > 0 && hess.back() >= 0.9 && rho_hess > 0;
  std::string detail = "inj pass";
  for (double f : inj) detail += " " + fmt(f);
  detail += " (need >= 0.55), spearman " + fmt(rho_inj) + "; hess pass";
  for (double f : hess) detail += " " + fmt(f);
  detail += " (need >= 0.9 at m=" + std::to_string(hess_grid.back()) + "), spearman " + fmt(rho_hess) +
            "; log-scaled inj pass";
  for (double f : inj_log) detail += " " + fmt(f);
  return {ok, detail};
}

// --- 12 --------------------------------------------------------------------

std::string file_body(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return strip_timestamp(ss.str());
}

Outcome criterion_reproducibility() {
  const fs::path root = fs::temp_directory_path() / ("prpr_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> jobs{
      {"run", "--set preset=tv-fig4 --set n=32 --set s=3 --set trials=3 --set max_iters=2000"},
      {"stability", "--set preset=stability-lasso --set n=24 --set s=2 --set m=80 --set trials=2 "
                    "--set max_iters=1500 --set sigma_count=3"},
      {"phase-diagram", "--set regularizer=lasso --set n=16 --set fidelity_scale=1 --set max_iters=1500 "
                        "--set trials=3 --set 'm_grid=[8,32,64]' --set 's_grid=[1,2]'"},
      {"certify", "--set regularizer=group_lasso --set n=32 --set block_size=4 --set s=2 --set m=120 "
                  "--set trials=10"},
      {"bounds", "--set 'bound_rows=[{\"kind\":\"lasso\",\"n\":64,\"s\":4},{\"kind\":\"tv\",\"n\":128,"
                 "\"s\":4,\"delta\":0.5}]' --set width_samples=300"},
      {"concentration", "--set trials=40 --set 'conc_m_grid=[50,100,200]'"}};
  int compared = 0, differing = 0, errors = 0;
  std::string first_diff;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    fs::path dirs[2];
    for (int rep = 0; rep < 2; ++rep) {
      dirs[rep] = root / (jobs[j].first + "_" + std::to_string(rep));
      fs::create_directories(dirs[rep]);
      // Different thread counts must not change any output byte.
      const std::string cmd = std::string("PRPR_THREADS=") + (rep ? "3" : "1") + " '" PRPR_CLI_PATH "' " +
                              jobs[j].first + " --seed 12 " + jobs[j].second + " --out '" +
                              dirs[rep].string() + "' > '" + (dirs[rep] / "stdout.txt").string() + "' 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        ++errors;
        if (first_diff.empty()) first_diff = jobs[j].first + " exited nonzero";
      }
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const fs::path other = dirs[1] / entry.path().filename();
      ++compared;
      if (!fs::exists(other) || file_body(entry.path()) != file_body(other)) {
        ++differing;
        if (first_diff.empty()) first_diff = entry.path().filename().string();
      }
    }
  }
  fs::remove_all(root);
  return {errors == 0 && differing == 0 && compared > 0,
          std::to_string(jobs.size()) + " commands run twice (1 and 3 threads), " + std::to_string(compared) +
              " files compared, " + std::to_string(differing) + " differ" +
              (first_diff.empty() ? "" : " (first: " + first_diff + ")")};
}

}  // namespace

int main() {
  std::vector<Criterion> crit{{1, "prox correctness", 10},
                              {2, "Bregman prox vs grid oracle", 30},
                              {3, "gradient checks", 5},
                              {4, "monotone descent and relative smoothness", 60},
                              {5, "lasso preset reproduction", 120},
                              {6, "group lasso and TV presets", 300},
                              {7, "stability slope", 600},
                              {8, "certificate suite", 60},
                              {9, "width machinery", 60},
                              {10, "tiny-instance exact recovery oracle", 60},
                              {11, "concentration checks", 60},
                              {12, "reproducibility", 600}};
  const std::map<int, Outcome (*)()> fns{{1, criterion_prox},        {2, criterion_grid},
                                         {3, criterion_gradients},   {4, criterion_descent},
                                         {5, criterion_lasso},       {6, criterion_group_tv},
                                         {7, criterion_stability},   {8, criterion_certificate},
                                         {9, criterion_width},       {10, criterion_tiny},
                                         {11, criterion_concentration}, {12, criterion_reproducibility}};
  // Criterion 4 audits the solver runs of 5, 6, 7 and 10, so it runs last.
  const std::vector<int> order{1, 2, 3, 5, 6, 7, 8, 9, 10, 11, 12, 4};
  try {
    for (int id : order) {
      Criterion& c = crit[static_cast<std::size_t>(id - 1)];
      std::cerr << "running criterion " << id << " (" << c.name << ")" << std::endl;
      const auto t0 = std::chrono::steady_clock::now();
      c.outcome = fns.at(id)();
      c.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  } catch (const std::exception& e) {
    std::cerr << "acceptance suite aborted: " << e.what() << '\n';
    return 1;
  }
  int passed = 0;
  for (const auto& c : crit) {
    const bool in_time = c.elapsed_s <= c.limit_s;
    const bool ok = c.outcome.pass && in_time;
    passed += ok;
    std::printf("criterion %2d %s  %s: %s [%.1f s, limit %.0f s%s]\n", c.id, ok ? "PASS" : "FAIL",
                c.name.c_str(), c.outcome.detail.c_str(), c.elapsed_s, c.limit_s,
                in_time ? "" : ", over time");
  }
  std::printf("acceptance: %d/%zu criteria passed\n", passed, crit.size());
  return 0;
}
