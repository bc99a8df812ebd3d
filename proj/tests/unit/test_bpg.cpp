#include "prpr/bpg.hpp"
#include "prpr/measurement.hpp"
#include "prpr/rng.hpp"

#include "../common/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace prpr;

namespace {

Vec random_vec(Rng& r, Index n, double scale) {
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = scale * r.normal();
  return v;
}

SolverConfig quiet(double cf, double lambda) {
  SolverConfig c;
  c.fidelity_scale = cf;
  c.lambda = lambda;
  return c;
}

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.step = 1.0 / c.rel_smooth_l;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.lambda = -1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.fidelity_scale = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("grad_fidelity") {
  Rng r(1);
  const Mat a = sample_gaussian_map(6, 15, 2);
  const Vec truth = random_vec(r, 6, 1.0);
  const Vec ybar = forward_intensity(a, truth);
  CHECK(grad_fidelity(a, ybar, Vec::Zero(6), 1.0).isZero());
  CHECK(grad_fidelity(a, ybar, truth, 1.0).norm() <= 1e-12);
  for (double cf : {0.25, 1.0, 3.75}) {
    for (int k = 0; k < 10; ++k) {
      const Vec x = random_vec(r, 6, 1.0);
      const Vec y = ybar + random_vec(r, 15, 0.1);
      const Vec fd = oracle::central_gradient([&](const Vec& v) { return fidelity(a, y, v, cf); }, x,
                                              1e-5 * (1 + x.norm()));
      const Vec g = grad_fidelity(a, y, x, cf);
      CHECK((fd - g).norm() <= 1e-5 * g.norm());
    }
  }
  CHECK_THROWS_AS(grad_fidelity(a, ybar, Vec::Zero(5), 1.0), std::invalid_argument);
}

TEST_CASE("bregman divergences are nonnegative for the kernel") {
  Rng r(2);
  for (int k = 0; k < 100; ++k) {
    const Vec x = random_vec(r, 5, 2.0), z = random_vec(r, 5, 2.0);
    CHECK(bregman_divergence_entropy(x, z) >= -1e-12);
    CHECK(bregman_divergence_entropy(x, x) == doctest::Approx(0.0));
  }
}

TEST_CASE("relative smoothness on sampled pairs") {
  Rng r(3);
  const Mat a = sample_gaussian_map(8, 40, 4);
  const Vec y = forward_intensity(a, random_vec(r, 8, 1.0));
  const double l = 3.0 + 1e-4;
  for (double cf : {0.25, 1.0}) {
    for (int k = 0; k < 200; ++k) {
      Vec x = random_vec(r, 8, 1.0), z = random_vec(r, 8, 1.0);
      x *= 3.0 * r.uniform() / x.norm();
      z *= 3.0 * r.uniform() / z.norm();
      CHECK(bregman_divergence_fidelity(a, y, x, z, cf) <= l * bregman_divergence_entropy(x, z) + 1e-12);
    }
  }
  CHECK(safe_relative_smoothness(a, y, 1.0) > 0.0);
}

TEST_CASE("bpg_step fixed points") {
  const Mat a = sample_gaussian_map(4, 12, 5);
  Vec truth(4);
  truth << 1, -0.5, 0, 2;
  const Vec y = forward_intensity(a, truth);
  const GaugeSpec g = GaugeSpec::lasso(4);

  SolverState s{truth, 0, {}};
  const SolverState next = bpg_step(s, g, quiet(1.0, 0.0), a, y);
  CHECK((next.x - truth).norm() <= 1e-12);
  CHECK(next.k == 1);

  SolverState zero{Vec::Zero(4), 0, {}};
  CHECK(bpg_step(zero, g, quiet(1.0, 0.1), a, y).x.isZero());
}

TEST_CASE("bpg_step matches a grid minimization of the Bregman model") {
  Rng r(6);
  const Mat a = sample_gaussian_map(2, 6, 7);
  const Vec y = forward_intensity(a, random_vec(r, 2, 1.0));
  const GaugeSpec g = GaugeSpec::lasso(2);
  SolverConfig c = quiet(1.0, 0.3);
  const Vec x = random_vec(r, 2, 1.0);
  const Vec xn = bpg_step(SolverState{x, 0, {}}, g, c, a, y).x;
  // x⁺ minimizes γλR(u) + D_ψ(u, x) + γ⟨∇f(x), u⟩.
  const Vec p = grad_entropy(x) - c.step * grad_fidelity(a, y, x, c.fidelity_scale);
  const double mu = c.step * c.lambda;
  const Vec grid = oracle::grid_argmin_2d(
      [&](double u, double v) {
        const double n2 = u * u + v * v;
        return mu * (std::abs(u) + std::abs(v)) + 0.25 * n2 * n2 + 0.5 * n2 - p[0] * u - p[1] * v;
      },
      -3, 3, 2e-3);
  CHECK((grid - xn).lpNorm<Eigen::Infinity>() <= 4e-3);
}

TEST_CASE("solve from the truth with lambda zero stops immediately") {
  const Mat a = sample_gaussian_map(5, 20, 8);
  Vec truth = Vec::LinSpaced(5, -1, 1);
  truth[2] = 0.3;
  const Vec y = forward_intensity(a, truth);
  SolverConfig c = quiet(1.0, 0.0);
  const SolveResult res = solve(GaugeSpec::lasso(5), c, a, y, Vec(truth), truth);
  CHECK(res.trace.iterations <= 1);
  CHECK(res.trace.reason == Termination::x_change_tol);
  CHECK(dist_to_signclass(res.x, truth) <= 1e-12);
}

TEST_CASE("solve is monotone and recovers an easy sparse instance") {
  const Index n = 20;
  Vec truth = Vec::Zero(n);
  truth[3] = 1.2;
  truth[11] = -0.8;
  const Mat a = sample_gaussian_map(n, 120, 9);
  const Vec y = forward_intensity(a, truth);
  SolverConfig c = quiet(1.0, 1e-8);
  c.max_iters = 20000;
  c.seed = 4;
  const SolveResult res = solve(GaugeSpec::lasso(n), c, a, y, GaussianUnitInit{}, truth);
  CHECK(res.trace.descent_violations == 0);
  for (std::size_t i = 1; i < res.trace.records.size(); ++i) {
    const double f0 = res.trace.records[i - 1].objective;
    CHECK(res.trace.records[i].objective <= f0 + 1e-12 * (1 + std::abs(f0)));
  }
  CHECK(dist_to_signclass(res.x, truth) / truth.norm() <= 1e-4);
  CHECK(res.trace.support_stable_from(2) >= 0);

  std::ostringstream os;
  write_trace_csv(os, res.trace);
  CHECK(os.str().rfind("iter,objective,dist,support_size,x_change\n", 0) == 0);
}

TEST_CASE("solve is reproducible for a fixed seed") {
  const Mat a = sample_gaussian_map(8, 30, 10);
  Vec truth = Vec::Zero(8);
  truth[1] = 1;
  const Vec y = forward_intensity(a, truth);
  SolverConfig c = quiet(1.0, 1e-3);
  c.max_iters = 300;
  c.seed = 77;
  const SolveResult r1 = solve(GaugeSpec::tv_1d(8), c, a, y, GaussianUnitInit{}, truth);
  const SolveResult r2 = solve(GaugeSpec::tv_1d(8), c, a, y, GaussianUnitInit{}, truth);
  CHECK(r1.x == r2.x);
  CHECK(r1.trace.iterations == r2.trace.iterations);
}

TEST_CASE("solve rejects inconsistent shapes") {
  const Mat a = sample_gaussian_map(4, 10, 1);
  const Vec y = Vec::Ones(10);
  CHECK_THROWS_AS(solve(GaugeSpec::lasso(5), SolverConfig{}, a, y, GaussianUnitInit{}, std::nullopt),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve(GaugeSpec::lasso(4), SolverConfig{}, a, Vec::Ones(9), GaussianUnitInit{},
                        std::nullopt),
                  std::invalid_argument);
}
