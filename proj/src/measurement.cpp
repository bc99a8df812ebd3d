#include "prpr/measurement.hpp"

#include "prpr/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace prpr {

Mat sample_gaussian_map(Index n, Index m, std::uint64_t seed) {
  if (n < 1 || m < 1)
    throw std::invalid_argument("sample_gaussian_map: dimensions must be positive (n=" +
                                std::to_string(n) + ", m=" + std::to_string(m) + ")");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Mat a(m, n);
  for (Index r = 0; r < m; ++r)
    for (Index c = 0; c < n; ++c) a(r, c) = scale * rng.normal();
  return a;
}

Vec forward_intensity(const Mat& a, const Vec& x) {
  if (a.cols() != x.size())
    throw std::invalid_argument("forward_intensity: A has " + std::to_string(a.cols()) +
                                " columns but x has length " + std::to_string(x.size()));
  return (a * x).array().square().matrix();
}

SensingEnsemble make_ensemble(Mat a, Vec ground_truth, std::uint64_t seed) {
  Vec y = forward_intensity(a, ground_truth);
  return SensingEnsemble{std::move(a), std::move(ground_truth), std::move(y), seed};
}

Observation make_observation(const Vec& clean, const NoiseModel& noise, std::uint64_t seed) {
  struct Visitor {
    const Vec& clean;
    std::uint64_t seed;
    Observation operator()(const NoNoise&) const { return {clean, 0.0}; }
    Observation operator()(const GaussianNoise& g) const {
      if (!(g.sigma_entry >= 0.0))
        throw std::invalid_argument("make_observation: noise standard deviation must be >= 0");
      Rng rng(seed, 1);
      Vec eps(clean.size());
      for (Index r = 0; r < eps.size(); ++r) eps[r] = g.sigma_entry * rng.normal();
      return {clean + eps, eps.norm()};
    }
    Observation operator()(const FixedNoise& f) const {
      if (f.epsilon.size() != clean.size())
        throw std::invalid_argument("make_observation: noise vector length mismatch");
      return {clean + f.epsilon, f.epsilon.norm()};
    }
  };
  return std::visit(Visitor{clean, seed}, noise);
}

double dist_to_signclass(const Vec& x, const Vec& truth) {
  if (x.size() != truth.size())
    throw std::invalid_argument("dist_to_signclass: length mismatch");
  return std::min((x - truth).norm(), (x + truth).norm());
}

double snr(const Vec& truth, const Mat& a, double noise_norm) {
  if (noise_norm < 0.0) throw std::invalid_argument("snr: noise norm must be >= 0");
  const double num = (a * truth).array().pow(4).sum();
  if (noise_norm == 0.0) return std::numeric_limits<double>::infinity();
  return num / (noise_norm * noise_norm);
}

}  // namespace prpr
