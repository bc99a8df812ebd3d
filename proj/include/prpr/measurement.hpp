#pragma once

#include "prpr/types.hpp"

#include <cstdint>
#include <variant>

namespace prpr {

/// The physical model: Gaussian sensing matrix, truth and noiseless
/// intensities |A x̄|².
struct SensingEnsemble {
  Mat a_matrix;           // m × n, entries N(0, 1/m)
  Vec ground_truth;       // n
  Vec clean_intensities;  // m
  std::uint64_t seed = 0;

  [[nodiscard]] Index n() const { return a_matrix.cols(); }
  [[nodiscard]] Index m() const { return a_matrix.rows(); }
};

struct Observation {
  Vec intensities;
  double noise_norm = 0.0;  // ‖ε‖
};

struct NoNoise {};
struct GaussianNoise {
  double sigma_entry;  // per-entry standard deviation
};
struct FixedNoise {
  Vec epsilon;
};
using NoiseModel = std::variant<NoNoise, GaussianNoise, FixedNoise>;

/// m × n matrix with iid N(0, 1/m) entries. Entries are drawn in row-major
/// order from Rng(seed), so the result depends only on (n, m, seed).
Mat sample_gaussian_map(Index n, Index m, std::uint64_t seed);

/// result[r] = ⟨a_r, x⟩².
Vec forward_intensity(const Mat& a, const Vec& x);

SensingEnsemble make_ensemble(Mat a, Vec ground_truth, std::uint64_t seed = 0);

/// Additive noise on intensities.
Observation make_observation(const Vec& clean, const NoiseModel& noise, std::uint64_t seed);

/// min(‖x − x̄‖, ‖x + x̄‖).
double dist_to_signclass(const Vec& x, const Vec& truth);

/// ‖A x̄‖₄⁴ / σ². Returns +infinity when σ = 0.
double snr(const Vec& truth, const Mat& a, double noise_norm);

}  // namespace prpr
