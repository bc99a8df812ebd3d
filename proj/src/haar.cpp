#include "prpr/gauges.hpp"

#include <cmath>

namespace prpr {

namespace {

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(Index n) {
  int k = 0;
  while ((Index{1} << k) < n) ++k;
  return k;
}

// One à-trous level with hole size `shift`. Each output is half the sum or
// difference, which makes (a, d) ↦ a_prev an isometry's adjoint.
void haar_level_forward(const Vec& prev, Index shift, Vec& approx, Vec& detail) {
  const Index n = prev.size();
  approx.resize(n);
  detail.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double u = prev[i];
    const double v = prev[(i + shift) % n];
    approx[i] = 0.5 * (u + v);
    detail[i] = 0.5 * (u - v);
  }
}

Vec haar_level_adjoint(const Vec& approx, const Vec& detail, Index shift) {
  const Index n = approx.size();
  Vec prev(n);
  for (Index k = 0; k < n; ++k) {
    const Index km = (k - shift % n + n) % n;
    prev[k] = 0.5 * (approx[k] + detail[k]) + 0.5 * (approx[km] - detail[km]);
  }
  return prev;
}

}  // namespace

FrameDescriptor haar_frame(Index n, int levels) {
  if (!is_power_of_two(n) || n < 2)
    throw std::invalid_argument("haar_frame: n must be a power of two >= 2, got " +
                                std::to_string(n));
  const int max_levels = log2_exact(n);
  if (levels < 1 || levels > max_levels)
    throw std::invalid_argument("haar_frame: levels must lie in [1, " + std::to_string(max_levels) +
                                "], got " + std::to_string(levels));

  FrameDescriptor f;
  f.n = n;
  f.p = static_cast<Index>(levels + 1) * n;
  f.name = "haar_undecimated_J" + std::to_string(levels);
  f.analysis = [n, levels](const Vec& x) {
    if (x.size() != n) throw std::invalid_argument("haar analysis: length mismatch");
    Vec coeffs(static_cast<Index>(levels + 1) * n);
    Vec approx = x, next, detail;
    for (int j = 0; j < levels; ++j) {
      haar_level_forward(approx, Index{1} << j, next, detail);
      coeffs.segment(j * n, n) = detail;
      approx.swap(next);
    }
    coeffs.segment(levels * n, n) = approx;
    return coeffs;
  };
  f.synthesis = [n, levels](const Vec& c) {
    if (c.size() != static_cast<Index>(levels + 1) * n)
      throw std::invalid_argument("haar synthesis: length mismatch");
    Vec approx = c.segment(levels * n, n);
    for (int j = levels - 1; j >= 0; --j)
      approx = haar_level_adjoint(approx, c.segment(j * n, n), Index{1} << j);
    return approx;
  };
  return f;
}

double parseval_defect(const FrameDescriptor& frame) {
  double worst = 0.0;
  for (Index i = 0; i < frame.n; ++i) {
    const Vec e = Vec::Unit(frame.n, i);
    worst = std::max(worst, (frame.synthesis(frame.analysis(e)) - e).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

}  // namespace prpr
