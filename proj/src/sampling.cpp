#include "finslab/sampling.hpp"

#include <cmath>

#include "finslab/spray.hpp"

namespace finslab {

std::vector<double> SampleRng::unit_vector(int n) {
  while (true) {
    std::vector<double> v(static_cast<std::size_t>(n));
    double norm2 = 0.0;
    for (double& c : v) {
      c = normal();
      norm2 += c * c;
    }
    if (norm2 > 1e-24) {
      double inv = 1.0 / std::sqrt(norm2);
      for (double& c : v) c *= inv;
      return v;
    }
  }
}

std::vector<double> SampleRng::rotation_matrix(int n) {
  std::size_t nn = static_cast<std::size_t>(n);
  std::vector<double> m(nn * nn);
  for (int col = 0; col < n; ++col) {
    while (true) {
      std::vector<double> v(nn);
      for (double& c : v) c = normal();
      for (int prev = 0; prev < col; ++prev) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i)
          dot += v[static_cast<std::size_t>(i)] * m[static_cast<std::size_t>(i * n + prev)];
        for (int i = 0; i < n; ++i)
          v[static_cast<std::size_t>(i)] -= dot * m[static_cast<std::size_t>(i * n + prev)];
      }
      double norm2 = 0.0;
      for (double c : v) norm2 += c * c;
      if (norm2 > 1e-12) {
        double inv = 1.0 / std::sqrt(norm2);
        for (int i = 0; i < n; ++i)
          m[static_cast<std::size_t>(i * n + col)] = v[static_cast<std::size_t>(i)] * inv;
        break;
      }
    }
  }
  return m;
}

std::array<double, 2> effective_r_range(const PsiProfile& profile,
                                        std::array<double, 2> r_range) {
  std::array<double, 2> out = r_range;
  if (profile.r_upper) out[1] = std::min(out[1], *profile.r_upper - 1e-3);
  if (!(out[0] < out[1]))
    throw DomainError("metric domain too small for sampling");
  return out;
}

std::vector<EvaluationPoint> draw_samples(const PsiProfile& profile, int n, int count,
                                          std::uint64_t seed, std::array<double, 2> r_range,
                                          std::array<double, 2> u_range) {
  std::array<double, 2> rr = effective_r_range(profile, r_range);
  SampleRng rng(seed);
  std::vector<EvaluationPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  long attempts = 0;
  long cap = 10L * count;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > cap) throw DomainError("metric domain too small for sampling");
    double r = rng.uniform(rr[0], rr[1]);
    std::vector<double> x = rng.unit_vector(n);
    for (double& c : x) c *= r;
    double u = rng.uniform(u_range[0], u_range[1]);
    std::vector<double> y = rng.unit_vector(n);
    for (double& c : y) c *= u;
    try {
      EvaluationPoint p = EvaluationPoint::make(std::move(x), std::move(y));
      if (!strong_convexity_check(profile, p).positive_definite) continue;
      out.push_back(std::move(p));
    } catch (const DomainError&) {
      continue;  // outside the profile domain: rejected, not fatal
    }
  }
  return out;
}

}  // namespace finslab
