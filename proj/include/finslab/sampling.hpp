#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "finslab/point.hpp"
#include "finslab/psi.hpp"

namespace finslab {

// Deterministic sample stream: mt19937_64 plus fixed real-valued mappings
// (the standard distributions are implementation-defined, these are not).
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::vector<double> unit_vector(int n);

  // Column-orthonormal n x n rotation via Gram-Schmidt on normal draws.
  std::vector<double> rotation_matrix(int n);

 private:
  std::mt19937_64 gen_;
};

// Intersection of the requested r-range with the profile domain (funk/klein
// live on r < 1). Throws DomainError when the intersection is empty.
std::array<double, 2> effective_r_range(const PsiProfile& profile, std::array<double, 2> r_range);

// Deterministic admissible samples: x uniform on the radius-r sphere with r
// uniform in r_range, y uniform on the sphere scaled by u in u_range. Every
// sample passes strong_convexity_check; rejections are resampled up to 10x
// oversampling, after which the draw fails.
std::vector<EvaluationPoint> draw_samples(const PsiProfile& profile, int n, int count,
                                          std::uint64_t seed, std::array<double, 2> r_range,
                                          std::array<double, 2> u_range = {0.5, 2.0});

}  // namespace finslab
