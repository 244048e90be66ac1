#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "partbp/geometry.hpp"

namespace partbp {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent substream seed for (part, iteration, purpose) tuples, so
// per-part work can run in any order without changing the draw sequence.
inline uint64_t derive_seed(uint64_t master, uint64_t part, uint64_t iteration, uint64_t tag) {
  uint64_t h = splitmix64(master);
  h = splitmix64(h ^ splitmix64(part + 1));
  h = splitmix64(h ^ splitmix64(iteration + 1));
  return splitmix64(h ^ splitmix64(tag + 1));
}

namespace rng_tag {
constexpr uint64_t kInit = 1;
constexpr uint64_t kJitter = 2;
constexpr uint64_t kAugment = 3;
constexpr uint64_t kResample = 4;
constexpr uint64_t kScene = 5;
constexpr uint64_t kIcp = 6;
}  // namespace rng_tag

class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double gaussian(double sigma) {
    return std::normal_distribution<double>(0.0, sigma)(engine_);
  }
  // Uniform integer in [0, n).
  size_t index(size_t n) {
    return std::uniform_int_distribution<size_t>(0, n - 1)(engine_);
  }

  // Shoemake's subgroup method: uniform over SO(3).
  Quat uniform_rotation() {
    double u1 = uniform(0.0, 1.0), u2 = uniform(0.0, 1.0), u3 = uniform(0.0, 1.0);
    double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    constexpr double two_pi = 2.0 * M_PI;
    return Quat(a * std::sin(two_pi * u2), a * std::cos(two_pi * u2),
                b * std::sin(two_pi * u3), b * std::cos(two_pi * u3));
  }

  Vec3 gaussian_vec(double sigma) {
    return Vec3(gaussian(sigma), gaussian(sigma), gaussian(sigma));
  }

  // Rotation perturbation: exponential of a Gaussian axis-angle vector.
  Quat gaussian_rotation(double sigma_rad) {
    Vec3 w = gaussian_vec(sigma_rad);
    double angle = w.norm();
    if (angle < 1e-15) return Quat::Identity();
    return Quat(Eigen::AngleAxisd(angle, w / angle));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace partbp
