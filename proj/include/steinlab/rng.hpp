#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace steinlab {

// Deterministic random stream. Distribution sampling is hand-rolled on top of
// mt19937_64 so seeded outputs are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Derives a stream for a named subtask; identical for serial and parallel runs.
  static Rng for_task(std::uint64_t base_seed, const std::string& task) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char c : task) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return Rng(base_seed * 1000003ull ^ h);
  }

  std::uint64_t raw() { return eng_(); }

  // Uniform in [0,1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform in [0,1) bounded away from 0, for logs.
  double uniform_pos() {
    double u = uniform();
    return u < 1e-300 ? 1e-300 : u;
  }

  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n) {  // 0..n-1
    return static_cast<int>(eng_() % static_cast<std::uint64_t>(n));
  }

  double gaussian() {  // Box-Muller
    double u1 = uniform_pos();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // Flat Dirichlet sample: exponentials normalized.
  std::vector<double> simplex_point(int dim) {
    std::vector<double> w(dim);
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      w[i] = -std::log(uniform_pos());
      s += w[i];
    }
    for (double& x : w) x /= s;
    return w;
  }

  // Simplex point with every coordinate >= floor_mass / dim (full support).
  std::vector<double> simplex_point_interior(int dim, double floor_mass) {
    std::vector<double> w = simplex_point(dim);
    double keep = 1.0 - floor_mass;
    for (double& x : w) x = keep * x + floor_mass / dim;
    return w;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace steinlab
