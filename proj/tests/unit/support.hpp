#pragma once

#include <cmath>
#include <random>

#include "besov/fourier.hpp"
#include "besov/grid.hpp"
#include "besov/mask.hpp"

namespace testing {

using besov::cplx;

inline besov::GridFunction random_function(const besov::GridSpec& grid, int dim, std::mt19937_64& rng,
                                           besov::Domain domain = besov::Domain::physical) {
  std::normal_distribution<double> normal;
  besov::GridFunction f(grid, dim, domain);
  for (auto& v : f.samples()) v = cplx(normal(rng), normal(rng));
  return f;
}

// Random coefficients on the masked frequencies, transformed to physical space.
inline besov::GridFunction random_band(const besov::GridSpec& grid, int dim, const besov::FrequencyMask& mask,
                                       std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  besov::GridFunction hat(grid, dim, besov::Domain::frequency);
  for (std::size_t node = 0; node < grid.nodes(); ++node)
    if (mask[node])
      for (int c = 0; c < dim; ++c) hat(node, c) = cplx(normal(rng), normal(rng));
  return besov::idft(hat);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace testing
