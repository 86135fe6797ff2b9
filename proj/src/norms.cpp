#include "besov/norms.hpp"

#include <algorithm>
#include <cmath>

#include "besov/errors.hpp"

namespace besov {

std::vector<double> pointwise_norms(const GridFunction& f, const ValueSpace& space) {
  if (f.value_dim() != space.dim()) throw InvalidArgument("value space dimension does not match function");
  std::vector<double> out(f.nodes());
  for (std::size_t node = 0; node < f.nodes(); ++node) out[node] = space.norm(f.value(node));
  return out;
}

double lp_norm(const GridFunction& f, double p, const ValueSpace& space) {
  if (!(p >= 1.0)) throw InvalidArgument("L^p exponent must lie in [1, inf]");
  auto values = pointwise_norms(f, space);
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  if (std::isinf(p) || m == 0.0) return m;
  double s = 0.0;
  if (p == 2.0) {
    for (double v : values) s += (v / m) * (v / m);
  } else if (p == 1.0) {
    for (double v : values) s += v / m;
  } else {
    for (double v : values) s += std::pow(v / m, p);
  }
  return m * std::pow(s * f.grid().cell_measure(f.domain()), 1.0 / p);
}

double weak_lp_norm(const GridFunction& f, double a, const ValueSpace& space) {
  if (!(a >= 1.0) || std::isinf(a)) throw InvalidArgument("weak L^a exponent must lie in [1, inf)");
  auto values = pointwise_norms(f, space);
  std::sort(values.begin(), values.end(), std::greater<>());
  double cell = f.grid().cell_measure(f.domain());
  double best = 0.0;
  std::size_t i = 0;
  while (i < values.size()) {
    double h = values[i];
    if (h <= 0.0) break;
    std::size_t j = i;
    while (j < values.size() && values[j] == h) ++j;
    best = std::max(best, h * std::pow(double(j) * cell, 1.0 / a));
    i = j;
  }
  return best;
}

}  // namespace besov
