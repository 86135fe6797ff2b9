#include "besov/mask.hpp"

#include <cmath>

#include "besov/errors.hpp"

namespace besov {

FrequencyMask full_mask(const GridSpec& grid) { return FrequencyMask(grid.nodes(), 1); }

FrequencyMask cube_mask(const GridSpec& grid, double a, double b) {
  double L = grid.period();
  double ia = a * L, ib = b * L;
  if (std::abs(ia - std::round(ia)) > 1e-9 || std::abs(ib - std::round(ib)) > 1e-9)
    throw InvalidArgument("cube ends must be multiples of the lattice spacing 1/L");
  if (!(b > a)) throw InvalidArgument("cube needs a < b");
  long lo = std::lround(ia), hi = std::lround(ib);
  if (lo < -grid.n() / 2 || hi > grid.n() / 2) throw InvalidArgument("cube exceeds the frequency lattice");
  FrequencyMask mask(grid.nodes(), 0);
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    bool inside = true;
    for (int axis = 0; axis < grid.dim() && inside; ++axis) {
      int j = grid.wrapped_index(node, axis);
      inside = j >= lo && j < hi;
    }
    mask[node] = inside;
  }
  return mask;
}

FrequencyMask annulus_mask(const GridSpec& grid, double lo, double hi) {
  FrequencyMask mask(grid.nodes(), 0);
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    double r = grid.frequency_norm(node);
    mask[node] = r >= lo * (1 - 1e-12) && r <= hi * (1 + 1e-12);
  }
  return mask;
}

FrequencyMask ball_mask(const GridSpec& grid, double radius) { return annulus_mask(grid, 0.0, radius); }

FrequencyMask without_zero(FrequencyMask mask) {
  if (!mask.empty()) mask[0] = 0;
  return mask;
}

FrequencyMask intersect(const FrequencyMask& a, const FrequencyMask& b) {
  if (a.size() != b.size()) throw InvalidArgument("masks of different size");
  FrequencyMask out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

std::size_t count(const FrequencyMask& mask) {
  std::size_t c = 0;
  for (char m : mask) c += m ? 1 : 0;
  return c;
}

double mass_outside(const GridFunction& fhat, const FrequencyMask& mask) {
  if (mask.size() != fhat.nodes()) throw InvalidArgument("mask does not match grid");
  double total = 0.0, outside = 0.0;
  for (std::size_t node = 0; node < fhat.nodes(); ++node) {
    double e = 0.0;
    for (auto z : fhat.value(node)) e += std::norm(z);
    total += e;
    if (!mask[node]) outside += e;
  }
  return total > 0.0 ? outside / total : 0.0;
}

}  // namespace besov
