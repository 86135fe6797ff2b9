#pragma once

#include <vector>

#include "besov/grid.hpp"

namespace besov {

// Boolean selection of frequency nodes; witnesses of restricted norm searches live on it.
using FrequencyMask = std::vector<char>;

FrequencyMask full_mask(const GridSpec& grid);
// Half-open cube [a, b)^d. Both ends must be multiples of 1/L, so the cube holds
// (b - a) L lattice points per axis and has frequency measure (b - a)^d.
FrequencyMask cube_mask(const GridSpec& grid, double a, double b);
// Closed annulus lo <= |xi| <= hi.
FrequencyMask annulus_mask(const GridSpec& grid, double lo, double hi);
// |xi| <= radius.
FrequencyMask ball_mask(const GridSpec& grid, double radius);
FrequencyMask without_zero(FrequencyMask mask);
FrequencyMask intersect(const FrequencyMask& a, const FrequencyMask& b);
std::size_t count(const FrequencyMask& mask);

// Fraction of the L^2 mass of fhat outside the mask.
double mass_outside(const GridFunction& fhat, const FrequencyMask& mask);

}  // namespace besov
