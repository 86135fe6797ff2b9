#pragma once

#include "besov/grid.hpp"

namespace besov {

// Forward transform approximating int f(x) e^{-2 pi i xi.x} dx:
//   fhat(xi) = (L/n)^d sum_x f(x) e^{-2 pi i xi.x}.
// A constant c has fhat(0) = c L^d, and Parseval holds with cell measures (L/n)^d and (1/L)^d.
GridFunction dft(const GridFunction& f);

// Exact inverse of dft: f(x) = L^{-d} sum_xi fhat(xi) e^{2 pi i xi.x}.
GridFunction idft(const GridFunction& fhat);

}  // namespace besov
