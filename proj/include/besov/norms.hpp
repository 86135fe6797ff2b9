#pragma once

#include <vector>

#include "besov/grid.hpp"
#include "besov/value_space.hpp"

namespace besov {

// Pointwise ||f(x)||_X at every node.
std::vector<double> pointwise_norms(const GridFunction& f, const ValueSpace& space);

// Riemann-sum L^p(X) norm with the cell measure of f's domain; p = kInf is the maximum.
double lp_norm(const GridFunction& f, double p, const ValueSpace& space);

// Weak L^a norm sup_alpha alpha * mu(||f|| > alpha)^(1/a). On a step function the
// supremum is approached from below each attained height h, giving h * mu(||f|| >= h)^(1/a).
double weak_lp_norm(const GridFunction& f, double a, const ValueSpace& space);

}  // namespace besov
