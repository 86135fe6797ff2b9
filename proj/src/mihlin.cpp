#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "besov/errors.hpp"
#include "besov/extrapolation.hpp"

namespace besov {

namespace {

constexpr int kGaussPoints = 30;

struct QuadNode {
  std::vector<double> unit;  // direction on the sphere
  double weight;             // surface weight
};

// Quadrature on the unit sphere S^{d-1}.
std::vector<QuadNode> sphere_rule(int d, int angular) {
  std::vector<QuadNode> out;
  if (d == 1) {
    out.push_back({{1.0}, 1.0});
    out.push_back({{-1.0}, 1.0});
  } else if (d == 2) {
    for (int i = 0; i < angular; ++i) {
      double th = 2.0 * M_PI * (i + 0.5) / angular;
      out.push_back({{std::cos(th), std::sin(th)}, 2.0 * M_PI / angular});
    }
  } else if (d == 3) {
    using GL = boost::math::quadrature::gauss<double, kGaussPoints>;
    const auto& abs = GL::abscissa();
    const auto& w = GL::weights();
    int az = std::max(8, angular / 2);
    for (std::size_t i = 0; i < abs.size(); ++i)
      for (int sign : {1, -1}) {
        if (i == 0 && sign < 0 && abs[0] == 0.0) continue;
        double c = sign * abs[i];
        double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int j = 0; j < az; ++j) {
          double ph = 2.0 * M_PI * (j + 0.5) / az;
          out.push_back({{s * std::cos(ph), s * std::sin(ph), c}, w[i] * 2.0 * M_PI / az});
        }
      }
  } else {
    throw Unsupported("Mihlin shell quadrature is implemented for d <= 3");
  }
  return out;
}

// Gauss-Legendre nodes on [lo, hi] with n points (composite panels of kGaussPoints).
std::vector<std::pair<double, double>> radial_rule(double lo, double hi, int n) {
  using GL = boost::math::quadrature::gauss<double, kGaussPoints>;
  const auto& abs = GL::abscissa();
  const auto& w = GL::weights();
  int panels = std::max(1, (n + kGaussPoints - 1) / kGaussPoints);
  std::vector<std::pair<double, double>> out;
  double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double mid = lo + (p + 0.5) * h, half = 0.5 * h;
    for (std::size_t i = 0; i < abs.size(); ++i) {
      out.push_back({mid + half * abs[i], half * w[i]});
      if (abs[i] != 0.0) out.push_back({mid - half * abs[i], half * w[i]});
    }
  }
  return out;
}

std::vector<std::vector<int>> multi_indices(int d, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(d, 0);
  auto rec = [&](auto&& self, int axis, int left) -> void {
    if (axis == d) {
      out.push_back(a);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      a[axis] = v;
      self(self, axis + 1, left - v);
    }
    a[axis] = 0;
  };
  rec(rec, 0, order);
  return out;
}

// Nested central differences, O(h^2) per axis.
Mat fd_derivative(const OperatorSymbol& m, std::vector<int> alpha, std::vector<double> xi, double h) {
  for (std::size_t ax = 0; ax < alpha.size(); ++ax) {
    if (alpha[ax] == 0) continue;
    alpha[ax] -= 1;
    auto plus = xi, minus = xi;
    plus[ax] += h;
    minus[ax] -= h;
    return (fd_derivative(m, alpha, plus, h) - fd_derivative(m, alpha, minus, h)) / (2.0 * h);
  }
  return m.evaluate(xi);
}

std::vector<double> default_radii(const GridSpec& grid) {
  std::vector<double> out;
  double nyquist = grid.n() / (2.0 * grid.period());
  for (int k = int(std::floor(std::log2(1.0 / grid.period()))); k < 64; ++k) {
    double r = std::ldexp(1.0, k);
    if (r < 1.0 / grid.period()) continue;
    if (2.0 * r > nyquist) break;
    out.push_back(r);
  }
  return out;
}

ValueSpace dual_space(const ValueSpace& x) {
  if (!x.is_lp()) throw Unsupported("dual of a custom value space is unknown");
  return ValueSpace::lp(conjugate_exponent(x.exponent()), x.dim());
}

}  // namespace

int mihlin_order(int d, double r, double rho) {
  if (!(rho >= 1.0) || std::isinf(rho)) throw InvalidArgument("rho must lie in [1, inf)");
  return int(std::floor(d * reciprocal(rho) - d * reciprocal(r) + 1e-12)) + 1;
}

nlohmann::json MihlinReport::to_json() const {
  return {{"derivatives", derivatives}, {"constant", constant}, {"radii", radii}, {"per_radius", per_radius}, {"samples", samples}};
}

MihlinReport mihlin_check(const OperatorSymbol& m, double r, double rho, const ValueSpace& from,
                          const ValueSpace& to, const MihlinOptions& options) {
  const auto& grid = m.grid();
  const int d = grid.dim();
  if (m.cols() != from.dim() || m.rows() != to.dim()) throw InvalidArgument("symbol shape does not match spaces");
  if (!m.has_evaluator()) throw InvalidArgument("Mihlin check needs an evaluable symbol");
  if (options.mode == DerivativeMode::oracle && !m.has_derivative())
    throw InvalidArgument("symbol has no derivative oracle; use finite differences with a step");
  if (options.mode == DerivativeMode::finite_difference && !(options.fd_step > 0.0))
    throw InvalidArgument("finite-difference step must be positive");

  MihlinReport rep;
  rep.derivatives = mihlin_order(d, r, rho);
  rep.radii = options.radii.empty() ? default_radii(grid) : options.radii;
  auto xs = options.x_test.empty() ? default_test_vectors(from) : options.x_test;
  for (auto& x : xs) x /= from.norm(std::span<const cplx>(x.data(), std::size_t(x.size())));
  auto sphere = sphere_rule(d, options.angular_nodes);
  auto alphas = multi_indices(d, rep.derivatives);
  double scale_shift = d * reciprocal(r) - d / rho;

  for (double R : rep.radii) {
    auto radial = radial_rule(R, 2.0 * R, options.radial_nodes);
    double h = options.fd_step * R;
    double best = 0.0;
    for (const auto& alpha : alphas) {
      int order = 0;
      for (int v : alpha) order += v;
      std::vector<double> acc(xs.size(), 0.0);
      std::vector<double> xi(d);
      for (const auto& [rad, rw] : radial) {
        double jac = std::pow(rad, d - 1) * rw;
        for (const auto& q : sphere) {
          for (int ax = 0; ax < d; ++ax) xi[ax] = rad * q.unit[ax];
          Mat D = options.mode == DerivativeMode::oracle ? m.derivative(alpha, xi) : fd_derivative(m, alpha, xi, h);
          for (std::size_t i = 0; i < xs.size(); ++i) {
            Vec y = D * xs[i];
            acc[i] += std::pow(to.norm(std::span<const cplx>(y.data(), std::size_t(y.size()))), rho) * jac * q.weight;
          }
        }
      }
      double weight = std::pow(R, order + scale_shift);
      double value = 0.0;
      for (double a : acc) value = std::max(value, weight * std::pow(a, 1.0 / rho));
      rep.samples.push_back({{"R", R}, {"alpha", alpha}, {"value", value}});
      best = std::max(best, value);
    }
    rep.per_radius.push_back(best);
    rep.constant = std::max(rep.constant, best);
  }
  return rep;
}

MihlinReport mihlin_check_dual(const OperatorSymbol& m, double r, double rho, const ValueSpace& from,
                               const ValueSpace& to, const MihlinOptions& options) {
  auto opts = options;
  opts.x_test.clear();
  return mihlin_check(m.adjoint(), r, rho, dual_space(to), dual_space(from), opts);
}

}  // namespace besov
