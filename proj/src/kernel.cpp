#include <algorithm>
#include <cmath>

#include "besov/errors.hpp"
#include "besov/extrapolation.hpp"
#include "besov/fourier.hpp"
#include "besov/partition.hpp"

namespace besov {

double eta_hat(double t, int order) {
  t = std::abs(t);
  if (t <= 1.0) return 1.0;
  if (t >= 1.5) return 0.0;
  return 1.0 - smooth_step(2.0 * (t - 1.0), order);
}

double zeta_hat(int j, double t, int order) {
  double u = std::ldexp(t, -j);
  return eta_hat(u, order) - eta_hat(2.0 * u, order);
}

double truncation_window(int levels, double t, int order) {
  if (levels < 0) throw InvalidArgument("truncation level must be >= 0");
  return eta_hat(std::ldexp(t, -levels), order) - eta_hat(std::ldexp(t, levels + 1), order);
}

int max_truncation_levels(const GridSpec& grid) {
  double nyquist = grid.n() / (2.0 * grid.period());
  return std::max(0, int(std::floor(std::log2(nyquist / 1.5) + 1e-12)));
}

OperatorSymbol truncated_symbol(const OperatorSymbol& m, int levels, int order) {
  const auto& grid = m.grid();
  if (levels < 0 || levels > max_truncation_levels(grid))
    throw InvalidArgument("truncation level exceeds the levels the grid represents");
  if (m.has_evaluator()) {
    OperatorSymbol::Evaluator eval = [m, levels, order](std::span<const double> xi) {
      double r2 = 0.0;
      for (double x : xi) r2 += x * x;
      return Mat(truncation_window(levels, std::sqrt(r2), order) * m.evaluate(xi));
    };
    auto params = m.params();
    params["truncation_levels"] = levels;
    return OperatorSymbol(grid, m.rows(), m.cols(), eval, {}, m.name() + "_truncated", params);
  }
  OperatorField field(grid, m.rows(), m.cols(), Domain::frequency);
  for (std::size_t node = 0; node < grid.nodes(); ++node)
    field.values[node] = truncation_window(levels, grid.frequency_norm(node), order) * m.at(node);
  return OperatorSymbol(std::move(field), m.name() + "_truncated");
}

OperatorField kernel_of_symbol(const OperatorSymbol& m, int levels, int order) {
  auto tm = truncated_symbol(m, levels, order);
  const auto& grid = m.grid();
  int rows = m.rows(), cols = m.cols();
  GridFunction hat(grid, rows * cols, Domain::frequency);
  for (std::size_t node = 0; node < grid.nodes(); ++node)
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) hat(node, r * cols + c) = tm.at(node)(r, c);
  auto k = idft(hat);
  OperatorField out(grid, rows, cols, Domain::physical);
  for (std::size_t node = 0; node < grid.nodes(); ++node)
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) out.values[node](r, c) = k(node, r * cols + c);
  return out;
}

std::vector<Vec> default_test_vectors(const ValueSpace& space) {
  int n = space.dim();
  std::vector<Vec> out;
  for (int i = 0; i < n; ++i) out.push_back(Vec::Unit(n, i));
  if (n > 1) {
    Vec ones = Vec::Ones(n);
    out.push_back(ones);
    Vec alt(n);
    for (int i = 0; i < n; ++i) alt(i) = std::polar(1.0, 2.0 * M_PI * i / n);
    out.push_back(alt);
  }
  for (auto& v : out) v /= space.norm(std::span<const cplx>(v.data(), std::size_t(n)));
  return out;
}

nlohmann::json HormanderEstimate::to_json() const {
  return {{"value", value},          {"half_radius_value", half_radius_value}, {"tail_ratio", tail_ratio},
          {"non_hormander", non_hormander}, {"worst_t", worst_t},           {"t_count", t_count}};
}

namespace {

std::vector<std::size_t> default_t_nodes(const GridSpec& grid) {
  double limit = grid.period() / 8.0 * (1.0 + 1e-12);
  std::vector<std::size_t> all;
  for (std::size_t node = 1; node < grid.nodes(); ++node)
    if (grid.centered_norm(node) <= limit) all.push_back(node);
  if (all.size() <= 512) return all;
  // Dyadic distances along each axis (both signs) and along the diagonal.
  std::vector<std::size_t> out;
  int d = grid.dim();
  for (int step = 1; step * grid.spacing() * std::sqrt(double(d)) <= limit; step *= 2) {
    for (int axis = 0; axis < d; ++axis)
      for (int sign : {1, -1}) {
        std::vector<int> idx(d, 0);
        idx[axis] = sign * step;
        out.push_back(grid.node_of(idx));
      }
    std::vector<int> diag(d, step);
    out.push_back(grid.node_of(diag));
  }
  return out;
}

}  // namespace

HormanderEstimate hormander_constant(const OperatorField& kernel, double a, const ValueSpace& from,
                                     const ValueSpace& to, const HormanderOptions& options) {
  if (kernel.domain != Domain::physical) throw InvalidArgument("Hormander check needs a physical kernel");
  if (!(a >= 1.0) || std::isinf(a)) throw InvalidArgument("Hormander exponent must lie in [1, inf)");
  if (kernel.cols != from.dim() || kernel.rows != to.dim()) throw InvalidArgument("kernel shape does not match spaces");
  const auto& grid = kernel.grid;
  const int d = grid.dim();
  auto t_nodes = options.t_nodes.empty() ? default_t_nodes(grid) : options.t_nodes;
  auto xs = options.x_test.empty() ? default_test_vectors(from) : options.x_test;
  double cell = grid.cell_measure(Domain::physical);
  double quarter = grid.period() / 4.0 * (1.0 + 1e-12);
  if (options.center >= grid.nodes()) throw InvalidArgument("kernel center outside the grid");
  // Distances are measured from the center node with the minimal-image convention.
  std::vector<double> radius(grid.nodes());
  std::vector<int> rel(d);
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    for (int ax = 0; ax < d; ++ax) rel[ax] = grid.index(node, ax) - grid.index(options.center, ax);
    radius[node] = grid.centered_norm(grid.node_of(rel));
  }

  HormanderEstimate est;
  est.t_count = int(t_nodes.size());
  std::vector<int> si(d), ti(d), diff(d);
  for (auto x : xs) {
    double xn = from.norm(std::span<const cplx>(x.data(), std::size_t(x.size())));
    if (xn == 0.0) continue;
    x /= xn;
    std::vector<Vec> kx(grid.nodes());
    for (std::size_t node = 0; node < grid.nodes(); ++node) kx[node] = kernel.values[node] * x;
    for (auto t : t_nodes) {
      double tr = grid.centered_norm(t);
      for (int ax = 0; ax < d; ++ax) ti[ax] = grid.wrapped_index(t, ax);
      double full = 0.0, half = 0.0;
      for (std::size_t s = 0; s < grid.nodes(); ++s) {
        if (radius[s] < 2.0 * tr * (1.0 - 1e-12)) continue;
        for (int ax = 0; ax < d; ++ax) diff[ax] = grid.wrapped_index(s, ax) - ti[ax];
        Vec delta = kx[grid.node_of(diff)] - kx[s];
        double v = std::pow(to.norm(std::span<const cplx>(delta.data(), std::size_t(delta.size()))), a);
        full += v;
        if (radius[s] <= quarter) half += v;
      }
      double vf = std::pow(full * cell, 1.0 / a);
      double vh = std::pow(half * cell, 1.0 / a);
      if (vf > est.value) {
        est.value = vf;
        est.worst_t.assign(std::size_t(d), 0.0);
        for (int ax = 0; ax < d; ++ax) est.worst_t[ax] = grid.centered_position(t, ax);
      }
      est.half_radius_value = std::max(est.half_radius_value, vh);
    }
  }
  est.tail_ratio = est.half_radius_value > 0.0 ? est.value / est.half_radius_value : 1.0;
  est.non_hormander = est.tail_ratio > 1.25;
  return est;
}

}  // namespace besov
