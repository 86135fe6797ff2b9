#include <algorithm>
#include <cmath>
#include <random>

#include "besov/errors.hpp"
#include "besov/extrapolation.hpp"
#include "besov/norms.hpp"

namespace besov {

double weak_type_constant(int d, double a) {
  if (d < 1) throw InvalidArgument("dimension must be positive");
  if (!(a >= 1.0) || std::isinf(a)) throw InvalidArgument("a must lie in [1, inf)");
  return 2.0 + 2.0 * std::pow(double(d), d / (2.0 * a)) * std::pow(4.0, d / a);
}

bool weak_type_admissible(double a, double p0, double q0) {
  return std::abs(reciprocal(p0) - reciprocal(q0) - (1.0 - reciprocal(a))) < 1e-12;
}

namespace {

void normalize_l1(GridFunction& f) {
  double acc = 0.0;
  double cell = f.grid().cell_measure(Domain::physical);
  for (std::size_t node = 0; node < f.nodes(); ++node) {
    double s = 0.0;
    for (auto v : f.value(node)) s += std::norm(v);
    acc += std::sqrt(s) * cell;
  }
  if (acc > 0.0) f *= cplx(1.0 / acc);
}

std::size_t node_at(const GridSpec& grid, const std::vector<double>& frac) {
  std::vector<int> idx;
  for (double t : frac) idx.push_back(int(std::floor(t * grid.n())) % grid.n());
  return grid.node_of(idx);
}

}  // namespace

std::vector<GridFunction> default_weak_type_probes(const GridSpec& grid, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  const int d = grid.dim();
  std::vector<GridFunction> out;
  auto direction = [&] {
    std::vector<cplx> v(dim);
    for (auto& c : v) c = cplx(normal(rng), normal(rng));
    return v;
  };
  auto point = [&] {
    std::vector<double> p(d);
    for (auto& t : p) t = unit(rng);
    return p;
  };
  auto put = [&](GridFunction& f, std::size_t node, const std::vector<cplx>& v, cplx scale) {
    for (int c = 0; c < dim; ++c) f(node, c) += scale * v[c];
  };

  // Single spikes, including the origin and a grid corner.
  for (int i = 0; i < 12; ++i) {
    GridFunction f(grid, dim);
    auto p = i == 0 ? std::vector<double>(d, 0.0) : (i == 1 ? std::vector<double>(d, 1.0 - 1e-9) : point());
    put(f, node_at(grid, p), direction(), 1.0);
    out.push_back(std::move(f));
  }
  // Two spikes: equal, opposite, and at adjacent nodes.
  for (int i = 0; i < 16; ++i) {
    GridFunction f(grid, dim);
    auto v = direction();
    auto p = point();
    auto q = point();
    if (i % 4 == 3) {
      q = p;
      q[0] += 1.0 / grid.n();
      q[0] -= std::floor(q[0]);
    }
    put(f, node_at(grid, p), v, 1.0);
    put(f, node_at(grid, q), v, i % 2 ? -1.0 : 1.0);
    out.push_back(std::move(f));
  }
  // Plateaus: indicators of cubes of dyadic widths.
  for (int w = 1; w <= grid.n() / 2; w *= 2) {
    GridFunction f(grid, dim);
    auto v = direction();
    auto p = point();
    std::vector<int> origin;
    for (double t : p) origin.push_back(int(t * grid.n()));
    std::vector<int> off(d, 0), idx(d);
    while (true) {
      for (int ax = 0; ax < d; ++ax) idx[ax] = (origin[ax] + off[ax]) % grid.n();
      put(f, grid.node_of(idx), v, 1.0);
      int ax = 0;
      while (ax < d && ++off[ax] == w) off[ax++] = 0;
      if (ax == d) break;
    }
    out.push_back(std::move(f));
  }
  // Oscillations: modulated plateaus and pure waves.
  for (int i = 0; i < 16; ++i) {
    GridFunction f(grid, dim);
    auto v = direction();
    int freq = 1 << (i % int(std::log2(grid.n())));
    double width = (i < 8) ? 1.0 : std::ldexp(1.0, -(1 + i % 4));
    auto c = point();
    for (std::size_t node = 0; node < grid.nodes(); ++node) {
      double inside = 1.0, phase = 0.0;
      for (int ax = 0; ax < d; ++ax) {
        double x = grid.position(node, ax);
        double dist = std::abs(x - c[ax] * grid.period());
        dist = std::min(dist, grid.period() - dist);
        if (dist > 0.5 * width * grid.period()) inside = 0.0;
        phase += freq * x / grid.period();
      }
      if (inside > 0.0) put(f, node, v, std::cos(2.0 * M_PI * phase));
    }
    out.push_back(std::move(f));
  }
  // Random spike trains and Gaussian noise.
  while (out.size() < 100) {
    GridFunction f(grid, dim);
    if (out.size() % 2) {
      int spikes = 2 + int(unit(rng) * 8);
      for (int s = 0; s < spikes; ++s) put(f, node_at(grid, point()), direction(), normal(rng));
    } else {
      for (std::size_t node = 0; node < grid.nodes(); ++node) put(f, node, direction(), 1.0);
    }
    out.push_back(std::move(f));
  }
  for (auto& f : out) normalize_l1(f);
  return out;
}

VerificationReport verify_weak_type(const OperatorSymbol& m, int levels, double a, double p0, double q0,
                                    const std::vector<GridFunction>& probes, const ValueSpace& from,
                                    const ValueSpace& to, const SearchBudget& budget, const GaussianSampler& sampler,
                                    double tolerance) {
  if (!weak_type_admissible(a, p0, q0)) throw InvalidArgument("exponents violate 1/p0 - 1/q0 = 1 - 1/a");
  if (probes.empty()) throw InvalidArgument("weak-type check needs at least one probe");
  const auto& grid = m.grid();
  auto tm = truncated_symbol(m, levels);

  double B = 0.0;
  bool b_exact = false;
  nlohmann::json b_meta;
  if (p0 == 2.0 && q0 == 2.0 && from.is_hilbert() && to.is_hilbert()) {
    // On the lattice the L^2 operator norm of a multiplier is the largest symbol norm.
    for (std::size_t node = 0; node < grid.nodes(); ++node) B = std::max(B, operator_norm(tm.at(node), from, to));
    b_exact = true;
  } else {
    auto est = estimate_multiplier_norm(tm, p0, q0, from, to, budget, sampler.child(1));
    B = est.value;
    b_meta = est.to_json();
  }
  auto kernel = kernel_of_symbol(m, levels);
  auto hor = hormander_constant(kernel, a, from, to);
  double C = weak_type_constant(grid.dim(), a);
  double bound = C * B + 4.0 * hor.value;

  double worst = 0.0;
  int worst_index = -1;
  std::vector<double> ratios;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto& f = probes[i];
    if (!(f.grid() == grid)) throw InvalidArgument("probe grid does not match the symbol grid");
    double l1 = lp_norm(f, 1.0, from);
    if (l1 == 0.0) continue;
    double r = weak_lp_norm(apply_multiplier(tm, f), a, to) / l1;
    ratios.push_back(r);
    if (r > worst) {
      worst = r;
      worst_index = int(i);
    }
  }
  nlohmann::json meta = {{"symbol", m.describe()},
                         {"levels", levels},
                         {"a", a},
                         {"p0", exponent_to_json(p0)},
                         {"q0", exponent_to_json(q0)},
                         {"C_da", C},
                         {"B", B},
                         {"B_exact", b_exact},
                         {"hormander", hor.to_json()},
                         {"probe_count", probes.size()},
                         {"worst_probe", worst_index},
                         {"ratios", ratios}};
  if (!b_exact) meta["B_search"] = b_meta;
  return VerificationReport::make("weak_type", worst, bound, tolerance, meta);
}

}  // namespace besov
