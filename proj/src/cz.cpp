#include <algorithm>
#include <cmath>

#include "besov/errors.hpp"
#include "besov/extrapolation.hpp"
#include "besov/norms.hpp"

namespace besov {

namespace {

// Nodes of the cube with lower corner `origin` and `side` nodes per axis.
template <class F>
void for_each_node(const GridSpec& grid, const std::vector<int>& origin, int side, F&& f) {
  const int d = grid.dim();
  std::vector<int> idx(origin);
  std::vector<int> off(d, 0);
  while (true) {
    for (int ax = 0; ax < d; ++ax) idx[ax] = origin[ax] + off[ax];
    f(grid.node_of(idx));
    int ax = 0;
    while (ax < d && ++off[ax] == side) off[ax++] = 0;
    if (ax == d) break;
  }
}

struct Stopping {
  const GridSpec& grid;
  const std::vector<double>& norms;
  double height;
  double cell;
  std::vector<DyadicCube> selected;

  double average(const std::vector<int>& origin, int side) const {
    double acc = 0.0;
    for_each_node(grid, origin, side, [&](std::size_t node) { acc += norms[node]; });
    return acc / std::pow(double(side), grid.dim());
  }

  // `origin`/`side` is a cube whose average does not exceed the height.
  void descend(const std::vector<int>& origin, int side) {
    if (side == 1) return;
    const int d = grid.dim();
    int half = side / 2;
    for (int corner = 0; corner < (1 << d); ++corner) {
      std::vector<int> child(origin);
      for (int ax = 0; ax < d; ++ax)
        if (corner & (1 << ax)) child[ax] += half;
      if (average(child, half) > height) {
        selected.push_back(make_cube(child, half));
      } else {
        descend(child, half);
      }
    }
  }

  DyadicCube make_cube(const std::vector<int>& origin, int side) const {
    DyadicCube q;
    q.origin = origin;
    q.side = side;
    q.measure = std::pow(side * grid.spacing(), grid.dim());
    for (int o : origin) q.center.push_back((o + 0.5 * side) * grid.spacing());
    return q;
  }
};

}  // namespace

GridFunction CZDecomposition::bad_part(std::size_t j) const {
  if (j >= cubes.size()) throw InvalidArgument("bad part index out of range");
  GridFunction out(bad.grid(), bad.value_dim(), Domain::physical);
  for (std::size_t node = 0; node < owner.size(); ++node)
    if (owner[node] == int(j))
      for (int c = 0; c < bad.value_dim(); ++c) out(node, c) = bad(node, c);
  return out;
}

nlohmann::json CZDecomposition::diagnostics() const {
  nlohmann::json list = nlohmann::json::array();
  double sqrt_d = std::sqrt(double(good.grid().dim()));
  double total = 0.0;
  for (const auto& q : cubes) {
    double side = q.side * good.grid().spacing();
    list.push_back({{"origin", q.origin},
                    {"side_nodes", q.side},
                    {"side", side},
                    {"measure", q.measure},
                    {"center", q.center},
                    {"dilated_side", 2.0 * sqrt_d * side}});
    total += q.measure;
  }
  return {{"height", height},           {"gamma", gamma},       {"root_selected", root_selected},
          {"cube_count", cubes.size()}, {"measure_sum", total}, {"cubes", list}};
}

CZDecomposition cz_decompose(const GridFunction& f, double alpha, double a, double B, const ValueSpace& space) {
  if (f.domain() != Domain::physical) throw InvalidArgument("CZ decomposition needs a physical function");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be positive");
  if (!(a >= 1.0) || std::isinf(a)) throw InvalidArgument("a must lie in [1, inf)");
  if (!(B > 0.0) || !std::isfinite(B)) throw InvalidArgument("B must be positive");
  if (f.value_dim() != space.dim()) throw InvalidArgument("value dimension does not match the space");
  const auto& grid = f.grid();
  double l1 = lp_norm(f, 1.0, space);
  if (l1 > 1.0 + 1e-12) throw InvalidInput("CZ decomposition needs ||f||_1 <= 1");

  auto norms = pointwise_norms(f, space);
  CZDecomposition dec{f, GridFunction(grid, f.value_dim()), {}, std::vector<int>(grid.nodes(), -1), 0.0, 0.0, false};
  dec.gamma = std::pow(B, -a) * std::pow(2.0, -(grid.dim() + a));
  dec.height = dec.gamma * std::pow(alpha, a);

  Stopping st{grid, norms, dec.height, grid.cell_measure(Domain::physical), {}};
  std::vector<int> root(grid.dim(), 0);
  if (st.average(root, grid.n()) > dec.height) {
    dec.root_selected = true;
    st.selected.push_back(st.make_cube(root, grid.n()));
  } else {
    st.descend(root, grid.n());
  }
  dec.cubes = std::move(st.selected);

  const int m = f.value_dim();
  for (std::size_t j = 0; j < dec.cubes.size(); ++j) {
    const auto& q = dec.cubes[j];
    std::vector<cplx> avg(m, 0.0);
    std::size_t count = 0;
    for_each_node(grid, q.origin, q.side, [&](std::size_t node) {
      for (int c = 0; c < m; ++c) avg[c] += f(node, c);
      ++count;
    });
    for (auto& v : avg) v /= double(count);
    for_each_node(grid, q.origin, q.side, [&](std::size_t node) {
      dec.owner[node] = int(j);
      for (int c = 0; c < m; ++c) {
        dec.good(node, c) = avg[c];
        dec.bad(node, c) = f(node, c) - avg[c];
      }
    });
  }
  return dec;
}

bool CZCheck::ok(double tol) const {
  return reconstruction_error <= tol && max_mean <= tol && support_ok && measure_sum <= measure_bound &&
         good_sup <= good_sup_bound * (1.0 + tol) && good_l1 <= 1.0 + tol;
}

nlohmann::json CZCheck::to_json() const {
  return {{"reconstruction_error", reconstruction_error},
          {"max_mean", max_mean},
          {"support_ok", support_ok},
          {"measure_sum", measure_sum},
          {"measure_bound", measure_bound},
          {"good_sup", good_sup},
          {"good_sup_bound", good_sup_bound},
          {"good_l1", good_l1},
          {"bad_l1", bad_l1},
          {"ok", ok()}};
}

CZCheck check_cz(const CZDecomposition& dec, const GridFunction& f, const ValueSpace& space) {
  const auto& grid = f.grid();
  const int m = f.value_dim();
  CZCheck out;

  // Independent ownership map from the cube list; overlaps or stray bad mass fail.
  std::vector<int> owner(grid.nodes(), -1);
  out.support_ok = true;
  for (std::size_t j = 0; j < dec.cubes.size(); ++j)
    for_each_node(grid, dec.cubes[j].origin, dec.cubes[j].side, [&](std::size_t node) {
      if (owner[node] != -1) out.support_ok = false;
      owner[node] = int(j);
    });
  for (std::size_t node = 0; node < grid.nodes(); ++node)
    if (owner[node] == -1)
      for (int c = 0; c < m; ++c)
        if (dec.bad(node, c) != cplx(0.0)) out.support_ok = false;

  double fmax = 0.0, err = 0.0;
  auto fn = pointwise_norms(f, space);
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    fmax = std::max(fmax, fn[node]);
    std::vector<cplx> diff(m);
    for (int c = 0; c < m; ++c) diff[c] = f(node, c) - dec.good(node, c) - dec.bad(node, c);
    err = std::max(err, space.norm(diff));
  }
  out.reconstruction_error = fmax > 0.0 ? err / fmax : err;

  double l1 = lp_norm(f, 1.0, space);
  double cell = grid.cell_measure(Domain::physical);
  std::vector<std::vector<cplx>> sums(dec.cubes.size(), std::vector<cplx>(m, 0.0));
  for (std::size_t node = 0; node < grid.nodes(); ++node)
    if (owner[node] >= 0)
      for (int c = 0; c < m; ++c) sums[owner[node]][c] += dec.bad(node, c) * cell;
  for (const auto& s : sums) out.max_mean = std::max(out.max_mean, space.norm(s) / (l1 > 0.0 ? l1 : 1.0));

  for (const auto& q : dec.cubes) out.measure_sum += q.measure;
  out.measure_bound = 1.0 / dec.height;
  out.good_sup = lp_norm(dec.good, kInf, space);
  out.good_sup_bound = std::pow(2.0, grid.dim()) * dec.height;
  out.good_l1 = lp_norm(dec.good, 1.0, space);
  out.bad_l1 = lp_norm(dec.bad, 1.0, space);
  return out;
}

}  // namespace besov
