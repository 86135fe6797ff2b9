#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace besov {

using cplx = std::complex<double>;

enum class Domain { physical, frequency };

std::string to_string(Domain domain);
Domain domain_from_string(const std::string& tag);

// Periodic box [0, L)^d sampled by n points per axis. The dual lattice is
// {j / L : j in [-n/2, n/2)}^d, stored in FFT order (index i <-> j = i or i - n).
class GridSpec {
 public:
  GridSpec(int d, int n, double period = 1.0);

  int dim() const { return d_; }
  int n() const { return n_; }
  double period() const { return period_; }
  std::size_t nodes() const { return nodes_; }
  double spacing() const { return period_ / n_; }

  // Quadrature weight of one node: (L/n)^d in space, (1/L)^d in frequency.
  double cell_measure(Domain domain) const;
  double volume() const;

  int index(std::size_t node, int axis) const;
  // Signed lattice index in [-n/2, n/2).
  int wrapped_index(std::size_t node, int axis) const;
  std::size_t node_of(std::span<const int> indices) const;

  double frequency(std::size_t node, int axis) const { return wrapped_index(node, axis) / period_; }
  double frequency_norm(std::size_t node) const;
  std::vector<double> frequency_norms() const;

  double position(std::size_t node, int axis) const { return index(node, axis) * spacing(); }
  // Minimal-image coordinate in [-L/2, L/2).
  double centered_position(std::size_t node, int axis) const { return wrapped_index(node, axis) * spacing(); }
  double centered_norm(std::size_t node) const;

  bool operator==(const GridSpec& other) const = default;

 private:
  int d_;
  int n_;
  double period_;
  std::size_t nodes_;
};

// Samples of a C^value_dim valued function on a grid, node-major with the
// components of each node contiguous.
class GridFunction {
 public:
  GridFunction(const GridSpec& grid, int value_dim, Domain domain = Domain::physical);
  GridFunction(const GridSpec& grid, int value_dim, std::vector<cplx> samples, Domain domain);

  template <class F>
  static GridFunction from_function(const GridSpec& grid, int value_dim, F&& f) {
    GridFunction out(grid, value_dim);
    std::vector<double> x(grid.dim());
    for (std::size_t node = 0; node < grid.nodes(); ++node) {
      for (int a = 0; a < grid.dim(); ++a) x[a] = grid.position(node, a);
      f(std::span<const double>(x), out.value(node));
    }
    return out;
  }

  const GridSpec& grid() const { return grid_; }
  int value_dim() const { return value_dim_; }
  Domain domain() const { return domain_; }
  std::size_t nodes() const { return grid_.nodes(); }

  std::span<cplx> value(std::size_t node) { return {data_.data() + node * value_dim_, std::size_t(value_dim_)}; }
  std::span<const cplx> value(std::size_t node) const {
    return {data_.data() + node * value_dim_, std::size_t(value_dim_)};
  }
  cplx& operator()(std::size_t node, int component) { return data_[node * value_dim_ + component]; }
  cplx operator()(std::size_t node, int component) const { return data_[node * value_dim_ + component]; }

  std::vector<cplx>& samples() { return data_; }
  const std::vector<cplx>& samples() const { return data_; }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(cplx scale);

  // Mean value over the torus, one entry per component.
  std::vector<cplx> mean() const;

 private:
  void check_compatible(const GridFunction& other) const;

  GridSpec grid_;
  int value_dim_;
  Domain domain_;
  std::vector<cplx> data_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(cplx s, GridFunction a);

}  // namespace besov
