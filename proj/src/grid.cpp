#include "besov/grid.hpp"

#include <cmath>

#include "besov/errors.hpp"

namespace besov {

std::string to_string(Domain domain) { return domain == Domain::physical ? "physical" : "frequency"; }

Domain domain_from_string(const std::string& tag) {
  if (tag == "physical") return Domain::physical;
  if (tag == "frequency") return Domain::frequency;
  throw InvalidArgument("unknown domain tag '" + tag + "'");
}

GridSpec::GridSpec(int d, int n, double period) : d_(d), n_(n), period_(period), nodes_(1) {
  if (d < 1) throw InvalidArgument("grid dimension must be >= 1");
  if (n < 4 || (n & (n - 1)) != 0) throw InvalidArgument("points per axis must be a power of two >= 4");
  if (!(period > 0.0) || !std::isfinite(period)) throw InvalidArgument("period must be positive and finite");
  for (int a = 0; a < d; ++a) {
    if (nodes_ > (std::size_t(1) << 28) / std::size_t(n)) throw InvalidArgument("grid too large");
    nodes_ *= std::size_t(n);
  }
}

double GridSpec::cell_measure(Domain domain) const {
  double side = domain == Domain::physical ? spacing() : 1.0 / period_;
  return std::pow(side, d_);
}

double GridSpec::volume() const { return std::pow(period_, d_); }

int GridSpec::index(std::size_t node, int axis) const {
  std::size_t stride = 1;
  for (int a = d_ - 1; a > axis; --a) stride *= std::size_t(n_);
  return int((node / stride) % std::size_t(n_));
}

int GridSpec::wrapped_index(std::size_t node, int axis) const {
  int i = index(node, axis);
  return i < n_ / 2 ? i : i - n_;
}

std::size_t GridSpec::node_of(std::span<const int> indices) const {
  if (int(indices.size()) != d_) throw InvalidArgument("index arity does not match grid dimension");
  std::size_t node = 0;
  for (int a = 0; a < d_; ++a) {
    int i = ((indices[a] % n_) + n_) % n_;
    node = node * std::size_t(n_) + std::size_t(i);
  }
  return node;
}

double GridSpec::frequency_norm(std::size_t node) const {
  double s = 0.0;
  for (int a = 0; a < d_; ++a) {
    double xi = frequency(node, a);
    s += xi * xi;
  }
  return std::sqrt(s);
}

std::vector<double> GridSpec::frequency_norms() const {
  std::vector<double> out(nodes_);
  for (std::size_t node = 0; node < nodes_; ++node) out[node] = frequency_norm(node);
  return out;
}

double GridSpec::centered_norm(std::size_t node) const {
  double s = 0.0;
  for (int a = 0; a < d_; ++a) {
    double x = centered_position(node, a);
    s += x * x;
  }
  return std::sqrt(s);
}

GridFunction::GridFunction(const GridSpec& grid, int value_dim, Domain domain)
    : grid_(grid), value_dim_(value_dim), domain_(domain) {
  if (value_dim < 1) throw InvalidArgument("value dimension must be >= 1");
  data_.assign(grid.nodes() * std::size_t(value_dim), cplx(0.0, 0.0));
}

GridFunction::GridFunction(const GridSpec& grid, int value_dim, std::vector<cplx> samples, Domain domain)
    : grid_(grid), value_dim_(value_dim), domain_(domain), data_(std::move(samples)) {
  if (value_dim < 1) throw InvalidArgument("value dimension must be >= 1");
  if (data_.size() != grid.nodes() * std::size_t(value_dim))
    throw InvalidArgument("sample count does not match grid nodes times value dimension");
}

void GridFunction::check_compatible(const GridFunction& other) const {
  if (!(grid_ == other.grid_) || value_dim_ != other.value_dim_ || domain_ != other.domain_)
    throw InvalidArgument("grid functions live on different grids, value spaces or domains");
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(cplx scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

std::vector<cplx> GridFunction::mean() const {
  std::vector<cplx> m(value_dim_, cplx(0.0, 0.0));
  for (std::size_t node = 0; node < nodes(); ++node)
    for (int c = 0; c < value_dim_; ++c) m[c] += (*this)(node, c);
  for (auto& z : m) z /= double(nodes());
  return m;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(cplx s, GridFunction a) { return a *= s; }

}  // namespace besov
