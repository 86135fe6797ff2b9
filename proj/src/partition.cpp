#include "besov/partition.hpp"

#include <cmath>

#include "besov/errors.hpp"
#include "besov/fourier.hpp"
#include "besov/norms.hpp"

namespace besov {

namespace {

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * double(n - k + i) / double(i);
  return b;
}

// int_0^u (v(1-v))^s dv, normalised so the value at u = 1 is 1. Evaluated on the lower
// half only and reflected, which keeps S(1 - u) = 1 - S(u) to rounding.
double smooth_step_lower(double u, int s) {
  double total = 0.0;
  double full = 0.0;
  for (int j = 0; j <= s; ++j) {
    double c = binomial(s, j) * ((j % 2) ? -1.0 : 1.0) / double(s + j + 1);
    total += c * std::pow(u, s + j + 1);
    full += c;
  }
  return total / full;
}

double kernel_l1(const GridSpec& grid, std::span<const double> mult) {
  GridFunction hat(grid, 1, Domain::frequency);
  for (std::size_t node = 0; node < grid.nodes(); ++node) hat(node, 0) = mult[node];
  auto kernel = idft(hat);
  double s = 0.0;
  for (auto z : kernel.samples()) s += std::abs(z);
  return s * grid.cell_measure(Domain::physical);
}

}  // namespace

double smooth_step(double u, int order) {
  if (order < 1) throw InvalidArgument("smoothness order must be >= 1");
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  if (u <= 0.5) return smooth_step_lower(u, order);
  return 1.0 - smooth_step_lower(1.0 - u, order);
}

double cutoff(double t, int order) {
  t = std::abs(t);
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  return 1.0 - smooth_step(t - 1.0, order);
}

double annulus_profile(double t, int order) {
  t = std::abs(t);
  if (t <= 0.5 || t >= 2.0) return 0.0;
  // On [1/2, 1] only cutoff(2t) varies; on [1, 2] only cutoff(t). Both use the same
  // smoothstep argument as the neighbouring level, so adjacent levels sum to 1 exactly.
  if (t <= 1.0) return smooth_step(2.0 * t - 1.0, order);
  return 1.0 - smooth_step(t - 1.0, order);
}

void BesovParams::validate() const {
  if (!std::isfinite(s)) throw InvalidArgument("Besov smoothness must be finite");
  if (!(p >= 1.0)) throw InvalidArgument("Besov integrability p must lie in [1, inf]");
  if (!(v >= 1.0)) throw InvalidArgument("Besov summability v must lie in [1, inf]");
}

DyadicPartition::DyadicPartition(const GridSpec& grid, int smoothness)
    : grid_(grid), smoothness_(smoothness), radii_(grid.frequency_norms()) {
  if (smoothness < 1) throw InvalidArgument("partition smoothness must be >= 1");
  double nyquist = grid.n() / (2.0 * grid.period());
  k_max_ = int(std::floor(std::log2(nyquist) + 1e-12)) - 1;
  if (k_max_ < 2) throw InvalidArgument("grid too coarse for a dyadic partition (needs at least 3 annuli)");
  k_min_ = std::min(k_max_, int(std::floor(-std::log2(grid.period()) + 1e-12)));

  phi_.assign(std::size_t(k_max_ + 1), std::vector<double>(grid.nodes(), 0.0));
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    double r = radii_[node];
    phi_[0][node] = cutoff(r, smoothness);
    for (int k = 1; k <= k_max_; ++k) phi_[k][node] = annulus_profile(std::ldexp(r, -k), smoothness);
  }
  psi_.assign(std::size_t(k_max_ - k_min_ + 1), std::vector<double>(grid.nodes(), 0.0));
  for (std::size_t node = 0; node < grid.nodes(); ++node)
    for (int k = k_min_; k <= k_max_; ++k)
      psi_[k - k_min_][node] = annulus_profile(std::ldexp(radii_[node], -k), smoothness);
}

double DyadicPartition::top_radius() const { return std::ldexp(1.0, k_max_); }
double DyadicPartition::bottom_radius() const { return std::ldexp(1.0, k_min_); }

std::span<const double> DyadicPartition::phi_hat(int k) const {
  if (k < 0 || k > k_max_) throw InvalidArgument("block index outside [0, k_max]");
  return phi_[k];
}

std::span<const double> DyadicPartition::psi_hat(int k) const {
  if (k < k_min_ || k > k_max_) throw InvalidArgument("homogeneous block index outside [k_min, k_max]");
  return psi_[k - k_min_];
}

double DyadicPartition::phi_kernel_l1(int k) const {
  return kernel_l1(grid_, phi_hat(k));
}

double DyadicPartition::psi_kernel_l1(int k) const {
  return kernel_l1(grid_, psi_hat(k));
}

nlohmann::json DyadicPartition::to_json() const {
  nlohmann::json j;
  j["grid"] = {{"d", grid_.dim()}, {"N", grid_.n()}, {"L", grid_.period()}};
  j["smoothness"] = smoothness_;
  j["k_min"] = 0;
  j["k_max"] = k_max_;
  nlohmann::json blocks = nlohmann::json::array();
  blocks.push_back({{"k", 0}, {"support", {0.0, 2.0}}});
  for (int k = 1; k <= k_max_; ++k)
    blocks.push_back({{"k", k}, {"support", {std::ldexp(1.0, k - 1), std::ldexp(1.0, k + 1)}}});
  j["blocks"] = blocks;
  nlohmann::json hom = nlohmann::json::array();
  for (int k = k_min_; k <= k_max_; ++k)
    hom.push_back({{"k", k}, {"support", {std::ldexp(1.0, k - 1), std::ldexp(1.0, k + 1)}}});
  j["homogeneous"] = {{"k_min", k_min_}, {"k_max", k_max_}, {"blocks", hom}};
  j["resolved_radius"] = top_radius();
  return j;
}

DyadicPartition build_partition(const GridSpec& grid, int smoothness) { return DyadicPartition(grid, smoothness); }

void require_resolved(const GridFunction& fhat, const DyadicPartition& part, bool homogeneous) {
  if (!(fhat.grid() == part.grid())) throw InvalidArgument("function and partition live on different grids");
  const auto& radii = part.frequency_norms();
  double top = part.top_radius() * (1.0 + 1e-12);
  double total = 0.0, outside = 0.0, at_zero = 0.0;
  for (std::size_t node = 0; node < fhat.nodes(); ++node) {
    double e = 0.0;
    for (auto z : fhat.value(node)) e += std::norm(z);
    total += e;
    if (radii[node] > top) outside += e;
    if (radii[node] == 0.0) at_zero += e;
  }
  if (total == 0.0) return;
  if (outside > 1e-8 * total)
    throw SpectralTruncation("spectral mass above the top resolved annulus (fraction " +
                             std::to_string(outside / total) + ")");
  // The mean carries L^2 mass |fhat(0)|^2 L^-d; compare it in the same units.
  if (homogeneous && std::sqrt(at_zero / total) > 1e-10)
    throw InvalidInput("homogeneous norms need a mean-zero function");
}

namespace {

GridFunction block_from_spectrum(const GridFunction& fhat, std::span<const double> mult) {
  GridFunction out = fhat;
  int dim = fhat.value_dim();
  auto& data = out.samples();
  for (std::size_t node = 0; node < fhat.nodes(); ++node)
    for (int c = 0; c < dim; ++c) data[node * dim + c] *= mult[node];
  return idft(out);
}

}  // namespace

GridFunction lp_block(const GridFunction& f, int k, const DyadicPartition& part) {
  if (!(f.grid() == part.grid())) throw InvalidArgument("function and partition live on different grids");
  return block_from_spectrum(dft(f), part.phi_hat(k));
}

GridFunction homogeneous_block(const GridFunction& f, int k, const DyadicPartition& part) {
  if (!(f.grid() == part.grid())) throw InvalidArgument("function and partition live on different grids");
  return block_from_spectrum(dft(f), part.psi_hat(k));
}

std::vector<double> besov_sequence_from_spectrum(const GridFunction& fhat, const BesovParams& params,
                                                 const DyadicPartition& part, const ValueSpace& space,
                                                 bool homogeneous) {
  params.validate();
  int lo = homogeneous ? part.k_min() : 0;
  std::vector<double> seq;
  seq.reserve(std::size_t(part.k_max() - lo + 1));
  for (int k = lo; k <= part.k_max(); ++k) {
    auto mult = homogeneous ? part.psi_hat(k) : part.phi_hat(k);
    double norm = lp_norm(block_from_spectrum(fhat, mult), params.p, space);
    seq.push_back(std::pow(2.0, k * params.s) * norm);
  }
  return seq;
}

std::vector<double> besov_sequence(const GridFunction& f, const BesovParams& params, const DyadicPartition& part,
                                   const ValueSpace& space) {
  params.validate();
  auto fhat = dft(f);
  require_resolved(fhat, part, false);
  return besov_sequence_from_spectrum(fhat, params, part, space, false);
}

std::vector<double> homogeneous_besov_sequence(const GridFunction& f, const BesovParams& params,
                                               const DyadicPartition& part, const ValueSpace& space) {
  params.validate();
  auto fhat = dft(f);
  require_resolved(fhat, part, true);
  return besov_sequence_from_spectrum(fhat, params, part, space, true);
}

double besov_norm(const GridFunction& f, const BesovParams& params, const DyadicPartition& part,
                  const ValueSpace& space) {
  return sequence_norm(besov_sequence(f, params, part, space), params.v);
}

double homogeneous_besov_norm(const GridFunction& f, const BesovParams& params, const DyadicPartition& part,
                              const ValueSpace& space) {
  return sequence_norm(homogeneous_besov_sequence(f, params, part, space), params.v);
}

}  // namespace besov
