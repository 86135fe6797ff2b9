#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "besov/grid.hpp"
#include "besov/value_space.hpp"

namespace besov {

// Polynomial smoothstep of order s: 0 for u <= 0, 1 for u >= 1, C^s across both ends.
double smooth_step(double u, int order);
// Radial cutoff: 1 on [0, 1], 0 on [2, inf), monotone and C^order.
double cutoff(double t, int order);
// Annulus profile cutoff(t) - cutoff(2t), supported in [1/2, 2].
double annulus_profile(double t, int order);

struct BesovParams {
  double s = 0.0;
  double p = 2.0;
  double v = 2.0;

  void validate() const;
};

// Smooth dyadic resolution of unity sampled on a frequency lattice.
//  inhomogeneous: phi_0 = cutoff(|xi|), phi_k = profile(2^-k |xi|) for 1 <= k <= k_max,
//  homogeneous:   psi_k = profile(2^-k |xi|) for k_min <= k <= k_max.
// Sums equal 1 on |xi| <= 2^k_max, and on 2^k_min <= |xi| <= 2^k_max respectively.
class DyadicPartition {
 public:
  DyadicPartition(const GridSpec& grid, int smoothness);

  const GridSpec& grid() const { return grid_; }
  int smoothness() const { return smoothness_; }
  int k_max() const { return k_max_; }
  int k_min() const { return k_min_; }
  double top_radius() const;
  double bottom_radius() const;

  std::span<const double> phi_hat(int k) const;
  std::span<const double> psi_hat(int k) const;
  const std::vector<double>& frequency_norms() const { return radii_; }

  // L^1 norm of the physical kernel of phi_k / psi_k (Young constant of the block projection).
  double phi_kernel_l1(int k) const;
  double psi_kernel_l1(int k) const;

  nlohmann::json to_json() const;

 private:
  GridSpec grid_;
  int smoothness_;
  int k_max_;
  int k_min_;
  std::vector<double> radii_;
  std::vector<std::vector<double>> phi_;
  std::vector<std::vector<double>> psi_;
};

DyadicPartition build_partition(const GridSpec& grid, int smoothness = 3);

// Throws SpectralTruncation when more than 1e-8 of the L^2 mass of fhat lies where the
// partition does not sum to one. With homogeneous = true also rejects a nonzero mean.
void require_resolved(const GridFunction& fhat, const DyadicPartition& part, bool homogeneous);

GridFunction lp_block(const GridFunction& f, int k, const DyadicPartition& part);
GridFunction homogeneous_block(const GridFunction& f, int k, const DyadicPartition& part);

// Per-level terms 2^{ks} ||block_k||_p, indexed from k = 0 (or k_min).
std::vector<double> besov_sequence(const GridFunction& f, const BesovParams& params, const DyadicPartition& part,
                                   const ValueSpace& space);
std::vector<double> homogeneous_besov_sequence(const GridFunction& f, const BesovParams& params,
                                               const DyadicPartition& part, const ValueSpace& space);

double besov_norm(const GridFunction& f, const BesovParams& params, const DyadicPartition& part,
                  const ValueSpace& space);
double homogeneous_besov_norm(const GridFunction& f, const BesovParams& params, const DyadicPartition& part,
                              const ValueSpace& space);

// Same quantities from an already transformed function; no resolution check.
std::vector<double> besov_sequence_from_spectrum(const GridFunction& fhat, const BesovParams& params,
                                                 const DyadicPartition& part, const ValueSpace& space,
                                                 bool homogeneous);

}  // namespace besov
