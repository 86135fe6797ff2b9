#pragma once

#include <nlohmann/json.hpp>

#include "besov/gaussian.hpp"
#include "besov/grid.hpp"
#include "besov/mask.hpp"
#include "besov/partition.hpp"
#include "besov/symbol.hpp"
#include "besov/value_space.hpp"

namespace besov {

// T_m f = F^{-1}(m fhat) for a physical-domain f.
GridFunction apply_multiplier(const OperatorSymbol& m, const GridFunction& f);
// m fhat node by node.
GridFunction multiply_spectrum(const OperatorSymbol& m, const GridFunction& fhat);

// sum_n T_m(phi_n * f): the Besov-space extension of T_m assembled block by block.
GridFunction blockwise_extension(const OperatorSymbol& m, const GridFunction& f, const DyadicPartition& part);

struct NormEstimate {
  double value = 0.0;
  GridFunction witness;
  long evaluations = 0;
  int best_restart = -1;

  nlohmann::json to_json() const;
};

// Lower bound for ||T_m||_{L^p(X) -> L^q(Y)} over witnesses whose spectrum lies in `support`
// (all frequencies when empty). Restarts run on independent streams and each restart's
// trace extends monotonically with the step count, so a larger budget never returns less.
NormEstimate estimate_multiplier_norm(const OperatorSymbol& m, double p, double q, const ValueSpace& from,
                                      const ValueSpace& to, const SearchBudget& budget,
                                      const GaussianSampler& sampler, const FrequencyMask& support = {});

// Lower bound for the Besov operator norm B^{src} -> B^{dst}. Witnesses are resolved by the
// partition (and mean zero in the homogeneous case).
NormEstimate besov_multiplier_norm_estimate(const OperatorSymbol& m, const BesovParams& src, const BesovParams& dst,
                                            const DyadicPartition& part, const ValueSpace& from,
                                            const ValueSpace& to, const SearchBudget& budget,
                                            const GaussianSampler& sampler, bool homogeneous = false);

// ||T_m f||_q / ||f||_p for one function.
double multiplier_ratio(const OperatorSymbol& m, const GridFunction& f, double p, double q, const ValueSpace& from,
                        const ValueSpace& to);

}  // namespace besov
