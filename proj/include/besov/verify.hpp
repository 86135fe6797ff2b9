#pragma once

#include <vector>

#include "besov/gaussian.hpp"
#include "besov/multiplier.hpp"
#include "besov/partition.hpp"
#include "besov/report.hpp"
#include "besov/symbol.hpp"

namespace besov {

struct VerifyOptions {
  SearchBudget gamma_budget{};
  SearchBudget witness_budget = SearchBudget::witness_default();
  double tolerance = 0.05;
};

// Summability exponents of the Besov multiplier theorems; admissible iff 1/w <= 1/u + 1/v.
struct Summability {
  double u = kInf;
  double v = 2.0;
  double w = 2.0;

  bool admissible() const;
  void require_admissible() const;
};

// Gamma-bound of the symbol over each annulus: I_k for k in [0, k_max], or the homogeneous
// J_k for k in [k_min, k_max].
std::vector<GammaBound> annulus_gamma_bounds(const OperatorSymbol& m, const DyadicPartition& part,
                                             const ValueSpace& from, const ValueSpace& to, bool homogeneous,
                                             const SearchBudget& budget, const GaussianSampler& sampler);

// 1/r = 1/p - 1/q, with the type p constant of X and the cotype q constant of Y.
struct ExponentData {
  double inv_r = 0.0;
  double type_constant = 1.0;
  double cotype_constant = 1.0;
};
ExponentData exponent_data(double p, double q, const ValueSpace& from, const ValueSpace& to);

// L^p(X) -> L^q(Y) norm of T_m on functions with spectrum in [a, b)^d against
// tau c (b-a)^{d/r} gamma(m on the cube).
VerificationReport verify_prop43(const OperatorSymbol& m, double a, double b, double p, double q,
                                 const ValueSpace& from, const ValueSpace& to, const VerifyOptions& opts,
                                 const GaussianSampler& sampler);

// B^s_{p,v}(X) -> B^{s+sigma-d/r}_{q,w}(Y) against 4^{d/r} tau c ||(2^{k sigma} gamma_k)||_{l^u}.
VerificationReport verify_thm44(const OperatorSymbol& m, double s, double sigma, double p, double q,
                                const Summability& sum, const ValueSpace& from, const ValueSpace& to,
                                const DyadicPartition& part, const VerifyOptions& opts,
                                const GaussianSampler& sampler);

// Homogeneous version of verify_thm44 on mean-zero witnesses.
VerificationReport verify_thm45(const OperatorSymbol& m, double s, double sigma, double p, double q,
                                const Summability& sum, const ValueSpace& from, const ValueSpace& to,
                                const DyadicPartition& part, const VerifyOptions& opts,
                                const GaussianSampler& sampler);

// L^p(X) -> L^q(Y) against C 4^{d/r} tau c sum_k 2^{k d/r} gamma(m on J_k), where C is the
// largest L^1 norm of the homogeneous block kernels. The metadata also carries the
// empirical constant measured / (4^{d/r} tau c sum).
VerificationReport verify_thm46(const OperatorSymbol& m, double p, double q, const ValueSpace& from,
                                const ValueSpace& to, const DyadicPartition& part, const VerifyOptions& opts,
                                const GaussianSampler& sampler);

// Hilbert-space Besov bound B^s_{p,v} -> B^s_{q,w} against ||(c_k)||_{l^u} with
// c_k = || ||m|| ||_{L^r(I_k)} computed by lattice quadrature.
VerificationReport verify_prop34(const OperatorSymbol& m, double s, double p, double q, const Summability& sum,
                                 const ValueSpace& from, const ValueSpace& to, const DyadicPartition& part,
                                 const VerifyOptions& opts, const GaussianSampler& sampler);

// Closed annuli on the lattice used by the theorems.
FrequencyMask inhomogeneous_annulus(const DyadicPartition& part, int k);
FrequencyMask homogeneous_annulus(const DyadicPartition& part, int k);

}  // namespace besov
