#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "besov/grid.hpp"
#include "besov/mask.hpp"
#include "besov/report.hpp"
#include "besov/value_space.hpp"

namespace besov {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int n_samples = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

// Seeded source of complex Gaussians (g_r + i g_i) / sqrt(2). Copies are cheap; distinct
// stream indices give decorrelated sequences from the same seed.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed, int n_samples = 20000, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  int n_samples() const { return n_samples_; }
  std::uint64_t stream() const { return stream_; }

  GaussianSampler with_stream(std::uint64_t stream) const { return GaussianSampler(seed_, n_samples_, stream); }
  GaussianSampler with_samples(int n) const { return GaussianSampler(seed_, n, stream_); }
  // A stream index derived from this one, for nested consumers.
  GaussianSampler child(std::uint64_t index) const;

  std::mt19937_64 engine() const;

  static cplx draw(std::mt19937_64& rng, std::normal_distribution<double>& normal);
  static void fill(Mat& m, std::mt19937_64& rng);

 private:
  std::uint64_t seed_;
  int n_samples_;
  std::uint64_t stream_;
};

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// Budget of the randomized searches (type/cotype/gamma-bound witnesses, norm witnesses).
struct SearchBudget {
  int restarts = 64;
  int max_family = 8;
  int steps = 200;
  int search_samples = 1024;

  static SearchBudget witness_default() { return {8, 8, 200, 1024}; }
  nlohmann::json to_json() const;
};

// (E || sum_k gamma_k x_k ||^2)^{1/2} by Monte Carlo. Rows of `vectors` are the x_k.
MCEstimate gaussian_moment(const Mat& vectors, const ValueSpace& space, const GaussianSampler& sampler);
MCEstimate gaussian_moment(const std::vector<Vec>& vectors, const ValueSpace& space, const GaussianSampler& sampler);

// Result of a randomized lower-bound search. `estimate` is the witness re-evaluated on
// the sampler's own stream with n_samples draws; `search_value` is its value on the
// smaller search sample set.
struct ConstantSearch {
  MCEstimate estimate;
  double search_value = 0.0;
  Mat witness;                  // rows are the witness vectors
  std::vector<int> assignment;  // family member applied to each row (gamma bound only)

  nlohmann::json to_json() const;
};

ConstantSearch type_constant_lower(const ValueSpace& space, double p, const SearchBudget& budget,
                                   const GaussianSampler& sampler);
ConstantSearch cotype_constant_lower(const ValueSpace& space, double q, const SearchBudget& budget,
                                     const GaussianSampler& sampler);

// Warm start for gamma_bound_lower: a witness of a sub-family, indices into the new family.
struct GammaWitness {
  Mat vectors;
  std::vector<int> assignment;
};

// Lower bound for the gamma-bound of a finite family of operators X -> Y.
ConstantSearch gamma_bound_lower(const std::vector<Mat>& family, const ValueSpace& from, const ValueSpace& to,
                                 const SearchBudget& budget, const GaussianSampler& sampler,
                                 const std::optional<GammaWitness>& warm_start = std::nullopt);

// Exact gamma-bound between Hilbert spaces: the largest operator norm in the family.
double gamma_bound_hilbert(const std::vector<Mat>& family, const ValueSpace& from, const ValueSpace& to);

// Gamma-bound used inside verifications: exact where a closed form exists (Hilbert spaces,
// or families of scalar multiples of the identity), a search lower bound otherwise.
struct GammaBound {
  double value = 0.0;
  bool exact = false;
  double std_error = 0.0;
  nlohmann::json to_json() const;
};
GammaBound gamma_bound(const std::vector<Mat>& family, const ValueSpace& from, const ValueSpace& to,
                       const SearchBudget& budget, const GaussianSampler& sampler);

// Operator norm X -> Y for the pairs with closed forms: (2,2), (1,q), (p,inf).
double operator_norm(const Mat& op, const ValueSpace& from, const ValueSpace& to);

// gamma(L^2(torus), X) norm of f: gaussian_moment of the cell vectors sqrt(cell) f(x).
MCEstimate gamma_function_norm(const GridFunction& f, const ValueSpace& space, const GaussianSampler& sampler);

// || m f ||_gamma <= gamma(range m) || f ||_gamma for a pointwise operator field m.
VerificationReport check_gamma_multiplier(const std::vector<Mat>& field, const GridFunction& f, const ValueSpace& from,
                                          const ValueSpace& to, const SearchBudget& budget,
                                          const GaussianSampler& sampler);

// The two embeddings between L^p, gamma and L^q for functions with spectrum in the
// half-open cube [a, b)^d:
//   ||f||_gamma <= tau_p (b-a)^{d(1/p-1/2)} ||f||_p,   ||f||_q <= c_q (b-a)^{d(1/2-1/q)} ||f||_gamma.
// A part whose constant is unknown for the space is reported as skipped.
std::vector<VerificationReport> check_lemma42(const GridFunction& f, double a, double b, double p, double q,
                                              const ValueSpace& space, const GaussianSampler& sampler);

}  // namespace besov
