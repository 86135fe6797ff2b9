#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "besov/grid.hpp"
#include "besov/mask.hpp"

namespace besov {

using Mat = Eigen::MatrixXcd;

// A matrix per grid node, in either domain. Kernels are physical fields, sampled symbols
// frequency fields. File form: the grid header plus rows, cols, domain_tag and a flat
// interleaved re/im array holding each node's matrix in row-major order.
struct OperatorField {
  GridSpec grid;
  int rows = 1;
  int cols = 1;
  Domain domain = Domain::frequency;
  std::vector<Mat> values;

  OperatorField(const GridSpec& grid, int rows, int cols, Domain domain);

  nlohmann::json to_json() const;
  static OperatorField from_json(const nlohmann::json& j);
};

// Operator-valued Fourier symbol m: R^d -> L(X, Y), tabulated on the lattice and, where
// available, evaluable off the lattice together with its partial derivatives.
class OperatorSymbol {
 public:
  using Evaluator = std::function<Mat(std::span<const double> xi)>;
  using Derivative = std::function<Mat(std::span<const int> alpha, std::span<const double> xi)>;

  OperatorSymbol(const GridSpec& grid, int rows, int cols, Evaluator eval, Derivative deriv = {},
                 std::string name = "custom", nlohmann::json params = nlohmann::json::object());
  // Tabulated symbol without an off-lattice evaluator.
  explicit OperatorSymbol(OperatorField field, std::string name = "table");

  const GridSpec& grid() const { return field_.grid; }
  int rows() const { return field_.rows; }
  int cols() const { return field_.cols; }
  const std::string& name() const { return name_; }
  const nlohmann::json& params() const { return params_; }

  const Mat& at(std::size_t node) const { return field_.values[node]; }
  const std::vector<Mat>& values() const { return field_.values; }
  const OperatorField& field() const { return field_; }
  std::vector<Mat> restricted(const FrequencyMask& mask) const;

  bool has_evaluator() const { return bool(eval_); }
  bool has_derivative() const { return bool(deriv_); }
  Mat evaluate(std::span<const double> xi) const;
  Mat derivative(std::span<const int> alpha, std::span<const double> xi) const;

  // Pointwise adjoint m(xi)^*, used for the dual Mihlin condition.
  OperatorSymbol adjoint() const;
  // Same symbol resampled on another grid; needs an evaluator.
  OperatorSymbol on_grid(const GridSpec& grid) const;

  nlohmann::json describe() const;

 private:
  OperatorField field_;
  Evaluator eval_;
  Derivative deriv_;
  std::string name_;
  nlohmann::json params_;
};

// Scalar building block of the built-in symbols.
struct ScalarProfile {
  std::function<cplx(std::span<const double>)> value;
  std::function<cplx(std::span<const int>, std::span<const double>)> derivative;  // may be empty
  nlohmann::json params;
};

ScalarProfile constant_profile(cplx c);
ScalarProfile riesz_profile(double sigma, int d);
ScalarProfile modulation_profile(std::vector<double> shift);
ScalarProfile hilbert_profile();
ScalarProfile annulus_profile_indicator(int k);
// exp(i pi c |xi|^2): bounded on L^2 only; its L^1 kernels grow with the band limit.
ScalarProfile chirp_profile(double c);
// Piecewise constant w_k on the dyadic shells {|xi| < 1} (k = 0) and [2^{k-1}, 2^k) (k >= 1).
ScalarProfile shell_weights_profile(std::vector<double> weights);

OperatorSymbol scalar_symbol(const GridSpec& grid, int dim, const ScalarProfile& profile, std::string name);
OperatorSymbol diagonal_symbol(const GridSpec& grid, const std::vector<ScalarProfile>& entries, std::string name);

OperatorSymbol identity_symbol(const GridSpec& grid, int dim);
OperatorSymbol modulation_symbol(const GridSpec& grid, std::vector<double> shift, int dim = 1);
OperatorSymbol riesz_symbol(const GridSpec& grid, double sigma, int dim = 1);
OperatorSymbol annulus_indicator_symbol(const GridSpec& grid, int k, int dim = 1);
OperatorSymbol hilbert_symbol(const GridSpec& grid, int dim = 1);

// Built-in symbols by name: identity, modulation, riesz, annulus_indicator, hilbert,
// shell_weights, chirp, diagonal (a list of the scalar profiles), file (a stored symbol).
OperatorSymbol symbol_from_json(const nlohmann::json& config, const GridSpec& grid);
ScalarProfile profile_from_json(const nlohmann::json& config, int d);

}  // namespace besov
