#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

namespace besov {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Known geometric constant: exponent together with the constant attached to it.
struct KnownConstant {
  double exponent;
  double value;
};

// Finite-dimensional complex Banach space. Either l^p_n or an arbitrary norm oracle.
class ValueSpace {
 public:
  using NormOracle = std::function<double(std::span<const std::complex<double>>)>;

  static ValueSpace lp(double p, int dim);
  static ValueSpace hilbert(int dim) { return lp(2.0, dim); }
  static ValueSpace custom(int dim, NormOracle norm, std::string name);

  int dim() const { return dim_; }
  bool is_lp() const { return !oracle_; }
  double exponent() const { return p_; }
  // Isometric to C^n with the Euclidean norm (l^2_n, or any one-dimensional l^p).
  bool is_hilbert() const { return is_lp() && (p_ == 2.0 || dim_ == 1); }
  const std::string& name() const { return name_; }

  double norm(std::span<const std::complex<double>> x) const;

  ValueSpace with_type(double p, double constant) const;
  ValueSpace with_cotype(double q, double constant) const;
  ValueSpace with_fourier_type(double p, double constant) const;

  const std::optional<KnownConstant>& type() const { return type_; }
  const std::optional<KnownConstant>& cotype() const { return cotype_; }
  const std::optional<KnownConstant>& fourier_type() const { return fourier_type_; }

  // Upper bounds for the type p / cotype q constants implied by what is known.
  // Type 1 and cotype infinity hold with constant 1 in every space.
  std::optional<double> type_constant(double p) const;
  std::optional<double> cotype_constant(double q) const;

  nlohmann::json to_json() const;
  static ValueSpace from_json(const nlohmann::json& j);

 private:
  ValueSpace() = default;

  int dim_ = 1;
  double p_ = 2.0;
  NormOracle oracle_;
  std::string name_;
  std::optional<KnownConstant> type_;
  std::optional<KnownConstant> cotype_;
  std::optional<KnownConstant> fourier_type_;
};

// l^p norm of a real sequence; p = kInf gives the maximum.
double sequence_norm(std::span<const double> values, double p);

// Exponent helpers shared by the JSON readers: numbers or the string "inf".
double exponent_from_json(const nlohmann::json& j);
nlohmann::json exponent_to_json(double p);
// Conjugate exponent p' with 1/p + 1/p' = 1.
double conjugate_exponent(double p);
double reciprocal(double p);

}  // namespace besov
