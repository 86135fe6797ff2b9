#include "besov/value_space.hpp"

#include <algorithm>
#include <cmath>

#include "besov/errors.hpp"

namespace besov {

namespace {

void check_exponent(double p, const char* what) {
  if (!(p >= 1.0)) throw InvalidArgument(std::string(what) + " exponent must lie in [1, inf]");
}

}  // namespace

ValueSpace ValueSpace::lp(double p, int dim) {
  check_exponent(p, "l^p");
  if (dim < 1) throw InvalidArgument("value space dimension must be >= 1");
  ValueSpace x;
  x.dim_ = dim;
  x.p_ = p;
  x.name_ = "l" + (std::isinf(p) ? std::string("inf") : nlohmann::json(p).dump()) + "_" + std::to_string(dim);
  if (x.is_hilbert()) {
    x.type_ = KnownConstant{2.0, 1.0};
    x.cotype_ = KnownConstant{2.0, 1.0};
    x.fourier_type_ = KnownConstant{2.0, 1.0};
  }
  return x;
}

ValueSpace ValueSpace::custom(int dim, NormOracle norm, std::string name) {
  if (dim < 1) throw InvalidArgument("value space dimension must be >= 1");
  if (!norm) throw InvalidArgument("custom value space needs a norm oracle");
  ValueSpace x;
  x.dim_ = dim;
  x.p_ = std::numeric_limits<double>::quiet_NaN();
  x.oracle_ = std::move(norm);
  x.name_ = std::move(name);
  return x;
}

double ValueSpace::norm(std::span<const std::complex<double>> x) const {
  if (int(x.size()) != dim_) throw InvalidArgument("vector length does not match value space dimension");
  if (oracle_) return oracle_(x);
  if (dim_ == 1) return std::abs(x[0]);
  if (p_ == 2.0) {
    double s = 0.0;
    for (auto z : x) s += std::norm(z);
    return std::sqrt(s);
  }
  if (std::isinf(p_)) {
    double m = 0.0;
    for (auto z : x) m = std::max(m, std::abs(z));
    return m;
  }
  if (p_ == 1.0) {
    double s = 0.0;
    for (auto z : x) s += std::abs(z);
    return s;
  }
  double m = 0.0;
  for (auto z : x) m = std::max(m, std::abs(z));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (auto z : x) s += std::pow(std::abs(z) / m, p_);
  return m * std::pow(s, 1.0 / p_);
}

ValueSpace ValueSpace::with_type(double p, double constant) const {
  if (!(p >= 1.0 && p <= 2.0)) throw InvalidArgument("type exponent must lie in [1, 2]");
  if (!(constant >= 1.0)) throw InvalidArgument("type constant must be >= 1");
  ValueSpace x = *this;
  x.type_ = KnownConstant{p, constant};
  return x;
}

ValueSpace ValueSpace::with_cotype(double q, double constant) const {
  if (!(q >= 2.0)) throw InvalidArgument("cotype exponent must lie in [2, inf]");
  if (!(constant >= 1.0)) throw InvalidArgument("cotype constant must be >= 1");
  ValueSpace x = *this;
  x.cotype_ = KnownConstant{q, constant};
  return x;
}

ValueSpace ValueSpace::with_fourier_type(double p, double constant) const {
  if (!(p >= 1.0 && p <= 2.0)) throw InvalidArgument("Fourier type exponent must lie in [1, 2]");
  ValueSpace x = *this;
  x.fourier_type_ = KnownConstant{p, constant};
  return x;
}

std::optional<double> ValueSpace::type_constant(double p) const {
  if (!(p >= 1.0 && p <= 2.0)) throw InvalidArgument("type exponent must lie in [1, 2]");
  if (p == 1.0) return 1.0;
  if (type_ && p <= type_->exponent) return type_->value;
  return std::nullopt;
}

std::optional<double> ValueSpace::cotype_constant(double q) const {
  if (!(q >= 2.0)) throw InvalidArgument("cotype exponent must lie in [2, inf]");
  if (std::isinf(q)) return 1.0;
  if (cotype_ && q >= cotype_->exponent) return cotype_->value;
  return std::nullopt;
}

nlohmann::json ValueSpace::to_json() const {
  nlohmann::json j;
  j["kind"] = is_lp() ? "lp" : "custom";
  j["dim"] = dim_;
  if (is_lp()) j["p"] = exponent_to_json(p_);
  j["name"] = name_;
  auto put = [&](const char* key, const std::optional<KnownConstant>& c) {
    if (c) j[key] = {{"exponent", exponent_to_json(c->exponent)}, {"constant", c->value}};
  };
  put("type", type_);
  put("cotype", cotype_);
  put("fourier_type", fourier_type_);
  return j;
}

ValueSpace ValueSpace::from_json(const nlohmann::json& j) {
  std::string kind = j.value("kind", std::string("lp"));
  if (kind != "lp") throw InvalidArgument("only l^p value spaces can be read from configuration");
  ValueSpace x = lp(j.contains("p") ? exponent_from_json(j.at("p")) : 2.0, j.value("dim", 1));
  if (j.contains("type"))
    x = x.with_type(exponent_from_json(j["type"].at("exponent")), j["type"].at("constant").get<double>());
  if (j.contains("cotype"))
    x = x.with_cotype(exponent_from_json(j["cotype"].at("exponent")), j["cotype"].at("constant").get<double>());
  return x;
}

double sequence_norm(std::span<const double> values, double p) {
  check_exponent(p, "sequence");
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  if (std::isinf(p) || m == 0.0) return m;
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double exponent_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    throw InvalidArgument("exponent string must be 'inf', got '" + s + "'");
  }
  if (!j.is_number()) throw InvalidArgument("exponent must be a number or 'inf'");
  return j.get<double>();
}

nlohmann::json exponent_to_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double reciprocal(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace besov
