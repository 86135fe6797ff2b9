#include "besov/symbol.hpp"

#include <cmath>

#include "besov/errors.hpp"
#include "besov/io.hpp"

namespace besov {

OperatorField::OperatorField(const GridSpec& g, int r, int c, Domain dom)
    : grid(g), rows(r), cols(c), domain(dom), values(g.nodes(), Mat::Zero(r, c)) {
  if (r < 1 || c < 1) throw InvalidArgument("operator field needs positive matrix shape");
}

nlohmann::json OperatorField::to_json() const {
  nlohmann::json j = grid_to_json(grid);
  j["rows"] = rows;
  j["cols"] = cols;
  j["domain_tag"] = to_string(domain);
  std::vector<double> data;
  data.reserve(values.size() * std::size_t(rows * cols) * 2);
  for (const auto& m : values)
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        data.push_back(m(r, c).real());
        data.push_back(m(r, c).imag());
      }
  j["data"] = std::move(data);
  return j;
}

OperatorField OperatorField::from_json(const nlohmann::json& j) {
  OperatorField f(grid_from_json(j), j.at("rows").get<int>(), j.at("cols").get<int>(),
                  domain_from_string(j.value("domain_tag", std::string("frequency"))));
  const auto& data = j.at("data");
  std::size_t per = std::size_t(f.rows * f.cols);
  if (!data.is_array() || data.size() != 2 * per * f.values.size())
    throw InvalidArgument("operator field data length does not match header");
  std::size_t i = 0;
  for (auto& m : f.values)
    for (int r = 0; r < f.rows; ++r)
      for (int c = 0; c < f.cols; ++c, i += 2) m(r, c) = cplx(data[i].get<double>(), data[i + 1].get<double>());
  return f;
}

OperatorSymbol::OperatorSymbol(const GridSpec& grid, int rows, int cols, Evaluator eval, Derivative deriv,
                               std::string name, nlohmann::json params)
    : field_(grid, rows, cols, Domain::frequency),
      eval_(std::move(eval)),
      deriv_(std::move(deriv)),
      name_(std::move(name)),
      params_(std::move(params)) {
  if (!eval_) throw InvalidArgument("symbol needs an evaluator");
  std::vector<double> xi(grid.dim());
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    for (int a = 0; a < grid.dim(); ++a) xi[a] = grid.frequency(node, a);
    Mat m = eval_(xi);
    if (m.rows() != rows || m.cols() != cols) throw InvalidArgument("symbol evaluator returned a wrong shape");
    field_.values[node] = std::move(m);
  }
}

OperatorSymbol::OperatorSymbol(OperatorField field, std::string name) : field_(std::move(field)), name_(std::move(name)) {
  if (field_.domain != Domain::frequency) throw InvalidArgument("a symbol is a frequency-domain field");
  if (field_.values.size() != field_.grid.nodes()) throw InvalidArgument("symbol table does not match grid");
}

std::vector<Mat> OperatorSymbol::restricted(const FrequencyMask& mask) const {
  if (mask.size() != field_.values.size()) throw InvalidArgument("mask does not match symbol grid");
  std::vector<Mat> out;
  for (std::size_t node = 0; node < mask.size(); ++node)
    if (mask[node]) out.push_back(field_.values[node]);
  return out;
}

Mat OperatorSymbol::evaluate(std::span<const double> xi) const {
  if (!eval_) throw Unsupported("symbol '" + name_ + "' has no off-lattice evaluator");
  return eval_(xi);
}

Mat OperatorSymbol::derivative(std::span<const int> alpha, std::span<const double> xi) const {
  if (!deriv_) throw Unsupported("symbol '" + name_ + "' has no derivative oracle");
  return deriv_(alpha, xi);
}

OperatorSymbol OperatorSymbol::adjoint() const {
  if (!eval_) {
    OperatorField f(field_.grid, field_.cols, field_.rows, Domain::frequency);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = field_.values[i].adjoint();
    return OperatorSymbol(std::move(f), name_ + "*");
  }
  auto eval = eval_;
  Evaluator e = [eval](std::span<const double> xi) { return Mat(eval(xi).adjoint()); };
  Derivative d;
  if (deriv_) {
    auto deriv = deriv_;
    d = [deriv](std::span<const int> alpha, std::span<const double> xi) { return Mat(deriv(alpha, xi).adjoint()); };
  }
  return OperatorSymbol(field_.grid, field_.cols, field_.rows, e, d, name_ + "*", params_);
}

OperatorSymbol OperatorSymbol::on_grid(const GridSpec& grid) const {
  if (!eval_) throw Unsupported("symbol '" + name_ + "' is tabulated and cannot be resampled");
  if (grid.dim() != field_.grid.dim()) throw InvalidArgument("cannot resample onto a grid of another dimension");
  return OperatorSymbol(grid, field_.rows, field_.cols, eval_, deriv_, name_, params_);
}

nlohmann::json OperatorSymbol::describe() const {
  return {{"name", name_}, {"params", params_}, {"rows", field_.rows}, {"cols", field_.cols}};
}

ScalarProfile constant_profile(cplx c) {
  ScalarProfile p;
  p.value = [c](std::span<const double>) { return c; };
  p.derivative = [c](std::span<const int> alpha, std::span<const double>) {
    for (int a : alpha)
      if (a != 0) return cplx(0.0);
    return c;
  };
  p.params = {{"kind", "constant"}, {"value", {c.real(), c.imag()}}};
  return p;
}

ScalarProfile riesz_profile(double sigma, int d) {
  ScalarProfile p;
  p.value = [sigma](std::span<const double> xi) {
    double r2 = 0.0;
    for (double x : xi) r2 += x * x;
    return r2 == 0.0 ? cplx(0.0) : cplx(std::pow(r2, -0.5 * sigma));
  };
  // (|xi|^2)^{-s/2} differentiated term by term; a term is c * xi^beta * |xi|^{2e}.
  p.derivative = [sigma, d](std::span<const int> alpha, std::span<const double> xi) {
    double u = 0.0;
    for (double x : xi) u += x * x;
    if (u == 0.0) return cplx(0.0);
    struct Term {
      double c;
      std::vector<int> beta;
      double e;
    };
    std::vector<Term> terms{{1.0, std::vector<int>(d, 0), -0.5 * sigma}};
    for (int ax = 0; ax < d; ++ax)
      for (int n = 0; n < alpha[ax]; ++n) {
        std::vector<Term> next;
        for (const auto& t : terms) {
          if (t.beta[ax] > 0) {
            Term a = t;
            a.c *= t.beta[ax];
            a.beta[ax] -= 1;
            next.push_back(a);
          }
          Term b = t;
          b.c *= 2.0 * t.e;
          b.beta[ax] += 1;
          b.e -= 1.0;
          next.push_back(b);
        }
        terms = std::move(next);
      }
    double out = 0.0;
    for (const auto& t : terms) {
      double v = t.c * std::pow(u, t.e);
      for (int ax = 0; ax < d; ++ax) v *= std::pow(xi[ax], t.beta[ax]);
      out += v;
    }
    return cplx(out);
  };
  p.params = {{"kind", "riesz"}, {"sigma", sigma}};
  return p;
}

ScalarProfile modulation_profile(std::vector<double> shift) {
  ScalarProfile p;
  p.value = [shift](std::span<const double> xi) {
    double phase = 0.0;
    for (std::size_t a = 0; a < shift.size(); ++a) phase += shift[a] * xi[a];
    return std::polar(1.0, 2.0 * M_PI * phase);
  };
  p.derivative = [shift](std::span<const int> alpha, std::span<const double> xi) {
    double phase = 0.0;
    cplx factor = 1.0;
    for (std::size_t a = 0; a < shift.size(); ++a) {
      phase += shift[a] * xi[a];
      factor *= std::pow(cplx(0.0, 2.0 * M_PI * shift[a]), alpha[a]);
    }
    return factor * std::polar(1.0, 2.0 * M_PI * phase);
  };
  p.params = {{"kind", "modulation"}, {"shift", shift}};
  return p;
}

ScalarProfile hilbert_profile() {
  ScalarProfile p;
  p.value = [](std::span<const double> xi) {
    double t = xi[0];
    return t > 0 ? cplx(0.0, -1.0) : t < 0 ? cplx(0.0, 1.0) : cplx(0.0);
  };
  p.derivative = [](std::span<const int> alpha, std::span<const double> xi) {
    for (int a : alpha)
      if (a != 0) return cplx(0.0);
    double t = xi[0];
    return t > 0 ? cplx(0.0, -1.0) : t < 0 ? cplx(0.0, 1.0) : cplx(0.0);
  };
  p.params = {{"kind", "hilbert"}};
  return p;
}

ScalarProfile chirp_profile(double c) {
  ScalarProfile p;
  p.value = [c](std::span<const double> xi) {
    double r2 = 0.0;
    for (double x : xi) r2 += x * x;
    return std::polar(1.0, M_PI * c * r2);
  };
  p.params = {{"kind", "chirp"}, {"c", c}};
  return p;
}

ScalarProfile annulus_profile_indicator(int k) {
  if (k < 0) throw InvalidArgument("annulus index must be >= 0");
  ScalarProfile p;
  p.value = [k](std::span<const double> xi) {
    double r2 = 0.0;
    for (double x : xi) r2 += x * x;
    double r = std::sqrt(r2);
    double lo = k == 0 ? 0.0 : std::ldexp(1.0, k - 1), hi = std::ldexp(1.0, k + 1);
    return cplx(r >= lo && r <= hi ? 1.0 : 0.0);
  };
  p.params = {{"kind", "annulus_indicator"}, {"k", k}};
  return p;
}

ScalarProfile shell_weights_profile(std::vector<double> weights) {
  if (weights.empty()) throw InvalidArgument("shell weights need at least one entry");
  ScalarProfile p;
  p.value = [weights](std::span<const double> xi) {
    double r2 = 0.0;
    for (double x : xi) r2 += x * x;
    double r = std::sqrt(r2);
    int k = r < 1.0 ? 0 : int(std::floor(std::log2(r))) + 1;
    return cplx(k < int(weights.size()) ? weights[k] : weights.back());
  };
  p.params = {{"kind", "shell_weights"}, {"weights", weights}};
  return p;
}

OperatorSymbol scalar_symbol(const GridSpec& grid, int dim, const ScalarProfile& profile, std::string name) {
  auto value = profile.value;
  OperatorSymbol::Evaluator eval = [value, dim](std::span<const double> xi) {
    return Mat(value(xi) * Mat::Identity(dim, dim));
  };
  OperatorSymbol::Derivative deriv;
  if (profile.derivative) {
    auto d = profile.derivative;
    deriv = [d, dim](std::span<const int> alpha, std::span<const double> xi) {
      return Mat(d(alpha, xi) * Mat::Identity(dim, dim));
    };
  }
  auto params = profile.params;
  params["dim"] = dim;
  return OperatorSymbol(grid, dim, dim, eval, deriv, std::move(name), params);
}

OperatorSymbol diagonal_symbol(const GridSpec& grid, const std::vector<ScalarProfile>& entries, std::string name) {
  if (entries.empty()) throw InvalidArgument("diagonal symbol needs entries");
  int dim = int(entries.size());
  OperatorSymbol::Evaluator eval = [entries, dim](std::span<const double> xi) {
    Mat m = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) m(i, i) = entries[i].value(xi);
    return m;
  };
  bool all_deriv = true;
  for (const auto& e : entries) all_deriv = all_deriv && bool(e.derivative);
  OperatorSymbol::Derivative deriv;
  if (all_deriv)
    deriv = [entries, dim](std::span<const int> alpha, std::span<const double> xi) {
      Mat m = Mat::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) m(i, i) = entries[i].derivative(alpha, xi);
      return m;
    };
  nlohmann::json params = {{"entries", nlohmann::json::array()}};
  for (const auto& e : entries) params["entries"].push_back(e.params);
  return OperatorSymbol(grid, dim, dim, eval, deriv, std::move(name), params);
}

OperatorSymbol identity_symbol(const GridSpec& grid, int dim) {
  return scalar_symbol(grid, dim, constant_profile(1.0), "identity");
}

OperatorSymbol modulation_symbol(const GridSpec& grid, std::vector<double> shift, int dim) {
  if (int(shift.size()) != grid.dim()) throw InvalidArgument("modulation shift must have one entry per axis");
  return scalar_symbol(grid, dim, modulation_profile(std::move(shift)), "modulation");
}

OperatorSymbol riesz_symbol(const GridSpec& grid, double sigma, int dim) {
  return scalar_symbol(grid, dim, riesz_profile(sigma, grid.dim()), "riesz");
}

OperatorSymbol annulus_indicator_symbol(const GridSpec& grid, int k, int dim) {
  return scalar_symbol(grid, dim, annulus_profile_indicator(k), "annulus_indicator");
}

OperatorSymbol hilbert_symbol(const GridSpec& grid, int dim) {
  return scalar_symbol(grid, dim, hilbert_profile(), "hilbert");
}

ScalarProfile profile_from_json(const nlohmann::json& c, int d) {
  std::string kind = c.at("kind").get<std::string>();
  if (kind == "constant") {
    const auto& v = c.at("value");
    return constant_profile(v.is_array() ? cplx(v[0].get<double>(), v[1].get<double>()) : cplx(v.get<double>()));
  }
  if (kind == "riesz") return riesz_profile(c.at("sigma").get<double>(), d);
  if (kind == "modulation") return modulation_profile(c.at("shift").get<std::vector<double>>());
  if (kind == "hilbert") return hilbert_profile();
  if (kind == "annulus_indicator") return annulus_profile_indicator(c.at("k").get<int>());
  if (kind == "shell_weights") return shell_weights_profile(c.at("weights").get<std::vector<double>>());
  if (kind == "chirp") return chirp_profile(c.at("c").get<double>());
  throw InvalidArgument("unknown scalar profile '" + kind + "'");
}

OperatorSymbol symbol_from_json(const nlohmann::json& c, const GridSpec& grid) {
  std::string name = c.at("name").get<std::string>();
  int dim = c.value("dim", 1);
  if (name == "identity") return identity_symbol(grid, dim);
  if (name == "modulation") return modulation_symbol(grid, c.at("shift").get<std::vector<double>>(), dim);
  if (name == "riesz") return riesz_symbol(grid, c.at("sigma").get<double>(), dim);
  if (name == "annulus_indicator") return annulus_indicator_symbol(grid, c.at("k").get<int>(), dim);
  if (name == "hilbert") return hilbert_symbol(grid, dim);
  if (name == "shell_weights")
    return scalar_symbol(grid, dim, shell_weights_profile(c.at("weights").get<std::vector<double>>()), name);
  if (name == "chirp") return scalar_symbol(grid, dim, chirp_profile(c.at("c").get<double>()), name);
  if (name == "diagonal") {
    std::vector<ScalarProfile> entries;
    for (const auto& e : c.at("entries")) entries.push_back(profile_from_json(e, grid.dim()));
    return diagonal_symbol(grid, entries, name);
  }
  if (name == "file") {
    auto field = OperatorField::from_json(nlohmann::json::parse(read_file(c.at("path").get<std::string>())));
    if (!(field.grid == grid)) throw InvalidArgument("stored symbol lives on a different grid");
    return OperatorSymbol(std::move(field), c.at("path").get<std::string>());
  }
  throw InvalidArgument("unknown symbol '" + name + "'");
}

}  // namespace besov
