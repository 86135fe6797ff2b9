#include <algorithm>
#include <cmath>
#include <sstream>

#include "besov/errors.hpp"
#include "besov/extrapolation.hpp"
#include "besov/fourier.hpp"
#include "besov/norms.hpp"
#include "besov/partition.hpp"

namespace besov {

namespace {

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(x.size());
  my /= double(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

std::string csv_number(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

nlohmann::json SweepReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows)
    rows_json.push_back({{"p", exponent_to_json(r.p)},
                         {"q", exponent_to_json(r.q)},
                         {"n", r.n},
                         {"estimate", r.estimate},
                         {"evaluations", r.evaluations},
                         {"on_line", r.on_line}});
  return {{"inv_r", inv_r}, {"rows", rows_json}, {"pairs", pairs}, {"stable", stable}};
}

std::string SweepReport::to_csv() const {
  std::ostringstream os;
  os << "p,q,n,estimate,evaluations,on_line\n";
  for (const auto& r : rows)
    os << csv_number(r.p) << ',' << csv_number(r.q) << ',' << r.n << ',' << csv_number(r.estimate) << ','
       << r.evaluations << ',' << (r.on_line ? "true" : "false") << '\n';
  return os.str();
}

SweepReport extrapolation_sweep(const OperatorSymbol& m, double r, const std::vector<std::pair<double, double>>& pairs,
                                const ValueSpace& from, const ValueSpace& to, const SearchBudget& budget,
                                const GaussianSampler& sampler, const SweepOptions& options) {
  if (pairs.empty()) throw InvalidArgument("sweep needs at least one (p, q) pair");
  if (options.grids.empty()) throw InvalidArgument("sweep needs at least one grid size");
  SweepReport rep;
  rep.inv_r = reciprocal(r);
  rep.pairs = nlohmann::json::array();
  int d = m.grid().dim();

  std::vector<double> log_p_dist, log_q, log_est;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [p, q] = pairs[i];
    if (!(p >= 1.0 && q >= p)) throw InvalidArgument("sweep pairs need 1 <= p <= q");
    bool on_line = std::abs(reciprocal(p) - reciprocal(q) - rep.inv_r) < 1e-9;
    if (!on_line && options.strict_line) throw InvalidArgument("pair (p, q) is off the line 1/p - 1/q = 1/r");
    std::vector<double> est, logn, loge;
    for (std::size_t g = 0; g < options.grids.size(); ++g) {
      GridSpec grid(d, options.grids[g], options.period);
      auto mg = m.on_grid(grid);
      auto e = estimate_multiplier_norm(mg, p, q, from, to, budget, sampler.child(i * 64 + g));
      rep.rows.push_back({p, q, options.grids[g], e.value, e.evaluations, on_line});
      est.push_back(e.value);
      logn.push_back(std::log2(double(options.grids[g])));
      loge.push_back(std::log2(std::max(e.value, 1e-300)));
    }
    double lo = *std::min_element(est.begin(), est.end());
    double hi = *std::max_element(est.begin(), est.end());
    bool finite = std::all_of(est.begin(), est.end(), [](double v) { return std::isfinite(v); });
    double growth = est.front() > 0.0 ? est.back() / est.front() : kInf;
    bool unstable = !finite || growth >= options.instability_factor || (lo > 0.0 && hi / lo >= options.instability_factor);
    rep.stable = rep.stable && !unstable;
    rep.pairs.push_back({{"p", exponent_to_json(p)},
                         {"q", exponent_to_json(q)},
                         {"on_line", on_line},
                         {"estimates", est},
                         {"variation", lo > 0.0 ? hi / lo - 1.0 : kInf},
                         {"refinement_growth", growth},
                         {"log_growth_per_octave", slope(logn, loge)},
                         {"unstable", unstable}});
    if (p > 1.0) log_p_dist.push_back(std::log(1.0 / (p - 1.0)));
    if (std::isfinite(q)) log_q.push_back(std::log(q));
    log_est.push_back(std::log(std::max(est.back(), 1e-300)));
  }
  // Endpoint trends on the finest grid, informational only.
  nlohmann::json trends = nlohmann::json::object();
  if (log_p_dist.size() == log_est.size()) trends["exponent_vs_inverse_p_minus_1"] = slope(log_p_dist, log_est);
  if (log_q.size() == log_est.size()) trends["exponent_vs_q"] = slope(log_q, log_est);
  rep.pairs.push_back({{"endpoint_trends", trends}});
  return rep;
}

nlohmann::json SharpnessReport::to_json() const {
  return {{"sigma", sigma},         {"d_over_r", d_over_r}, {"grids", grids},
          {"top_levels", top_levels}, {"estimates", estimates}, {"refined", refined},
          {"growth", growth},       {"expected_growth", expected_growth}, {"verdict", verdict}};
}

SharpnessReport sharpness_probe(double sigma, double p, double q, int d, const std::vector<int>& grids,
                                const SearchBudget& budget, const GaussianSampler& sampler, double tolerance,
                                double period) {
  if (grids.size() < 2) throw InvalidArgument("sharpness probe needs at least two grids");
  if (!(p >= 1.0 && q >= p)) throw InvalidArgument("sharpness probe needs 1 <= p <= q");
  SharpnessReport rep;
  rep.sigma = sigma;
  rep.d_over_r = d * (reciprocal(p) - reciprocal(q));
  rep.expected_growth = std::pow(2.0, rep.d_over_r - sigma);
  rep.grids = grids;
  auto space = ValueSpace::hilbert(1);
  for (std::size_t g = 0; g < grids.size(); ++g) {
    GridSpec grid(d, grids[g], period);
    auto part = build_partition(grid);
    int k = part.k_max();
    auto psi = part.psi_hat(k);
    GridFunction hat(grid, 1, Domain::frequency);
    for (std::size_t node = 0; node < grid.nodes(); ++node) hat(node, 0) = psi[node];
    auto f = idft(hat);
    auto T = riesz_symbol(grid, sigma);
    rep.top_levels.push_back(k);
    rep.estimates.push_back(multiplier_ratio(T, f, p, q, space, space));
    auto mask = annulus_mask(grid, std::ldexp(1.0, k - 1), std::ldexp(1.0, k + 1));
    auto est = estimate_multiplier_norm(T, p, q, space, space, budget, sampler.child(g), mask);
    rep.refined.push_back(std::max(est.value, rep.estimates.back()));
  }
  for (std::size_t g = 1; g < grids.size(); ++g) {
    int dk = rep.top_levels[g] - rep.top_levels[g - 1];
    if (dk <= 0) throw InvalidArgument("grids must add dyadic levels");
    rep.growth.push_back(std::pow(rep.estimates[g] / rep.estimates[g - 1], 1.0 / dk));
  }
  // Only the subcritical case is asserted; at or above d/r the growth is informational.
  if (sigma < rep.d_over_r - 1e-12)
    for (double gr : rep.growth)
      if (std::abs(gr / rep.expected_growth - 1.0) > tolerance) rep.verdict = false;
  return rep;
}

}  // namespace besov
