#include "besov/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "besov/errors.hpp"
#include "besov/extrapolation.hpp"
#include "besov/fourier.hpp"
#include "besov/io.hpp"
#include "besov/norms.hpp"
#include "besov/verify.hpp"

namespace besov {

namespace {

using nlohmann::json;

// Reads fields of a JSON object and records every default it falls back to, so the
// object ends up holding the fully resolved parameter set.
class Params {
 public:
  Params(json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (j_.is_null()) j_ = json::object();
    if (!j_.is_object()) throw ConfigError("schema: '" + where_ + "' must be an object");
  }

  template <class T>
  T get(const char* key, T fallback) {
    if (!j_.contains(key)) j_[key] = fallback;
    return read<T>(key);
  }
  template <class T>
  T require(const char* key) {
    if (!j_.contains(key)) throw ConfigError("schema: missing field '" + where_ + "." + key + "'");
    return read<T>(key);
  }
  double exponent(const char* key, double fallback) {
    if (!j_.contains(key)) j_[key] = exponent_to_json(fallback);
    return exponent_from_json(j_[key]);
  }
  double exponent(const char* key) {
    if (!j_.contains(key)) throw ConfigError("schema: missing field '" + where_ + "." + key + "'");
    return exponent_from_json(j_[key]);
  }
  bool has(const char* key) const { return j_.contains(key); }
  json& sub(const char* key) {
    if (!j_.contains(key)) j_[key] = json::object();
    return j_[key];
  }
  json& raw() { return j_; }

 private:
  template <class T>
  T read(const char* key) {
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("schema: field '" + where_ + "." + key + "' has the wrong type");
    }
  }

  json& j_;
  std::string where_;
};

SearchBudget budget_from(json& j, SearchBudget fallback, const std::string& where) {
  Params p(j, where);
  SearchBudget b;
  b.restarts = p.get("restarts", fallback.restarts);
  b.max_family = p.get("max_family", fallback.max_family);
  b.steps = p.get("steps", fallback.steps);
  b.search_samples = p.get("search_samples", fallback.search_samples);
  if (b.restarts < 1 || b.max_family < 1 || b.steps < 0 || b.search_samples < 2)
    throw ConfigError("schema: invalid search budget in '" + where + "'");
  return b;
}

ValueSpace space_from(json& j, const std::string& where) {
  Params p(j, where);
  p.get<std::string>("kind", "lp");
  p.exponent("p", 2.0);
  p.get("dim", 1);
  return ValueSpace::from_json(j);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& path) {
  std::filesystem::path p(path);
  return p.is_relative() && !base.empty() ? base / p : p;
}

// Test functions referenced by configurations.
GridFunction function_from(json& spec, const GridSpec& grid, int dim, const std::filesystem::path& base) {
  Params p(spec, "function");
  auto kind = p.require<std::string>("kind");
  if (kind == "file") {
    auto f = grid_function_from_json(json::parse(read_file(resolve(base, p.require<std::string>("path")))));
    if (!(f.grid() == grid)) throw ConfigError("dimension mismatch: stored function lives on another grid");
    if (f.value_dim() != dim) throw ConfigError("dimension mismatch: stored function has another value dimension");
    return f.domain() == Domain::physical ? f : idft(f);
  }
  if (kind == "mode") {
    auto freq = p.require<std::vector<int>>("freq");
    if (int(freq.size()) != grid.dim()) throw ConfigError("dimension mismatch: mode frequency arity");
    GridFunction hat(grid, dim, Domain::frequency);
    auto node = grid.node_of(freq);
    for (int c = 0; c < dim; ++c) hat(node, c) = 1.0;
    return idft(hat);
  }
  if (kind == "spike") {
    auto at = p.get("at", std::vector<int>(std::size_t(grid.dim()), 0));
    if (int(at.size()) != grid.dim()) throw ConfigError("dimension mismatch: spike position arity");
    GridFunction f(grid, dim);
    f(grid.node_of(at), 0) = 1.0 / grid.cell_measure(Domain::physical);
    return f;
  }
  std::uint64_t seed = p.get<std::uint64_t>("seed", 1);
  FrequencyMask mask;
  if (kind == "band") {
    int level = p.require<int>("level");
    mask = level == 0 ? ball_mask(grid, 2.0)
                      : annulus_mask(grid, std::ldexp(1.0, level - 1), std::ldexp(1.0, level + 1));
  } else if (kind == "cube") {
    mask = cube_mask(grid, p.require<double>("a"), p.require<double>("b"));
  } else if (kind == "noise") {
    mask = full_mask(grid);
  } else {
    throw ConfigError("schema: unknown function kind '" + kind + "'");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  GridFunction hat(grid, dim, Domain::frequency);
  for (std::size_t node = 0; node < grid.nodes(); ++node)
    if (mask[node])
      for (int c = 0; c < dim; ++c) hat(node, c) = cplx(normal(rng), normal(rng));
  return idft(hat);
}

FrequencyMask support_from(json& spec, const GridSpec& grid) {
  if (spec.is_null()) return {};
  Params p(spec, "support");
  auto kind = p.require<std::string>("kind");
  if (kind == "all") return {};
  if (kind == "cube") return cube_mask(grid, p.require<double>("a"), p.require<double>("b"));
  if (kind == "annulus") return annulus_mask(grid, p.require<double>("lo"), p.require<double>("hi"));
  if (kind == "ball") return ball_mask(grid, p.require<double>("radius"));
  throw ConfigError("schema: unknown support kind '" + kind + "'");
}

Summability summability_from(Params& p) {
  return {p.exponent("u", kInf), p.exponent("v", 2.0), p.exponent("w", 2.0)};
}

std::string sequence_csv(const std::vector<double>& values, int first) {
  std::ostringstream os;
  os.precision(17);
  os << "k,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) os << first + int(i) << ',' << values[i] << '\n';
  return os.str();
}

struct Context {
  json& config;
  Params top;
  Params params;
  GridSpec grid;
  std::filesystem::path base;
  std::uint64_t seed;
  int samples;
  double tolerance;
  SearchBudget gamma_budget;
  SearchBudget witness_budget;
  json result = json::object();
  std::vector<VerificationReport> reports;
  std::optional<std::string> csv;

  GaussianSampler sampler() const { return GaussianSampler(seed, samples); }

  ValueSpace from() { return space_from(config["from"], "from"); }
  ValueSpace to() { return space_from(config["to"], "to"); }

  OperatorSymbol symbol(const ValueSpace& x, const ValueSpace& y) {
    if (!config.contains("symbol")) throw ConfigError("schema: missing field 'symbol'");
    json& s = config["symbol"];
    Params(s, "symbol").get("dim", x.dim());
    json spec = s;  // the report keeps the path as written
    if (spec.contains("path") && spec.value("name", "") == "file")
      spec["path"] = resolve(base, spec["path"].get<std::string>()).string();
    auto m = symbol_from_json(spec, grid);
    if (m.cols() != x.dim() || m.rows() != y.dim())
      throw ConfigError("dimension mismatch: symbol is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                        " but the spaces have dimensions " + std::to_string(x.dim()) + " and " +
                        std::to_string(y.dim()));
    return m;
  }

  VerifyOptions verify_options() const { return {gamma_budget, witness_budget, tolerance}; }
};

void op_partition(Context& c) {
  int smooth = c.params.get("smoothness", 3);
  auto part = build_partition(c.grid, smooth);
  const auto& radii = part.frequency_norms();
  double sum_err = 0.0;
  long leak = 0;
  for (std::size_t node = 0; node < c.grid.nodes(); ++node) {
    double s = 0.0;
    for (int k = 0; k <= part.k_max(); ++k) {
      double v = part.phi_hat(k)[node];
      s += v;
      double lo = k == 0 ? 0.0 : std::ldexp(1.0, k - 1), hi = std::ldexp(1.0, k + 1);
      if (v != 0.0 && (radii[node] < lo || radii[node] > hi)) ++leak;
    }
    if (radii[node] <= part.top_radius()) sum_err = std::max(sum_err, std::abs(s - 1.0));
  }
  c.result = part.to_json();
  c.result["max_sum_error"] = sum_err;
  c.result["leaking_samples"] = leak;
  auto r = VerificationReport::make("partition.sum", sum_err, 1e-12, 0.0, {{"leaking_samples", leak}});
  r.verdict = sum_err < 1e-12 && leak == 0;
  c.reports.push_back(r);
  if (c.grid.dim() == 1) {
    std::ostringstream os;
    os.precision(17);
    os << "xi";
    for (int k = 0; k <= part.k_max(); ++k) os << ",phi_" << k;
    os << '\n';
    for (std::size_t node = 0; node < c.grid.nodes(); ++node) {
      os << c.grid.frequency(node, 0);
      for (int k = 0; k <= part.k_max(); ++k) os << ',' << part.phi_hat(k)[node];
      os << '\n';
    }
    c.csv = os.str();
  }
}

void op_besov_norm(Context& c) {
  auto x = c.from();
  BesovParams bp{c.params.get("s", 0.0), c.params.exponent("p", 2.0), c.params.exponent("v", 2.0)};
  bool homogeneous = c.params.get("homogeneous", false);
  auto part = build_partition(c.grid, c.params.get("smoothness", 3));
  auto f = function_from(c.params.sub("function"), c.grid, x.dim(), c.base);
  auto seq = homogeneous ? homogeneous_besov_sequence(f, bp, part, x) : besov_sequence(f, bp, part, x);
  double norm = homogeneous ? homogeneous_besov_norm(f, bp, part, x) : besov_norm(f, bp, part, x);
  int first = homogeneous ? part.k_min() : 0;
  c.result = {{"norm", norm}, {"sequence", seq}, {"first_level", first}, {"lp_norm", lp_norm(f, bp.p, x)}};
  c.csv = sequence_csv(seq, first);
}

void op_multiplier(Context& c) {
  auto x = c.from(), y = c.to();
  auto m = c.symbol(x, y);
  double p = c.params.exponent("p", 2.0), q = c.params.exponent("q", 2.0);
  json& sup = c.params.raw()["support"];
  auto mask = support_from(sup, c.grid);
  auto est = estimate_multiplier_norm(m, p, q, x, y, c.witness_budget, c.sampler(), mask);
  c.result = est.to_json();
}

void op_gamma(Context& c) {
  auto quantity = c.params.require<std::string>("quantity");
  auto sampler = c.sampler();
  if (quantity == "type" || quantity == "cotype") {
    auto x = c.from();
    double e = c.params.exponent(quantity == "type" ? "p" : "q", 2.0);
    auto search = quantity == "type" ? type_constant_lower(x, e, c.gamma_budget, sampler)
                                     : cotype_constant_lower(x, e, c.gamma_budget, sampler);
    c.result = search.to_json();
    auto known = quantity == "type" ? x.type_constant(e) : x.cotype_constant(e);
    if (known) {
      double tol = c.tolerance + 3.0 * search.estimate.std_error / std::max(search.estimate.value, 1e-300);
      c.reports.push_back(VerificationReport::make(quantity + "_constant", search.estimate.value, *known, tol,
                                                   {{"space", x.to_json()}, {"exponent", exponent_to_json(e)}}));
    }
  } else if (quantity == "gamma_bound") {
    auto x = c.from(), y = c.to();
    auto m = c.symbol(x, y);
    json& sup = c.params.raw()["support"];
    auto mask = support_from(sup, c.grid);
    auto family = m.restricted(mask.empty() ? full_mask(c.grid) : mask);
    c.result = gamma_bound(family, x, y, c.gamma_budget, sampler).to_json();
  } else if (quantity == "function_norm") {
    auto x = c.from();
    auto f = function_from(c.params.sub("function"), c.grid, x.dim(), c.base);
    auto g = gamma_function_norm(f, x, sampler);
    c.result = {{"gamma_norm", g.to_json()}, {"l2_norm", lp_norm(f, 2.0, x)}};
    if (x.is_hilbert()) {
      double l2 = lp_norm(f, 2.0, x);
      auto r = VerificationReport::make("gamma_equals_l2", std::abs(g.value - l2), 3.0 * g.std_error, 0.0,
                                        {{"gamma_norm", g.value}, {"l2_norm", l2}});
      c.reports.push_back(r);
    }
  } else {
    throw ConfigError("schema: unknown gamma quantity '" + quantity + "'");
  }
}

OperatorField kernel_from(Context& c, const ValueSpace& x, const ValueSpace& y) {
  auto m = c.symbol(x, y);
  int levels = c.params.get("levels", max_truncation_levels(c.grid));
  return kernel_of_symbol(m, levels);
}

void op_hormander(Context& c) {
  auto x = c.from(), y = c.to();
  auto kernel = kernel_from(c, x, y);
  double a = c.params.exponent("a", 1.0);
  auto est = hormander_constant(kernel, a, x, y);
  c.result = est.to_json();
  if (c.params.get("adjoint", false)) {
    OperatorField adj(kernel.grid, kernel.cols, kernel.rows, Domain::physical);
    // K*(s) = K(-s)^* is the kernel of the adjoint multiplier.
    std::vector<int> idx(std::size_t(c.grid.dim()));
    for (std::size_t node = 0; node < c.grid.nodes(); ++node) {
      for (int ax = 0; ax < c.grid.dim(); ++ax) idx[ax] = -c.grid.index(node, ax);
      adj.values[node] = kernel.values[c.grid.node_of(idx)].adjoint();
    }
    auto xd = ValueSpace::lp(conjugate_exponent(y.exponent()), y.dim());
    auto yd = ValueSpace::lp(conjugate_exponent(x.exponent()), x.dim());
    c.result = {{"kernel", est.to_json()}, {"adjoint", hormander_constant(adj, a, xd, yd).to_json()}};
  }
}

void op_mihlin(Context& c) {
  auto x = c.from(), y = c.to();
  auto m = c.symbol(x, y);
  MihlinOptions opts;
  auto mode = c.params.get<std::string>("mode", "oracle");
  if (mode == "oracle") {
    opts.mode = DerivativeMode::oracle;
  } else if (mode == "finite_difference") {
    opts.mode = DerivativeMode::finite_difference;
    opts.fd_step = c.params.get("fd_step", opts.fd_step);
  } else {
    throw ConfigError("schema: mode must be 'oracle' or 'finite_difference'");
  }
  opts.radial_nodes = c.params.get("radial_nodes", opts.radial_nodes);
  opts.angular_nodes = c.params.get("angular_nodes", opts.angular_nodes);
  double r = c.params.exponent("r", kInf), rho = c.params.exponent("rho", 2.0);
  auto m1 = mihlin_check(m, r, rho, x, y, opts);
  c.result = {{"M1", m1.to_json()}};
  if (c.params.get("dual", true)) c.result["M2"] = mihlin_check_dual(m, r, rho, x, y, opts).to_json();
}

std::vector<GridFunction> probes_from(Context& c, int dim) {
  json& spec = c.params.sub("probes");
  Params p(spec, "probes");
  auto kind = p.get<std::string>("kind", "default");
  if (kind == "default") return default_weak_type_probes(c.grid, dim, p.get<std::uint64_t>("seed", c.seed));
  if (kind == "list") {
    std::vector<GridFunction> out;
    for (auto& f : spec.at("functions")) out.push_back(function_from(f, c.grid, dim, c.base));
    return out;
  }
  throw ConfigError("schema: unknown probe kind '" + kind + "'");
}

void op_cz(Context& c) {
  auto x = c.from();
  double alpha = c.params.require<double>("alpha");
  double a = c.params.exponent("a", 1.0);
  double B = c.params.get("B", 1.0);
  auto probes = probes_from(c, x.dim());
  json checks = json::array();
  bool all_ok = true;
  double worst_sup = 0.0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    auto& f = probes[i];
    double l1 = lp_norm(f, 1.0, x);
    if (l1 > 1.0) f *= cplx(1.0 / l1);
    auto dec = cz_decompose(f, alpha, a, B, x);
    auto chk = check_cz(dec, f, x);
    bool ok = chk.ok() && !dec.root_selected;
    all_ok = all_ok && ok;
    worst_sup = std::max(worst_sup, chk.good_sup / chk.good_sup_bound);
    auto j = chk.to_json();
    j["cubes"] = dec.cubes.size();
    j["root_selected"] = dec.root_selected;
    checks.push_back(j);
    if (i == 0) c.result["first_decomposition"] = dec.diagnostics();
  }
  c.result["checks"] = checks;
  auto r = VerificationReport::make("cz.properties", worst_sup, 1.0, 1e-12, {{"inputs", probes.size()}});
  r.verdict = all_ok;
  c.reports.push_back(r);
}

void op_weak_type(Context& c) {
  auto x = c.from(), y = c.to();
  auto m = c.symbol(x, y);
  int levels = c.params.get("levels", max_truncation_levels(c.grid));
  double a = c.params.exponent("a", 1.0);
  double p0 = c.params.exponent("p0", 2.0), q0 = c.params.exponent("q0", 2.0);
  auto probes = probes_from(c, x.dim());
  auto rep = verify_weak_type(m, levels, a, p0, q0, probes, x, y, c.witness_budget, c.sampler(), c.tolerance);
  c.result = {{"C_da", weak_type_constant(c.grid.dim(), a)}};
  c.reports.push_back(rep);
}

std::vector<std::pair<double, double>> pairs_from(Params& p) {
  std::vector<std::pair<double, double>> out;
  auto& raw = p.raw();
  if (!raw.contains("pairs") || !raw["pairs"].is_array()) throw ConfigError("schema: 'params.pairs' must be a list");
  for (const auto& pq : raw["pairs"]) {
    if (!pq.is_array() || pq.size() != 2) throw ConfigError("schema: each pair must be [p, q]");
    out.push_back({exponent_from_json(pq[0]), exponent_from_json(pq[1])});
  }
  return out;
}

void op_sweep(Context& c) {
  auto x = c.from(), y = c.to();
  auto m = c.symbol(x, y);
  SweepOptions opts;
  opts.grids = c.params.get("grids", opts.grids);
  opts.period = c.grid.period();
  opts.strict_line = c.params.get("strict_line", opts.strict_line);
  opts.instability_factor = c.params.get("instability_factor", opts.instability_factor);
  double r = c.params.exponent("r");
  auto rep = extrapolation_sweep(m, r, pairs_from(c.params), x, y, c.witness_budget, c.sampler(), opts);
  c.result = rep.to_json();
  c.csv = rep.to_csv();
  bool expect_stable = c.params.get("expect_stable", true);
  double worst = 1.0;
  for (const auto& pj : rep.pairs)
    if (pj.contains("variation")) worst = std::max(worst, 1.0 + pj["variation"].get<double>());
  auto v = VerificationReport::make("sweep.stability", worst, opts.instability_factor, 0.0,
                                    {{"expect_stable", expect_stable}});
  v.verdict = rep.stable == expect_stable;
  c.reports.push_back(v);
}

void op_sharpness(Context& c) {
  double sigma = c.params.require<double>("sigma");
  double p = c.params.exponent("p"), q = c.params.exponent("q");
  auto grids = c.params.get("grids", std::vector<int>{128, 256, 512});
  double tol = c.params.get("growth_tolerance", 0.1);
  auto rep = sharpness_probe(sigma, p, q, c.grid.dim(), grids, c.witness_budget, c.sampler(), tol, c.grid.period());
  c.result = rep.to_json();
  std::ostringstream os;
  os.precision(17);
  os << "n,top_level,estimate,refined\n";
  for (std::size_t i = 0; i < rep.grids.size(); ++i)
    os << rep.grids[i] << ',' << rep.top_levels[i] << ',' << rep.estimates[i] << ',' << rep.refined[i] << '\n';
  c.csv = os.str();
  double worst = 0.0;
  for (double g : rep.growth) worst = std::max(worst, std::abs(g / rep.expected_growth - 1.0));
  auto v = VerificationReport::make("sharpness.growth", worst, tol, 0.0, {{"expected_growth", rep.expected_growth}});
  v.verdict = rep.verdict;
  c.reports.push_back(v);
}

void op_verify(Context& c, const std::string& which) {
  auto opts = c.verify_options();
  auto sampler = c.sampler();
  if (which == "lemma42") {
    auto x = c.from();
    double a = c.params.require<double>("a"), b = c.params.require<double>("b");
    double p = c.params.exponent("p", 2.0), q = c.params.exponent("q", 2.0);
    json& fspec = c.params.sub("function");
    if (fspec.empty()) fspec = {{"kind", "cube"}, {"a", a}, {"b", b}, {"seed", c.seed}};
    auto f = function_from(fspec, c.grid, x.dim(), c.base);
    for (auto& r : check_lemma42(f, a, b, p, q, x, sampler)) {
      r.tolerance = std::max(r.tolerance, c.tolerance);
      r.verdict = std::isfinite(r.ratio) && r.ratio <= 1.0 + r.tolerance;
      c.reports.push_back(r);
    }
    return;
  }
  auto x = c.from(), y = c.to();
  auto m = c.symbol(x, y);
  if (which == "prop43") {
    c.reports.push_back(verify_prop43(m, c.params.require<double>("a"), c.params.require<double>("b"),
                                      c.params.exponent("p", 2.0), c.params.exponent("q", 2.0), x, y, opts, sampler));
    return;
  }
  auto part = build_partition(c.grid, c.params.get("smoothness", 3));
  double p = c.params.exponent("p", 2.0), q = c.params.exponent("q", 2.0);
  if (which == "thm46") {
    c.reports.push_back(verify_thm46(m, p, q, x, y, part, opts, sampler));
    return;
  }
  double s = c.params.get("s", 0.0);
  auto sum = summability_from(c.params);
  if (which == "thm44" || which == "thm45") {
    double sigma = c.params.get("sigma", 0.0);
    auto fn = which == "thm44" ? verify_thm44 : verify_thm45;
    c.reports.push_back(fn(m, s, sigma, p, q, sum, x, y, part, opts, sampler));
  } else if (which == "prop34") {
    c.reports.push_back(verify_prop34(m, s, p, q, sum, x, y, part, opts, sampler));
  } else {
    throw ConfigError("unknown operation 'verify." + which + "'");
  }
}

const std::set<std::string> kTopLevelKeys = {"schema_version", "name",  "description", "operation", "seed",
                                             "samples",        "tolerance", "grid",     "from",      "to",
                                             "symbol",         "params", "budget",      "witness_budget"};

}  // namespace

const std::vector<std::string>& operation_names() {
  static const std::vector<std::string> names = {
      "partition",     "besov-norm",    "multiplier",    "gamma",          "hormander",     "mihlin",
      "cz",            "weak-type",     "sweep",         "sharpness",      "verify.thm44",  "verify.thm45",
      "verify.thm46",  "verify.prop34", "verify.prop43", "verify.lemma42"};
  return names;
}

ScenarioResult execute_scenario(json config, const RunOverrides& overrides, const std::filesystem::path& base_dir) {
  if (!config.is_object()) throw ConfigError("schema: a scenario must be a JSON object");
  for (auto it = config.begin(); it != config.end(); ++it)
    if (!kTopLevelKeys.count(it.key())) throw ConfigError("schema: unknown field '" + it.key() + "'");
  Params top(config, "scenario");
  int version = top.require<int>("schema_version");
  if (version != kSchemaVersion)
    throw ConfigError("schema: unsupported schema_version " + std::to_string(version) + " (expected " +
                      std::to_string(kSchemaVersion) + ")");
  auto name = top.require<std::string>("name");
  if (name.empty() || name.find('/') != std::string::npos) throw ConfigError("schema: name must be a plain file stem");
  auto op = top.require<std::string>("operation");
  const auto& names = operation_names();
  if (std::find(names.begin(), names.end(), op) == names.end())
    throw ConfigError("unknown operation '" + op + "'");
  if (!config.contains("seed")) throw ConfigError("schema: missing field 'scenario.seed' (seeds are mandatory)");
  if (overrides.seed) config["seed"] = *overrides.seed;
  if (overrides.tolerance) config["tolerance"] = *overrides.tolerance;

  Params grid_params(config["grid"], "grid");
  GridSpec grid(grid_params.get("d", 1), grid_params.get("N", 128), grid_params.get("L", 1.0));
  auto seed = top.require<std::uint64_t>("seed");
  int samples = top.get("samples", 20000);
  double tolerance = top.get("tolerance", 0.05);
  auto gb = budget_from(config["budget"], SearchBudget{}, "budget");
  auto wb = budget_from(config["witness_budget"], SearchBudget::witness_default(), "witness_budget");
  Context c{config, Params(config, "scenario"), Params(config["params"], "params"), grid, base_dir, seed, samples,
            tolerance, gb, wb, json::object(), {}, std::nullopt};

  if (op == "partition") op_partition(c);
  else if (op == "besov-norm") op_besov_norm(c);
  else if (op == "multiplier") op_multiplier(c);
  else if (op == "gamma") op_gamma(c);
  else if (op == "hormander") op_hormander(c);
  else if (op == "mihlin") op_mihlin(c);
  else if (op == "cz") op_cz(c);
  else if (op == "weak-type") op_weak_type(c);
  else if (op == "sweep") op_sweep(c);
  else if (op == "sharpness") op_sharpness(c);
  else op_verify(c, op.substr(std::string("verify.").size()));

  ScenarioResult out;
  out.name = name;
  out.operation = op;
  out.csv = c.csv;
  json reports = json::array();
  for (const auto& r : c.reports) {
    reports.push_back(r.to_json());
    out.passed = out.passed && r.verdict;
  }
  out.report = {{"schema_version", kSchemaVersion},
                {"scenario", name},
                {"operation", op},
                {"config", config},
                {"result", c.result},
                {"reports", reports},
                {"verdict", c.reports.empty() ? "none" : (out.passed ? "pass" : "fail")}};
  return out;
}

namespace {

struct Outcome {
  int status = 1;
  std::string name;
  std::string verdict = "error";
  std::string diagnostic;
  std::vector<std::pair<std::string, bool>> checks;
};

Outcome run_one(const std::filesystem::path& config_path, const RunOverrides& overrides,
                const std::filesystem::path& out_dir, const std::optional<std::string>& operation,
                ScenarioResult* keep) {
  Outcome o;
  o.name = config_path.stem().string();
  try {
    json config;
    try {
      config = json::parse(read_file(config_path));
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("parse: ") + e.what());
    }
    if (operation && config.value("operation", std::string()) != *operation)
      throw ConfigError("operation mismatch: command expects '" + *operation + "' but the config declares '" +
                        config.value("operation", std::string()) + "'");
    auto res = execute_scenario(std::move(config), overrides, config_path.parent_path());
    o.name = res.name;
    std::filesystem::create_directories(out_dir);
    atomic_write(out_dir / (res.name + ".json"), dump_json(res.report));
    if (res.csv) atomic_write(out_dir / (res.name + ".csv"), *res.csv);
    for (const auto& r : res.report["reports"]) o.checks.push_back({r["check"], r["verdict"] == "pass"});
    o.status = res.exit_code();
    o.verdict = res.report["verdict"];
    if (keep) *keep = std::move(res);
  } catch (const ConfigError& e) {
    o.diagnostic = std::string("error: ") + e.what();
  } catch (const json::exception& e) {
    o.diagnostic = std::string("error: schema: ") + e.what();
  } catch (const InvalidArgument& e) {
    o.diagnostic = std::string("error: invalid argument: ") + e.what();
  } catch (const Unsupported& e) {
    o.diagnostic = std::string("error: unsupported: ") + e.what();
  } catch (const std::exception& e) {
    o.diagnostic = std::string("error: ") + e.what();
  }
  return o;
}

}  // namespace

int run_scenario(const std::filesystem::path& config_path, const RunOverrides& overrides,
                 const std::filesystem::path& out_dir, OutputFormat format, std::ostream& out, std::ostream& err,
                 const std::optional<std::string>& operation) {
  ScenarioResult res;
  auto o = run_one(config_path, overrides, out_dir, operation, &res);
  if (o.status == 1) {
    err << o.diagnostic << '\n';
    return 1;
  }
  if (format == OutputFormat::csv) {
    if (!res.csv) {
      err << "error: operation '" << res.operation << "' has no tabular output\n";
      return 1;
    }
    out << *res.csv;
  } else {
    out << dump_json(res.report);
  }
  return o.status;
}

int run_suite(const std::filesystem::path& dir, const RunOverrides& overrides, const std::filesystem::path& out_dir,
              int jobs, std::ostream& out, std::ostream& err) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(dir))
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    err << "error: no scenario files in " << dir.string() << '\n';
    return 1;
  }
  std::vector<Outcome> outcomes(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < files.size();)
      outcomes[i] = run_one(files[i], overrides, out_dir, std::nullopt, nullptr);
  };
  int n = std::max(1, std::min<int>(jobs, int(files.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  json matrix = json::array();
  bool error = false, failed = false;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto& o = outcomes[i];
    json checks = json::object();
    for (const auto& [check, ok] : o.checks) checks[check] = ok ? "pass" : "fail";
    json row = {{"file", files[i].filename().string()}, {"scenario", o.name}, {"status", o.status},
                {"verdict", o.verdict}, {"checks", checks}};
    if (!o.diagnostic.empty()) row["diagnostic"] = o.diagnostic;
    matrix.push_back(row);
    error = error || o.status == 1;
    failed = failed || o.status == 2;
    out << o.name << ": " << o.verdict << '\n';
    if (!o.diagnostic.empty()) err << files[i].filename().string() << ": " << o.diagnostic << '\n';
  }
  int status = error ? 1 : (failed ? 2 : 0);
  std::filesystem::create_directories(out_dir);
  atomic_write(out_dir / "suite.json", dump_json({{"schema_version", kSchemaVersion}, {"status", status},
                                                  {"scenarios", matrix}}));
  return status;
}

}  // namespace besov
