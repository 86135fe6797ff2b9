// Acceptance gate: one PASS/FAIL line per criterion. Exit status 0 iff every criterion passes.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "besov/errors.hpp"
#include "besov/extrapolation.hpp"
#include "besov/fourier.hpp"
#include "besov/gaussian.hpp"
#include "besov/mask.hpp"
#include "besov/multiplier.hpp"
#include "besov/norms.hpp"
#include "besov/partition.hpp"
#include "besov/scenario.hpp"
#include "besov/verify.hpp"

using namespace besov;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kPartitionTol = 1e-12;
constexpr double kPartitionSeconds = 1.0;
constexpr double kSandwichSeconds = 30.0;
constexpr double kGammaSigmas = 3.0;
constexpr int kGammaSamples = 20000;
constexpr double kGammaSeconds = 60.0;
constexpr double kTypeTol = 0.03;
constexpr double kProp43Ratio = 1.05;
constexpr double kProp43Reach = 0.90;
constexpr double kProp43Seconds = 120.0;
constexpr double kThm44Ratio = 1.05;
constexpr double kCZTol = 1e-12;
constexpr double kCZSeconds = 30.0;
constexpr double kWeakTypeConstant = 10.0;
constexpr double kSweepVariation = 0.25;
constexpr double kGrowthTol = 0.10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GridFunction random_band(const GridSpec& g, int dim, const FrequencyMask& mask, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  GridFunction hat(g, dim, Domain::frequency);
  for (std::size_t n = 0; n < g.nodes(); ++n)
    if (mask[n])
      for (int c = 0; c < dim; ++c) hat(n, c) = cplx(normal(rng), normal(rng));
  return idft(hat);
}

GridFunction random_function(const GridSpec& g, int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  GridFunction f(g, dim);
  for (auto& v : f.samples()) v = cplx(normal(rng), normal(rng));
  return f;
}

Mat random_matrix(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = cplx(normal(rng), normal(rng));
  return m;
}

// 1. Partition of unity and zero leakage.
Outcome partition_exactness() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  long leak = 0;
  for (int d : {1, 2})
    for (int n : {64, 256}) {
      GridSpec g(d, n);
      auto part = build_partition(g);
      const auto& r = part.frequency_norms();
      double top = std::ldexp(1.0, part.k_max());
      for (std::size_t node = 0; node < g.nodes(); ++node) {
        double s = 0.0;
        for (int k = 0; k <= part.k_max(); ++k) {
          double v = part.phi_hat(k)[node];
          s += v;
          double lo = k == 0 ? 0.0 : std::ldexp(1.0, k - 1), hi = std::ldexp(1.0, k + 1);
          if (v != 0.0 && (r[node] < lo || r[node] > hi)) ++leak;
        }
        if (r[node] <= top) worst = std::max(worst, std::abs(s - 1.0));
      }
    }
  double t = seconds_since(t0);
  return {worst < kPartitionTol && leak == 0 && t < kPartitionSeconds,
          fmt("max |sum - 1| = %.3g (< %.0e), leaking samples = %ld, %.3f s (< %.0f s)", worst, kPartitionTol, leak, t,
              kPartitionSeconds)};
}

// 2. Sandwich for functions with spectrum in one annulus. C1 = 1/3, C2 = 3 max_k ||phi_k||_1.
Outcome sandwich() {
  auto t0 = std::chrono::steady_clock::now();
  GridSpec g(1, 1024);
  auto part = build_partition(g);
  double l1 = 0.0;
  for (int k = 0; k <= part.k_max(); ++k) l1 = std::max(l1, part.phi_kernel_l1(k));
  const double c1 = 1.0 / 3.0, c2 = 3.0 * l1;
  auto x = ValueSpace::lp(2.0, 2);
  std::mt19937_64 rng(2002);
  const double ps[] = {1.0, 2.0, kInf};
  int checked = 0, violations = 0, literal_violations = 0, literal_checked_negative = 0;
  double lo_margin = kInf, hi_margin = kInf;
  for (int n = 2; n <= part.k_max() - 1; ++n) {
    auto mask = annulus_mask(g, std::ldexp(1.0, n - 1), std::ldexp(1.0, n + 1));
    for (int i = 0; i < 50; ++i) {
      auto f = random_band(g, 2, mask, rng);
      double p = ps[i % 3];
      double fp = lp_norm(f, p, x);
      for (double s : {-1.0, 0.5, 2.0}) {
        double ratio = besov_norm(f, {s, p, 2.0}, part, x) / fp;
        double lo = c1 * std::pow(2.0, n * s - std::abs(s)), hi = c2 * std::pow(2.0, n * s + std::abs(s));
        ++checked;
        if (!(ratio >= lo * (1 - 1e-12) && ratio <= hi * (1 + 1e-12))) ++violations;
        lo_margin = std::min(lo_margin, ratio / lo);
        hi_margin = std::min(hi_margin, hi / ratio);
        double llo = c1 * std::pow(2.0, (n - 1) * std::abs(s)), lhi = c2 * std::pow(2.0, (n + 1) * std::abs(s));
        if (s < 0) {
          ++literal_checked_negative;
          if (!(ratio >= llo && ratio <= lhi)) ++literal_violations;
        }
      }
    }
  }
  double t = seconds_since(t0);
  return {violations == 0 && t < kSandwichSeconds,
          fmt("%d ratios in [C1 2^(ns-|s|), C2 2^(ns+|s|)], C1 = %.4f, C2 = %.4f, violations = %d, min margins "
              "%.3f / %.3f, %.2f s (< %.0f s); unsigned-exponent reading fails on %d of %d s = -1 cases",
              checked, c1, c2, violations, lo_margin, hi_margin, t, kSandwichSeconds, literal_violations,
              literal_checked_negative)};
}

// 3. Gamma-norm identities.
Outcome gamma_identities() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(3003);
  int fails = 0;
  double worst = 0.0;
  auto within = [&](const MCEstimate& a, double b, double extra_se = 0.0) {
    double z = std::abs(a.value - b) / std::hypot(a.std_error, extra_se);
    worst = std::max(worst, z);
    if (z > kGammaSigmas) ++fails;
  };
  GridSpec g(1, 64, 2.0);
  auto h = ValueSpace::hilbert(3);
  auto x3 = ValueSpace::lp(3.0, 3);
  for (int i = 0; i < 20; ++i) {
    auto f = random_function(g, 3, rng);
    within(gamma_function_norm(f, h, GaussianSampler(10 + i, kGammaSamples)), lp_norm(f, 2.0, h));
    auto a = gamma_function_norm(f, x3, GaussianSampler(100 + i, kGammaSamples));
    auto b = gamma_function_norm(dft(f), x3, GaussianSampler(200 + i, kGammaSamples));
    within(a, b.value, b.std_error);
  }
  // f = sum_k h_k x_k with orthonormal Haar-type steps h_k: ||f||_gamma = (E||sum g_k x_k||^2)^{1/2}.
  GridSpec g8(1, 8);
  const double r2 = M_SQRT2;
  const double steps[3][8] = {{r2, r2, r2, r2, 0, 0, 0, 0}, {0, 0, 0, 0, r2, r2, r2, r2}, {r2, r2, -r2, -r2, 0, 0, 0, 0}};
  for (int i = 0; i < 20; ++i) {
    auto space = ValueSpace::lp(1.0 + i % 4, 2);
    std::vector<Vec> xs;
    GridFunction f(g8, 2);
    for (int k = 0; k < 3; ++k) {
      xs.push_back(random_matrix(2, 1, rng).col(0));
      for (int j = 0; j < 8; ++j)
        for (int c = 0; c < 2; ++c) f(j, c) += steps[k][j] * xs[k](c);
    }
    auto a = gamma_function_norm(f, space, GaussianSampler(300 + i, kGammaSamples));
    auto b = gaussian_moment(xs, space, GaussianSampler(400 + i, kGammaSamples));
    within(a, b.value, b.std_error);
  }
  double t = seconds_since(t0);
  return {fails == 0 && t < kGammaSeconds,
          fmt("60 comparisons, worst deviation %.2f std errors (<= %.0f), %d samples, %.2f s (< %.0f s)", worst,
              kGammaSigmas, kGammaSamples, t, kGammaSeconds)};
}

// 4. Type and cotype anchors.
Outcome type_cotype() {
  SearchBudget budget;
  GaussianSampler sampler(4004, kGammaSamples);
  auto l2 = ValueSpace::hilbert(8);
  auto t2 = type_constant_lower(l2, 2.0, budget, sampler.child(1)).estimate.value;
  auto c2 = cotype_constant_lower(l2, 2.0, budget, sampler.child(2)).estimate.value;
  bool ok = std::abs(t2 - 1.0) <= kTypeTol && std::abs(c2 - 1.0) <= kTypeTol;
  double worst = 0.0;
  int idx = 3;
  for (auto space : {ValueSpace::lp(1.0, 4), ValueSpace::lp(kInf, 4), ValueSpace::lp(3.0, 4)}) {
    worst = std::max(worst, type_constant_lower(space, 1.0, budget, sampler.child(idx++)).estimate.value);
    worst = std::max(worst, cotype_constant_lower(space, kInf, budget, sampler.child(idx++)).estimate.value);
  }
  ok = ok && worst <= 1.0 + kTypeTol;
  return {ok, fmt("l2_8 type 2 = %.4f, cotype 2 = %.4f (1 +- %.2f); largest type-1 / cotype-inf probe on l1_4, "
                  "linf_4, l3_4 = %.4f (<= %.2f)",
                  t2, c2, kTypeTol, worst, 1.0 + kTypeTol)};
}

// 5. Cube-restricted bound on Hilbert spaces.
Outcome prop43() {
  auto t0 = std::chrono::steady_clock::now();
  GridSpec g(1, 64);
  auto h = ValueSpace::hilbert(2);
  std::mt19937_64 rng(5005);
  VerifyOptions opts;
  double worst = 0.0, weakest_flat = kInf;
  int flat = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int a = int(rng() % 25) - 16;
    int b = a + 1 + int(rng() % 16);
    OperatorField field(g, 2, 2, Domain::frequency);
    bool plateau = trial % 2 == 0;
    double c = 0.5 + (rng() % 1000) / 500.0;
    for (auto& m : field.values) {
      if (plateau) {
        Eigen::HouseholderQR<Mat> qr(random_matrix(2, 2, rng));
        m = c * Mat(qr.householderQ());
      } else {
        m = random_matrix(2, 2, rng);
      }
    }
    auto rep = verify_prop43(OperatorSymbol(field), a, b, 2.0, 2.0, h, h, opts, GaussianSampler(5000 + trial, 1000));
    worst = std::max(worst, rep.ratio);
    if (plateau) {
      ++flat;
      weakest_flat = std::min(weakest_flat, rep.ratio);
    }
  }
  double t = seconds_since(t0);
  return {worst <= kProp43Ratio && weakest_flat >= kProp43Reach && t < kProp43Seconds,
          fmt("100 trials, largest measured/bound = %.4f (<= %.2f); %d flat-modulus symbols reach >= %.4f of the "
              "bound (>= %.2f); %.2f s (< %.0f s)",
              worst, kProp43Ratio, flat, weakest_flat, kProp43Reach, t, kProp43Seconds)};
}

// 6. Besov multiplier bound, Hilbert case, geometric annulus profiles.
Outcome thm44() {
  GridSpec g(1, 128);
  auto part = build_partition(g);
  auto h = ValueSpace::hilbert(2);
  std::mt19937_64 rng(6006);
  VerifyOptions opts;
  const Summability admissible[] = {{kInf, 2.0, 2.0}, {2.0, 2.0, 1.0}};
  const Summability inadmissible[] = {{kInf, 2.0, 1.0}, {4.0, 4.0, 1.5}, {kInf, kInf, 2.0}, {2.0, kInf, 1.0}};
  double worst = 0.0;
  int runs = 0, rejected = 0, rejections_tried = 0;
  for (int trial = 0; trial < 50; ++trial) {
    // Random matrices scaled by rho^{log2 |xi|}: the annulus bounds decay geometrically.
    double rho = std::pow(2.0, -1.5 * (rng() % 1000) / 1000.0);
    OperatorField field(g, 2, 2, Domain::frequency);
    for (std::size_t n = 0; n < g.nodes(); ++n) {
      double r = std::max(1.0, g.frequency_norm(n));
      field.values[n] = std::pow(rho, std::log2(r)) * random_matrix(2, 2, rng);
    }
    OperatorSymbol m(field);
    int combo = 0;
    for (double s : {-0.5, 0.0, 1.0})
      for (double sigma : {0.0, 0.5})
        for (const auto& sum : admissible) {
          auto rep = verify_thm44(m, s, sigma, 2.0, 2.0, sum, h, h, part, opts,
                                  GaussianSampler(6000 + 16 * trial + combo++, 1000));
          worst = std::max(worst, rep.ratio);
          ++runs;
        }
    for (const auto& sum : inadmissible) {
      ++rejections_tried;
      try {
        verify_thm44(m, 0.0, 0.0, 2.0, 2.0, sum, h, h, part, opts, GaussianSampler(1, 1000));
      } catch (const InvalidArgument&) {
        ++rejected;
      }
    }
  }
  return {worst <= kThm44Ratio && rejected == rejections_tried,
          fmt("%d runs (50 symbols x 12 combinations), largest ratio = %.4f (<= %.2f); inadmissible triples "
              "rejected %d / %d",
              runs, worst, kThm44Ratio, rejected, rejections_tried)};
}

// 7. Calderon-Zygmund decomposition properties.
Outcome cz() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(7007);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  int inputs = 0, failures = 0, cubes = 0;
  double recon = 0.0, mean = 0.0, sup_ratio = 0.0, measure_ratio = 0.0;
  auto run = [&](const GridFunction& f0, const ValueSpace& space) {
    GridFunction f = f0;
    double l1 = lp_norm(f, 1.0, space);
    if (l1 == 0.0) return;
    if (l1 > 1.0) f *= cplx(1.0 / l1);
    double a = 1.0 + 2.0 * unit(rng), B = 0.5 + 1.5 * unit(rng);
    double gamma = std::pow(B, -a) * std::pow(2.0, -(f.grid().dim() + a));
    // Height between 1.1 and 50 times the mean of |f|, so the root is never selected.
    double mean_norm = lp_norm(f, 1.0, space) / f.grid().volume();
    double height = mean_norm * (1.1 + 48.9 * unit(rng));
    double alpha = std::pow(height / gamma, 1.0 / a);
    auto dec = cz_decompose(f, alpha, a, B, space);
    auto chk = check_cz(dec, f, space);
    ++inputs;
    cubes += int(dec.cubes.size());
    recon = std::max(recon, chk.reconstruction_error);
    mean = std::max(mean, chk.max_mean);
    sup_ratio = std::max(sup_ratio, chk.good_sup / chk.good_sup_bound);
    measure_ratio = std::max(measure_ratio, chk.measure_sum / chk.measure_bound);
    bool ok = chk.support_ok && chk.reconstruction_error <= kCZTol && chk.max_mean <= kCZTol &&
              chk.measure_sum <= chk.measure_bound && chk.good_sup <= chk.good_sup_bound * (1.0 + kCZTol) &&
              chk.good_l1 <= 1.0 + kCZTol && !dec.root_selected;
    if (!ok) ++failures;
  };
  GridSpec g1(1, 256);
  for (const auto& f : default_weak_type_probes(g1, 2, 71)) run(f, ValueSpace::lp(1.5, 2));
  GridSpec g2(2, 32);
  for (int i = 0; i < 100; ++i) {
    GridFunction f(g2, 1);
    double density = i % 2 ? 0.02 : 0.5;
    for (std::size_t n = 0; n < g2.nodes(); ++n)
      if (unit(rng) < density) f(n, 0) = cplx(normal(rng), normal(rng)) * std::exp(2.0 * normal(rng));
    run(f, ValueSpace::hilbert(1));
  }
  double t = seconds_since(t0);
  return {failures == 0 && inputs == 200 && t < kCZSeconds,
          fmt("%d inputs, %d cubes, failures = %d; reconstruction %.2g, mean %.2g (<= %.0e); max ||g||_inf / bound "
              "= %.4f, max sum|Q| / bound = %.4f; %.2f s (< %.0f s)",
              inputs, cubes, failures, recon, mean, kCZTol, sup_ratio, measure_ratio, t, kCZSeconds)};
}

// 8. Weak type (1, 1) of the truncated Hilbert transform.
Outcome weak_type() {
  double c = weak_type_constant(1, 1.0);
  GridSpec g(1, 256);
  auto h = ValueSpace::hilbert(1);
  auto probes = default_weak_type_probes(g, 1, 8008);
  auto rep = verify_weak_type(hilbert_symbol(g), max_truncation_levels(g), 1.0, 2.0, 2.0, probes, h, h,
                              SearchBudget::witness_default(), GaussianSampler(8008, 1000));
  return {c == kWeakTypeConstant && rep.verdict && rep.ratio <= 1.0,
          fmt("C_{1,1} = %.6g (expected %.0f); %zu probes, worst weak-L1 / ||f||_1 = %.4f against bound %.4f "
              "(B = %.4f, Hormander = %.4f), ratio = %.4f (<= 1)",
              c, kWeakTypeConstant, probes.size(), rep.measured, rep.bound, rep.metadata["B"].get<double>(),
              rep.metadata["hormander"]["value"].get<double>(), rep.ratio)};
}

// 9. Riesz sweep stability and sharpness growth.
Outcome sweep_and_sharpness() {
  auto h = ValueSpace::hilbert(1);
  GaussianSampler sampler(9009, 1000);
  SweepOptions opts;
  opts.grids = {128, 256, 512};
  opts.strict_line = false;  // (2, 10) sits off the line 1/p - 1/q = 1/2
  auto rep = extrapolation_sweep(riesz_symbol(GridSpec(1, 128), 0.5), 2.0, {{4.0 / 3.0, 4.0}, {1.5, 6.0}, {2.0, 10.0}},
                                 h, h, SearchBudget::witness_default(), sampler, opts);
  double worst = 0.0;
  std::ostringstream per;
  for (const auto& pj : rep.pairs) {
    if (!pj.contains("variation")) continue;
    double v = pj["variation"].get<double>();
    worst = std::max(worst, v);
    per << fmt(" %.3g", v);
  }
  auto sharp = sharpness_probe(0.25, 4.0 / 3.0, 4.0, 1, {128, 256, 512}, SearchBudget::witness_default(),
                               sampler.child(99), kGrowthTol);
  double dev = 0.0;
  std::ostringstream gr;
  for (double x : sharp.growth) {
    dev = std::max(dev, std::abs(x / sharp.expected_growth - 1.0));
    gr << fmt(" %.4f", x);
  }
  return {worst < kSweepVariation && dev <= kGrowthTol && sharp.verdict,
          fmt("variation across N = 128, 256, 512 per pair:%s (< %.2f); growth per level:%s vs 2^0.25 = %.4f, max "
              "deviation %.4f (<= %.2f)",
              per.str().c_str(), kSweepVariation, gr.str().c_str(), sharp.expected_growth, dev, kGrowthTol)};
}

// 10. Byte-identical suite reruns.
Outcome determinism() {
  auto base = fs::temp_directory_path() / ("besov_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(base);
  std::ostringstream o1, e1, o2, e2;
  int s1 = run_suite(BESOV_SCENARIO_DIR, {}, base / "a", 4, o1, e1);
  int s2 = run_suite(BESOV_SCENARIO_DIR, {}, base / "b", 1, o2, e2);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  int files = 0, differing = 0, reports = 0;
  for (const auto& e : fs::directory_iterator(base / "a")) {
    ++files;
    if (e.path().extension() == ".json") ++reports;
    auto other = base / "b" / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) ++differing;
  }
  int files_b = int(std::distance(fs::directory_iterator(base / "b"), fs::directory_iterator{}));
  fs::remove_all(base);
  return {s1 == 0 && s2 == 0 && differing == 0 && files == files_b && reports > 1,
          fmt("suite exit %d / %d, %d files (%d JSON reports) compared, %d differ", s1, s2, files, reports, differing)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"partition exactness", partition_exactness},
      {"band-limited sandwich", sandwich},
      {"gamma identities", gamma_identities},
      {"type/cotype anchors", type_cotype},
      {"cube-restricted bound, Hilbert", prop43},
      {"Besov multiplier bound, Hilbert", thm44},
      {"Calderon-Zygmund decomposition", cz},
      {"weak-type constant and bound", weak_type},
      {"extrapolation sweep and sharpness", sweep_and_sharpness},
      {"determinism", determinism}};
  int failed = 0, index = 1;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << index++ << " (" << name << "): " << o.detail
              << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << std::endl;
  return failed == 0 ? 0 : 1;
}
