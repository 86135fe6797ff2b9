#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "besov/gaussian.hpp"
#include "besov/multiplier.hpp"
#include "besov/report.hpp"
#include "besov/symbol.hpp"
#include "besov/value_space.hpp"

namespace besov {

// ---------------------------------------------------------------------------
// Smooth truncation of a symbol.
//   eta  = 1 on [0, 1], 0 on [3/2, inf)
//   zeta_0(t) = eta(t) - eta(2t),  zeta_j(t) = zeta_0(2^-j t)
// and sum_{|j| <= N} zeta_j(t) = eta(2^-N t) - eta(2^{N+1} t).

double eta_hat(double t, int order = 3);
double zeta_hat(int j, double t, int order = 3);
// Closed form of sum_{|j| <= levels} zeta_j(t).
double truncation_window(int levels, double t, int order = 3);

// Largest N for which the top level 3/2 * 2^N stays below the Nyquist radius n / (2L).
int max_truncation_levels(const GridSpec& grid);

// m times the truncation window, as a tabulated symbol.
OperatorSymbol truncated_symbol(const OperatorSymbol& m, int levels, int order = 3);
// Physical kernel K^{(N)} = idft(window * m).
OperatorField kernel_of_symbol(const OperatorSymbol& m, int levels, int order = 3);

// ---------------------------------------------------------------------------
// Hormander integral condition
//   sup_{t, ||x|| = 1} ( int_{|s| >= 2|t|} ||(K(s - t) - K(s)) x||^a ds )^{1/a}
// on the torus with |t| <= L/8 and s over the centred fundamental domain.

struct HormanderOptions {
  std::vector<std::size_t> t_nodes;  // empty: every node with 0 < |t| <= L/8 (subsampled when large)
  std::vector<Vec> x_test;           // empty: basis vectors and a few fixed directions
  std::size_t center = 0;            // node playing the role of the kernel's origin
};

struct HormanderEstimate {
  double value = 0.0;
  double half_radius_value = 0.0;  // same supremum with s restricted to |s| <= L/4
  double tail_ratio = 1.0;         // value / half_radius_value
  bool non_hormander = false;      // tail keeps growing with the domain
  std::vector<double> worst_t;
  int t_count = 0;

  nlohmann::json to_json() const;
};

HormanderEstimate hormander_constant(const OperatorField& kernel, double a, const ValueSpace& from,
                                     const ValueSpace& to, const HormanderOptions& options = {});

std::vector<Vec> default_test_vectors(const ValueSpace& space);

// ---------------------------------------------------------------------------
// Mihlin-type condition
//   R^{|alpha| + d/r - d/rho} ( int_{R <= |xi| < 2R} ||d^alpha m(xi) x||^rho dxi )^{1/rho} <= M ||x||
// for |alpha| <= n = floor(d/rho - d/r) + 1, dyadic R.

enum class DerivativeMode { oracle, finite_difference };

struct MihlinOptions {
  DerivativeMode mode = DerivativeMode::oracle;
  double fd_step = 1e-3;      // relative to R
  std::vector<double> radii;  // empty: dyadic radii resolved by the grid
  std::vector<Vec> x_test;    // empty: default_test_vectors
  int radial_nodes = 48;
  int angular_nodes = 128;
};

struct MihlinReport {
  int derivatives = 0;
  double constant = 0.0;
  std::vector<double> radii;
  std::vector<double> per_radius;  // sup over alpha and x at each radius
  nlohmann::json samples = nlohmann::json::array();  // {R, alpha, value} per shell and multi-index
  nlohmann::json to_json() const;
};

int mihlin_order(int d, double r, double rho);
MihlinReport mihlin_check(const OperatorSymbol& m, double r, double rho, const ValueSpace& from, const ValueSpace& to,
                          const MihlinOptions& options = {});
// The same condition for the pointwise adjoint acting between the dual spaces.
MihlinReport mihlin_check_dual(const OperatorSymbol& m, double r, double rho, const ValueSpace& from,
                               const ValueSpace& to, const MihlinOptions& options = {});

// ---------------------------------------------------------------------------
// Calderon-Zygmund decomposition on the torus.

struct DyadicCube {
  std::vector<int> origin;  // node indices of the lower corner
  int side = 1;             // nodes per axis
  double measure = 0.0;
  std::vector<double> center;  // physical coordinates
};

struct CZDecomposition {
  GridFunction good;
  GridFunction bad;              // sum of the b_j; b_j is bad restricted to cube j
  std::vector<DyadicCube> cubes;
  std::vector<int> owner;        // cube index per node, -1 outside every cube
  double height = 0.0;           // gamma * alpha^a
  double gamma = 0.0;            // B^{-a} 2^{-(d+a)}
  bool root_selected = false;    // the whole torus exceeded the height

  GridFunction bad_part(std::size_t j) const;
  nlohmann::json diagnostics() const;  // cubes, dilated cubes Q* (side 2 sqrt(d) l(Q))
};

CZDecomposition cz_decompose(const GridFunction& f, double alpha, double a, double B, const ValueSpace& space);

struct CZCheck {
  double reconstruction_error = 0.0;  // max_x ||f - g - sum b_j||, relative to max ||f||
  double max_mean = 0.0;              // max_j ||int b_j||, relative to ||f||_1
  bool support_ok = false;
  double measure_sum = 0.0;
  double measure_bound = 0.0;
  double good_sup = 0.0;
  double good_sup_bound = 0.0;
  double good_l1 = 0.0;
  double bad_l1 = 0.0;

  bool ok(double tol = 1e-12) const;
  nlohmann::json to_json() const;
};

CZCheck check_cz(const CZDecomposition& dec, const GridFunction& f, const ValueSpace& space);

// ---------------------------------------------------------------------------
// Weak type (1, a) of the truncated operator.

// C_{d,a} = 2 + 2 d^{d/(2a)} 4^{d/a}.
double weak_type_constant(int d, double a);
// 1/p0 - 1/q0 = 1 - 1/a.
bool weak_type_admissible(double a, double p0, double q0);

std::vector<GridFunction> default_weak_type_probes(const GridSpec& grid, int dim, std::uint64_t seed);

VerificationReport verify_weak_type(const OperatorSymbol& m, int levels, double a, double p0, double q0,
                                    const std::vector<GridFunction>& probes, const ValueSpace& from,
                                    const ValueSpace& to, const SearchBudget& budget, const GaussianSampler& sampler,
                                    double tolerance = 0.0);

// ---------------------------------------------------------------------------
// Sweeps along 1/p - 1/q = 1/r and the sharpness probe.

struct SweepRow {
  double p = 0.0, q = 0.0;
  int n = 0;
  double estimate = 0.0;
  long evaluations = 0;
  bool on_line = true;
};

struct SweepReport {
  double inv_r = 0.0;
  std::vector<SweepRow> rows;
  nlohmann::json pairs;  // per pair: stability max/min over grids, log-growth slope, flags
  bool stable = true;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct SweepOptions {
  std::vector<int> grids{128, 256, 512};
  double period = 1.0;
  bool strict_line = true;  // reject pairs off the line instead of tagging them
  double instability_factor = 2.0;
};

SweepReport extrapolation_sweep(const OperatorSymbol& m, double r, const std::vector<std::pair<double, double>>& pairs,
                                const ValueSpace& from, const ValueSpace& to, const SearchBudget& budget,
                                const GaussianSampler& sampler, const SweepOptions& options = {});

struct SharpnessReport {
  double sigma = 0.0;
  double d_over_r = 0.0;
  std::vector<int> grids;
  std::vector<int> top_levels;
  std::vector<double> estimates;
  std::vector<double> refined;     // search restricted to the top annulus
  std::vector<double> growth;      // per added dyadic level
  double expected_growth = 1.0;    // 2^{d/r - sigma}
  bool verdict = true;

  nlohmann::json to_json() const;
};

// Ratio ||T f||_q / ||f||_p for T = |xi|^{-sigma} on the top-annulus profile witness of each
// grid. For sigma < d/r every added level must grow the ratio by at least
// 2^{d/r - sigma} (1 - tolerance).
SharpnessReport sharpness_probe(double sigma, double p, double q, int d, const std::vector<int>& grids,
                                const SearchBudget& budget, const GaussianSampler& sampler, double tolerance = 0.1,
                                double period = 1.0);

}  // namespace besov
