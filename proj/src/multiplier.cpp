#include "besov/multiplier.hpp"

#include <algorithm>
#include <cmath>

#include "besov/errors.hpp"
#include "besov/fourier.hpp"
#include "besov/io.hpp"
#include "besov/norms.hpp"

namespace besov {

GridFunction multiply_spectrum(const OperatorSymbol& m, const GridFunction& fhat) {
  if (fhat.domain() != Domain::frequency) throw InvalidArgument("expected a frequency-domain function");
  if (!(fhat.grid() == m.grid())) throw InvalidArgument("symbol and function live on different grids");
  if (fhat.value_dim() != m.cols()) throw InvalidArgument("symbol does not act on the function's value space");
  GridFunction out(fhat.grid(), m.rows(), Domain::frequency);
  if (m.rows() == 1 && m.cols() == 1) {
    for (std::size_t node = 0; node < fhat.nodes(); ++node) out(node, 0) = m.at(node)(0, 0) * fhat(node, 0);
    return out;
  }
  for (std::size_t node = 0; node < fhat.nodes(); ++node) {
    Eigen::Map<const Vec> x(fhat.value(node).data(), m.cols());
    Eigen::Map<Vec> y(out.value(node).data(), m.rows());
    y.noalias() = m.at(node) * x;
  }
  return out;
}

GridFunction apply_multiplier(const OperatorSymbol& m, const GridFunction& f) {
  if (f.domain() != Domain::physical) throw InvalidArgument("apply_multiplier expects a physical-domain function");
  return idft(multiply_spectrum(m, dft(f)));
}

GridFunction blockwise_extension(const OperatorSymbol& m, const GridFunction& f, const DyadicPartition& part) {
  auto fhat = dft(f);
  require_resolved(fhat, part, false);
  GridFunction total(f.grid(), m.rows());
  for (int k = 0; k <= part.k_max(); ++k) {
    GridFunction block = fhat;
    auto phi = part.phi_hat(k);
    for (std::size_t node = 0; node < block.nodes(); ++node)
      for (auto& z : block.value(node)) z *= phi[node];
    total += idft(multiply_spectrum(m, block));
  }
  return total;
}

double multiplier_ratio(const OperatorSymbol& m, const GridFunction& f, double p, double q, const ValueSpace& from,
                        const ValueSpace& to) {
  double den = lp_norm(f, p, from);
  if (den == 0.0) return 0.0;
  return lp_norm(apply_multiplier(m, f), q, to) / den;
}

nlohmann::json NormEstimate::to_json() const {
  return {{"value", value}, {"evaluations", evaluations}, {"best_restart", best_restart}};
}

namespace {

std::vector<std::size_t> support_nodes(const GridSpec& grid, const FrequencyMask& mask) {
  std::vector<std::size_t> nodes;
  if (mask.empty()) {
    nodes.resize(grid.nodes());
    for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = i;
    return nodes;
  }
  if (mask.size() != grid.nodes()) throw InvalidArgument("support mask does not match grid");
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) nodes.push_back(i);
  if (nodes.empty()) throw InvalidArgument("empty witness support");
  return nodes;
}

double coefficient_norm(const GridFunction& c) {
  double s = 0.0;
  for (auto z : c.samples()) s += std::norm(z);
  return std::sqrt(s);
}

void normalize(GridFunction& c) {
  double n = coefficient_norm(c);
  if (n > 0.0) c *= 1.0 / n;
}

Vec top_right_singular(const Mat& m) {
  if (m.cols() == 1) return Vec::Ones(1);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().col(0);
}

double op_norm2(const Mat& m) {
  if (m.size() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

// Gradient weight of h^d sum ||f(x)||_s^p with respect to conj(f(x)), for l^s value norms.
struct PowerSum {
  double total = 0.0;
  GridFunction weight;
};

PowerSum power_sum(const GridFunction& f, double p, const ValueSpace& space) {
  PowerSum out{0.0, GridFunction(f.grid(), f.value_dim())};
  double s = space.is_hilbert() ? 2.0 : space.exponent();
  for (std::size_t node = 0; node < f.nodes(); ++node) {
    auto v = f.value(node);
    double nrm = space.norm(v);
    if (nrm == 0.0) continue;
    out.total += std::pow(nrm, p);
    auto w = out.weight.value(node);
    for (int i = 0; i < f.value_dim(); ++i) {
      double a = std::abs(v[i]);
      if (a == 0.0) continue;
      w[i] = 0.5 * p * std::pow(nrm, p - s) * std::pow(a, s - 2.0) * v[i];
    }
  }
  out.total *= f.grid().cell_measure(Domain::physical);
  return out;
}

class NormSearch {
 public:
  NormSearch(const OperatorSymbol& m, double p, double q, const ValueSpace& from, const ValueSpace& to,
             const SearchBudget& budget, const GaussianSampler& sampler, const FrequencyMask& mask)
      : m_(m), p_(p), q_(q), from_(from), to_(to), budget_(budget), sampler_(sampler),
        nodes_(support_nodes(m.grid(), mask)) {
    if (!(p >= 1.0) || !(q >= 1.0)) throw InvalidArgument("exponents must lie in [1, inf]");
    if (m.cols() != from.dim() || m.rows() != to.dim()) throw InvalidArgument("symbol shape does not match spaces");
    if (budget.restarts < 1 || budget.steps < 0) throw InvalidArgument("invalid search budget");
    hilbert_l2_ = p == 2.0 && q == 2.0 && from.is_hilbert() && to.is_hilbert();
    smooth_ = std::isfinite(p) && std::isfinite(q) && from.is_lp() && to.is_lp() && std::isfinite(from.exponent()) &&
              std::isfinite(to.exponent());
  }

  NormEstimate run() {
    NormEstimate best{-1.0, GridFunction(m_.grid(), from_.dim()), 0, -1};
    for (int r = 0; r < budget_.restarts; ++r) {
      auto rng = sampler_.child(200 + std::uint64_t(r)).engine();
      GridFunction c = initial(r, rng);
      double v = hilbert_l2_ ? power_iterate(c) : climb(c, rng);
      if (v > best.value) {
        best.value = v;
        best.witness = idft(c);
        best.best_restart = r;
      }
    }
    best.evaluations = evaluations_;
    return best;
  }

 private:
  GridFunction initial(int restart, std::mt19937_64& rng) {
    const auto& grid = m_.grid();
    GridFunction c(grid, from_.dim(), Domain::frequency);
    std::normal_distribution<double> normal;
    if (restart <= 1) {
      // Restart 0: the strongest single mode. Restart 1: every mode aligned with its top
      // singular direction, which concentrates the witness at the origin.
      std::size_t arg = nodes_[0];
      double top = -1.0;
      for (auto node : nodes_) {
        double n = op_norm2(m_.at(node));
        if (n > top) {
          top = n;
          arg = node;
        }
      }
      if (restart == 0) {
        Vec v = top_right_singular(m_.at(arg));
        for (int i = 0; i < from_.dim(); ++i) c(arg, i) = v(i);
      } else {
        for (auto node : nodes_) {
          Vec v = top_right_singular(m_.at(node));
          for (int i = 0; i < from_.dim(); ++i) c(node, i) = v(i);
        }
      }
    } else {
      // Random coefficients under a Gaussian envelope of random width around a random centre.
      const auto& anchor = nodes_[std::uniform_int_distribution<std::size_t>(0, nodes_.size() - 1)(rng)];
      double width = std::exp(std::uniform_real_distribution<double>(std::log(1.0), std::log(double(grid.n())))(rng)) /
                     grid.period();
      for (auto node : nodes_) {
        double dist2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
          double dx = grid.frequency(node, a) - grid.frequency(anchor, a);
          dist2 += dx * dx;
        }
        double env = std::exp(-0.5 * dist2 / (width * width));
        for (int i = 0; i < from_.dim(); ++i) c(node, i) = env * GaussianSampler::draw(rng, normal);
      }
    }
    normalize(c);
    return c;
  }

  double evaluate(const GridFunction& c, GridFunction* f_out = nullptr, GridFunction* g_out = nullptr) {
    ++evaluations_;
    GridFunction f = idft(c);
    GridFunction g = idft(multiply_spectrum(m_, c));
    double den = lp_norm(f, p_, from_);
    double num = lp_norm(g, q_, to_);
    if (f_out) *f_out = std::move(f);
    if (g_out) *g_out = std::move(g);
    return den > 0.0 ? num / den : 0.0;
  }

  double power_iterate(GridFunction& c) {
    for (int s = 0; s < budget_.steps; ++s) {
      GridFunction next(c.grid(), from_.dim(), Domain::frequency);
      for (auto node : nodes_) {
        Eigen::Map<const Vec> x(c.value(node).data(), from_.dim());
        Eigen::Map<Vec> y(next.value(node).data(), from_.dim());
        y.noalias() = m_.at(node).adjoint() * (m_.at(node) * x);
      }
      if (coefficient_norm(next) == 0.0) break;
      normalize(next);
      c = std::move(next);
    }
    return evaluate(c);
  }

  // Ascent direction d J / d conj(c) for J = log ||g||_q - log ||f||_p, restricted to the support.
  GridFunction gradient(const GridFunction& f, const GridFunction& g) {
    auto pf = power_sum(f, p_, from_);
    auto pg = power_sum(g, q_, to_);
    double vol = 1.0 / m_.grid().volume();
    GridFunction df = dft(pf.weight);
    GridFunction dg = dft(pg.weight);
    GridFunction out(m_.grid(), from_.dim(), Domain::frequency);
    if (pf.total == 0.0 || pg.total == 0.0) return out;
    for (auto node : nodes_) {
      Eigen::Map<const Vec> a(df.value(node).data(), from_.dim());
      Eigen::Map<const Vec> b(dg.value(node).data(), to_.dim());
      Eigen::Map<Vec> o(out.value(node).data(), from_.dim());
      o = vol * ((m_.at(node).adjoint() * b) / (q_ * pg.total) - a / (p_ * pf.total));
    }
    return out;
  }

  GridFunction perturbed(const GridFunction& c, double eps, std::mt19937_64& rng) const {
    GridFunction out = c;
    std::normal_distribution<double> normal;
    double scale = eps / std::sqrt(double(nodes_.size() * std::size_t(from_.dim())));
    for (auto node : nodes_)
      for (auto& z : out.value(node)) z += scale * GaussianSampler::draw(rng, normal);
    normalize(out);
    return out;
  }

  double climb(GridFunction& c, std::mt19937_64& rng) {
    GridFunction f(c.grid(), from_.dim()), g(c.grid(), to_.dim());
    double current = evaluate(c, &f, &g);
    double t = 0.5;
    double eps = 0.3;
    bool gradient_alive = smooth_;
    for (int s = 0; s < budget_.steps; ++s) {
      if (gradient_alive) {
        GridFunction dir = gradient(f, g);
        double dn = coefficient_norm(dir);
        bool moved = false;
        if (dn > 0.0) {
          for (int attempt = 0; attempt < 4 && !moved; ++attempt) {
            GridFunction trial = c;
            for (auto node : nodes_) {
              auto tv = trial.value(node);
              auto dv = dir.value(node);
              for (int i = 0; i < from_.dim(); ++i) tv[i] += (t / dn) * dv[i];
            }
            normalize(trial);
            GridFunction f2(c.grid(), from_.dim()), g2(c.grid(), to_.dim());
            double v = evaluate(trial, &f2, &g2);
            if (v > current) {
              current = v;
              c = std::move(trial);
              f = std::move(f2);
              g = std::move(g2);
              t = std::min(1.0, 2.0 * t);
              moved = true;
            } else {
              t *= 0.25;
            }
          }
        }
        if (t < 1e-10 || dn == 0.0) gradient_alive = false;
      }
      if (!gradient_alive || s % 4 == 3) {
        GridFunction trial = perturbed(c, eps, rng);
        GridFunction f2(c.grid(), from_.dim()), g2(c.grid(), to_.dim());
        double v = evaluate(trial, &f2, &g2);
        if (v > current) {
          current = v;
          c = std::move(trial);
          f = std::move(f2);
          g = std::move(g2);
          eps = std::min(1.0, eps * 1.3);
        } else {
          eps = std::max(1e-4, eps * 0.7);
        }
      }
    }
    return current;
  }

  const OperatorSymbol& m_;
  double p_, q_;
  const ValueSpace& from_;
  const ValueSpace& to_;
  SearchBudget budget_;
  GaussianSampler sampler_;
  std::vector<std::size_t> nodes_;
  bool hilbert_l2_ = false;
  bool smooth_ = false;
  long evaluations_ = 0;
};

class BesovSearch {
 public:
  BesovSearch(const OperatorSymbol& m, const BesovParams& src, const BesovParams& dst, const DyadicPartition& part,
              const ValueSpace& from, const ValueSpace& to, const SearchBudget& budget, const GaussianSampler& sampler,
              bool homogeneous)
      : m_(m), src_(src), dst_(dst), part_(part), from_(from), to_(to), budget_(budget), sampler_(sampler),
        homogeneous_(homogeneous) {
    src.validate();
    dst.validate();
    if (!(m.grid() == part.grid())) throw InvalidArgument("symbol and partition live on different grids");
    if (m.cols() != from.dim() || m.rows() != to.dim()) throw InvalidArgument("symbol shape does not match spaces");
    auto mask = ball_mask(m.grid(), part.top_radius());
    if (homogeneous) mask = without_zero(mask);
    nodes_ = support_nodes(m.grid(), mask);
    lo_ = homogeneous ? part.k_min() : 0;
  }

  NormEstimate run() {
    NormEstimate best{-1.0, GridFunction(m_.grid(), from_.dim()), 0, -1};
    for (int r = 0; r < budget_.restarts; ++r) {
      auto rng = sampler_.child(300 + std::uint64_t(r)).engine();
      GridFunction c = initial(r, rng);
      double v = climb(c, rng);
      if (v > best.value) {
        best.value = v;
        best.witness = idft(c);
        best.best_restart = r;
      }
    }
    best.evaluations = evaluations_;
    return best;
  }

 private:
  std::span<const double> level(int k) const { return homogeneous_ ? part_.psi_hat(k) : part_.phi_hat(k); }
  int levels() const { return part_.k_max() - lo_ + 1; }

  GridFunction initial(int restart, std::mt19937_64& rng) {
    GridFunction c(m_.grid(), from_.dim(), Domain::frequency);
    std::normal_distribution<double> normal;
    if (restart < levels()) {
      auto w = level(lo_ + restart);
      for (auto node : nodes_)
        if (w[node] > 0.0)
          for (auto& z : c.value(node)) z = w[node] * GaussianSampler::draw(rng, normal);
    } else {
      double tilt = std::uniform_real_distribution<double>(-1.5, 1.5)(rng);
      const auto& radii = part_.frequency_norms();
      for (auto node : nodes_) {
        double r = std::max(radii[node], 1.0 / m_.grid().period());
        double env = std::pow(r, tilt);
        for (auto& z : c.value(node)) z = env * GaussianSampler::draw(rng, normal);
      }
    }
    if (coefficient_norm(c) == 0.0) c(nodes_[0], 0) = 1.0;
    normalize(c);
    return c;
  }

  double evaluate(const GridFunction& c) {
    ++evaluations_;
    auto den = sequence_norm(besov_sequence_from_spectrum(c, src_, part_, from_, homogeneous_), src_.v);
    if (den == 0.0) return 0.0;
    auto num =
        sequence_norm(besov_sequence_from_spectrum(multiply_spectrum(m_, c), dst_, part_, to_, homogeneous_), dst_.v);
    return num / den;
  }

  double climb(GridFunction& c, std::mt19937_64& rng) {
    double current = evaluate(c);
    double eps = 0.3;
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick_level(lo_, part_.k_max());
    for (int s = 0; s < budget_.steps; ++s) {
      GridFunction trial = c;
      double u = unit(rng);
      if (u < 0.4) {
        double scale = eps / std::sqrt(double(nodes_.size()));
        for (auto node : nodes_)
          for (auto& z : trial.value(node)) z += scale * GaussianSampler::draw(rng, normal);
      } else if (u < 0.8) {
        auto w = level(pick_level(rng));
        for (auto node : nodes_)
          if (w[node] > 0.0)
            for (auto& z : trial.value(node)) z += eps * w[node] * GaussianSampler::draw(rng, normal) / 4.0;
      } else {
        auto w = level(pick_level(rng));
        double factor = std::exp(eps * normal(rng));
        for (auto node : nodes_)
          if (w[node] > 0.5)
            for (auto& z : trial.value(node)) z *= factor;
      }
      if (coefficient_norm(trial) == 0.0) continue;
      normalize(trial);
      double v = evaluate(trial);
      if (v > current) {
        current = v;
        c = std::move(trial);
        eps = std::min(1.0, eps * 1.3);
      } else {
        eps = std::max(1e-4, eps * 0.8);
      }
    }
    return current;
  }

  const OperatorSymbol& m_;
  BesovParams src_, dst_;
  const DyadicPartition& part_;
  const ValueSpace& from_;
  const ValueSpace& to_;
  SearchBudget budget_;
  GaussianSampler sampler_;
  bool homogeneous_;
  std::vector<std::size_t> nodes_;
  int lo_ = 0;
  long evaluations_ = 0;
};

}  // namespace

NormEstimate estimate_multiplier_norm(const OperatorSymbol& m, double p, double q, const ValueSpace& from,
                                      const ValueSpace& to, const SearchBudget& budget,
                                      const GaussianSampler& sampler, const FrequencyMask& support) {
  NormSearch search(m, p, q, from, to, budget, sampler, support);
  return search.run();
}

NormEstimate besov_multiplier_norm_estimate(const OperatorSymbol& m, const BesovParams& src, const BesovParams& dst,
                                            const DyadicPartition& part, const ValueSpace& from,
                                            const ValueSpace& to, const SearchBudget& budget,
                                            const GaussianSampler& sampler, bool homogeneous) {
  BesovSearch search(m, src, dst, part, from, to, budget, sampler, homogeneous);
  return search.run();
}

}  // namespace besov
