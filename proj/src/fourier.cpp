#include "besov/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "besov/errors.hpp"

namespace besov {

namespace {

// FFTW planning is not thread safe; execution of an existing plan on new arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int d, int n, int howmany, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(d, n, howmany, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = std::size_t(howmany);
    for (int a = 0; a < d; ++a) total *= std::size_t(n);
    std::vector<fftw_complex> in(total), out(total);
    std::vector<int> dims(d, n);
    fftw_plan plan = fftw_plan_many_dft(d, dims.data(), howmany, in.data(), nullptr, howmany, 1, out.data(), nullptr,
                                        howmany, 1, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

GridFunction transform(const GridFunction& f, int sign, double scale, Domain target) {
  const auto& grid = f.grid();
  GridFunction out(grid, f.value_dim(), target);
  fftw_plan plan = cache().get(grid.dim(), grid.n(), f.value_dim(), sign);
  // FFTW does not write to the input of an out-of-place complex transform.
  auto* in = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(f.samples().data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.samples().data());
  fftw_execute_dft(plan, in, dst);
  for (auto& z : out.samples()) z *= scale;
  return out;
}

}  // namespace

GridFunction dft(const GridFunction& f) {
  if (f.domain() != Domain::physical) throw InvalidArgument("dft expects a physical-domain function");
  return transform(f, FFTW_FORWARD, f.grid().cell_measure(Domain::physical), Domain::frequency);
}

GridFunction idft(const GridFunction& fhat) {
  if (fhat.domain() != Domain::frequency) throw InvalidArgument("idft expects a frequency-domain function");
  return transform(fhat, FFTW_BACKWARD, fhat.grid().cell_measure(Domain::frequency), Domain::physical);
}

}  // namespace besov
