#include "spectral.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "nslab/errors.hpp"

namespace nslab::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SpectralPlan::SpectralPlan(const Grid& grid) : grid_(grid) {
  const int d = grid.dim();
  const int n = grid.n();
  std::array<int, 3> dims{n, n, n};
  nspec_ = 1;
  for (int a = 0; a < d; ++a) nspec_ *= static_cast<std::size_t>(a == d - 1 ? n / 2 + 1 : n);
  std::size_t s = 1;
  for (int a = d - 1; a >= 0; --a) {
    spec_strides_[a] = s;
    s *= static_cast<std::size_t>(a == d - 1 ? n / 2 + 1 : n);
  }

  std::vector<double> real(grid.size());
  std::vector<std::complex<double>> spec(nspec_);
  auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard<std::mutex> lock(planner_mutex());
  fwd_ = fftw_plan_dft_r2c(d, dims.data(), real.data(), cplx, flags);
  bwd_ = fftw_plan_dft_c2r(d, dims.data(), cplx, real.data(), flags | FFTW_DESTROY_INPUT);
  if (fwd_ == nullptr || bwd_ == nullptr) throw NumericalError("FFTW planning failed");
}

SpectralPlan::~SpectralPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (fwd_ != nullptr) fftw_destroy_plan(fwd_);
  if (bwd_ != nullptr) fftw_destroy_plan(bwd_);
}

Spectrum SpectralPlan::forward(std::span<const double> values) const {
  // r2c does not modify its input, but the FFTW signature is non-const.
  std::vector<double> in(values.begin(), values.end());
  Spectrum out(nspec_);
  fftw_execute_dft_r2c(fwd_, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> SpectralPlan::backward(Spectrum spectrum) const {
  std::vector<double> out(grid_.size());
  fftw_execute_dft_c2r(bwd_, reinterpret_cast<fftw_complex*>(spectrum.data()), out.data());
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (auto& x : out) x *= scale;
  return out;
}

int SpectralPlan::wavenumber(std::size_t s, int axis) const noexcept {
  const int d = grid_.dim();
  const int n = grid_.n();
  const std::size_t extent = axis == d - 1 ? static_cast<std::size_t>(n / 2 + 1) : static_cast<std::size_t>(n);
  const int j = static_cast<int>((s / spec_strides_[axis]) % extent);
  if (axis == d - 1) return j;
  return j <= n / 2 ? j : j - n;
}

const SpectralPlan& plan_for(const Grid& grid) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<SpectralPlan>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& slot = cache[{grid.dim(), grid.n()}];
  if (!slot) slot = std::make_unique<SpectralPlan>(grid);
  return *slot;
}

}  // namespace nslab::detail
