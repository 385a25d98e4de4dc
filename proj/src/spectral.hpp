#ifndef NSLAB_SRC_SPECTRAL_HPP_
#define NSLAB_SRC_SPECTRAL_HPP_

#include <complex>
#include <span>
#include <vector>

#include <fftw3.h>

#include "nslab/grid.hpp"

namespace nslab::detail {

using Spectrum = std::vector<std::complex<double>>;

// Real-to-complex FFT pair for one grid shape. Plans are created with
// FFTW_ESTIMATE | FFTW_UNALIGNED so execution is deterministic and can use
// caller-owned buffers from any thread.
class SpectralPlan {
 public:
  explicit SpectralPlan(const Grid& grid);
  ~SpectralPlan();
  SpectralPlan(const SpectralPlan&) = delete;
  SpectralPlan& operator=(const SpectralPlan&) = delete;

  const Grid& grid() const noexcept { return grid_; }
  std::size_t spectrum_size() const noexcept { return nspec_; }

  Spectrum forward(std::span<const double> values) const;
  // Normalized inverse; the spectrum is consumed.
  std::vector<double> backward(Spectrum spectrum) const;

  // Signed integer wavenumber of spectral slot `s` along `axis`.
  int wavenumber(std::size_t s, int axis) const noexcept;

 private:
  Grid grid_;
  std::size_t nspec_ = 0;
  std::array<std::size_t, 3> spec_strides_{1, 1, 1};
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

// Shared plan for a grid shape; creation is serialized internally.
const SpectralPlan& plan_for(const Grid& grid);

}  // namespace nslab::detail

#endif  // NSLAB_SRC_SPECTRAL_HPP_
