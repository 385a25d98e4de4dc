#ifndef NSLAB_STATE_HPP_
#define NSLAB_STATE_HPP_

#include <string>

#include "nslab/field.hpp"
#include "nslab/operators.hpp"

namespace nslab {

// (density, momentum) snapshot. Velocity is derived as m / max(rho, rho_floor).
struct FluidState {
  double t = 0.0;
  ScalarField rho;
  VectorField m;
  double rho_floor = 0.0;

  const Grid& grid() const noexcept { return rho.grid(); }
  VectorField velocity() const;
  bool all_finite() const noexcept { return rho.all_finite() && m.all_finite(); }
};

struct SolverConfig {
  double cfl = 0.5;
  double t_end = 0.1;
  int sample_stride = 1;
  Backend backend = Backend::Spectral;
  double rho_floor = -1.0;  // negative: use eps
  bool dealias = true;
  long max_steps = 2'000'000;
  double fixed_dt = 0.0;  // > 0: uniform step (rounded so t_end is hit exactly)

  // Throws ConfigError naming the violated invariant.
  void validate() const;
  double floor_for(double eps) const noexcept { return rho_floor >= 0.0 ? rho_floor : eps; }
};

}  // namespace nslab

#endif  // NSLAB_STATE_HPP_
