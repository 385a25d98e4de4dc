#ifndef NSLAB_STRESS_HPP_
#define NSLAB_STRESS_HPP_

#include <cstdint>

#include "nslab/eos.hpp"
#include "nslab/field.hpp"
#include "nslab/operators.hpp"

namespace nslab::stress {

// D(v) = (grad v + grad^T v)/2
TensorField strain_rate(const VectorField& v, Backend b = Backend::Spectral);

// S(grad v) = mu (grad v + grad^T v) + lambda (div v) I
TensorField viscous_stress(const VectorField& v, const ModelParams& p,
                           Backend b = Backend::Spectral);

// div S(grad v) = mu Lap v + (mu + lambda) grad div v
VectorField stress_divergence(const VectorField& v, const ModelParams& p,
                              Backend b = Backend::Spectral);

// int S(grad w) : grad w dx with w = u - v, by pointwise contraction.
double dissipation(const VectorField& u, const VectorField& v, const ModelParams& p,
                   Backend b = Backend::Spectral);
// Same quantity through mu ||grad w||^2 + (mu + lambda) ||div w||^2.
double dissipation_norm_form(const VectorField& u, const VectorField& v, const ModelParams& p,
                             Backend b = Backend::Spectral);

// ||w||_{H^1} / (||grad w||_2 + ||sqrt(weight) w||_2)
double korn_ratio(const VectorField& w, const ScalarField& weight, Backend b = Backend::Spectral);

struct KornOptions {
  int ensemble_size = 8;
  int kmax = 4;
  int refine_steps = 60;   // accepted-or-rejected random perturbations per member
  double step = 0.3;       // relative perturbation size
};

struct KornEstimate {
  double constant = 0.0;
  double weight_mass = 0.0;   // integral of the weight (M0)
  double weight_lgamma = 0.0; // ||weight||_gamma (M1)
  int evaluations = 0;
};

// Seeded lower estimate of the generalized Korn-Poincare constant
// sup ||w||_{H^1} / (||grad w||_2 + ||sqrt(weight) w||_2).
// Throws HypothesisError if the weight is negative somewhere or has zero mass.
KornEstimate korn_type_constant(const Grid& grid, const ScalarField& weight, const ModelParams& p,
                                std::uint64_t seed, const KornOptions& opts = {});

}  // namespace nslab::stress

#endif  // NSLAB_STRESS_HPP_
