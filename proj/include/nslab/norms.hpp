#ifndef NSLAB_NORMS_HPP_
#define NSLAB_NORMS_HPP_

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>

#include "nslab/field.hpp"
#include "nslab/operators.hpp"

namespace nslab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Rectangle rule sum f h^d.
double integral(const ScalarField& f);
double mean(const ScalarField& f);

// (sum |f|^p h^d)^(1/p); p = kInfinity gives the node maximum of |f|.
// Vector and tensor fields use the pointwise Euclidean / Frobenius magnitude.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& w, double p);
double lp_norm(const TensorField& t, double p);

// ||w||_{H^1}^2 = ||w||_2^2 + ||grad w||_2^2
double h1_norm(const ScalarField& f, Backend b = Backend::Spectral);
double h1_norm(const VectorField& w, Backend b = Backend::Spectral);

// ||w - mean(w)||_q / ||grad w||_p. Throws ArgumentError for a constant field.
double poincare_wirtinger_check(const ScalarField& w, double p, double q,
                                Backend b = Backend::Spectral);

// Random real field whose Fourier support is |k_a| <= kmax on every axis;
// coefficients are Gaussian with amplitude (1 + |k|^2)^(-decay/2).
ScalarField random_band_limited(const Grid& grid, int kmax, std::mt19937_64& rng,
                                double decay = 1.0);
VectorField random_band_limited_vector(const Grid& grid, int kmax, std::mt19937_64& rng,
                                       double decay = 1.0);

struct EmbeddingEstimate {
  double constant = 0.0;     // max over the ensemble of ||w||_q^2 / ||w||_{H^1}^2
  double exponent_q = 6.0;
  int dim = 3;
  int ensemble_size = 0;
  std::string label;          // states whether the L^6 exponent is the critical 3-D one
};

struct EmbeddingOptions {
  int ensemble_size = 12;
  int kmax = 6;               // clipped to n/3
  int refine_iterations = 40; // nonlinear power iterations per member
};

// ||w||_6^2 / ||w||_{H^1}^2 for one field.
double embedding_ratio(const ScalarField& w);

// Seeded estimate of the H^1 -> L^6 constant: random band-limited members
// (plus the constant field and the first Fourier mode), each refined by the
// power iteration w <- (I - Laplacian)^{-1}(|w|^4 w).
EmbeddingEstimate sobolev_embedding_constant(const Grid& grid, std::uint64_t seed,
                                             const EmbeddingOptions& opts = {});
// Same estimator over a caller-supplied ensemble.
EmbeddingEstimate sobolev_embedding_constant(std::span<const ScalarField> ensemble,
                                             int refine_iterations);

}  // namespace nslab

#endif  // NSLAB_NORMS_HPP_
