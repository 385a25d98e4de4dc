#include "nslab/stress.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nslab/errors.hpp"
#include "nslab/norms.hpp"

namespace nslab::stress {

TensorField strain_rate(const VectorField& v, Backend b) {
  TensorField j = jacobian(v, b);
  TensorField out = j + j.transpose();
  out *= 0.5;
  return out;
}

namespace {

TensorField stress_from_jacobian(const TensorField& j, const ModelParams& p) {
  TensorField s = j + j.transpose();
  s *= p.mu;
  const ScalarField div = j.trace();
  for (int i = 0; i < j.dim(); ++i) s(i, i) += p.lambda * div;
  return s;
}

}  // namespace

TensorField viscous_stress(const VectorField& v, const ModelParams& p, Backend b) {
  return stress_from_jacobian(jacobian(v, b), p);
}

VectorField stress_divergence(const VectorField& v, const ModelParams& p, Backend b) {
  VectorField out = vector_laplacian(v, b);
  out *= p.mu;
  VectorField gd = gradient(divergence(v, b), b);
  gd *= (p.mu + p.lambda);
  out += gd;
  return out;
}

double dissipation(const VectorField& u, const VectorField& v, const ModelParams& p, Backend b) {
  require_same_grid(u.grid(), v.grid(), "dissipation");
  const TensorField j = jacobian(u - v, b);
  return integral(contract(stress_from_jacobian(j, p), j));
}

double dissipation_norm_form(const VectorField& u, const VectorField& v, const ModelParams& p,
                             Backend b) {
  require_same_grid(u.grid(), v.grid(), "dissipation_norm_form");
  const VectorField w = u - v;
  const double g = lp_norm(jacobian(w, b), 2.0);
  const double d = lp_norm(divergence(w, b), 2.0);
  return p.mu * g * g + (p.mu + p.lambda) * d * d;
}

double korn_ratio(const VectorField& w, const ScalarField& weight, Backend b) {
  require_same_grid(w.grid(), weight.grid(), "korn_ratio");
  const double grad = lp_norm(jacobian(w, b), 2.0);
  const ScalarField root = weight.map([](double x) { return std::sqrt(std::max(x, 0.0)); });
  const double weighted = lp_norm(root * w, 2.0);
  const double denom = grad + weighted;
  if (!(denom > 0.0)) throw ArgumentError("korn_ratio: zero denominator");
  return h1_norm(w, b) / denom;
}

KornEstimate korn_type_constant(const Grid& grid, const ScalarField& weight, const ModelParams& p,
                                std::uint64_t seed, const KornOptions& opts) {
  require_same_grid(grid, weight.grid(), "korn_type_constant");
  if (weight.min() < 0.0) throw HypothesisError("korn_type_constant: weight must be nonnegative");
  KornEstimate est;
  est.weight_mass = integral(weight);
  est.weight_lgamma = lp_norm(weight, p.gamma);
  if (!(est.weight_mass > 0.0))
    throw HypothesisError("korn_type_constant: weight has zero mass (M0 hypothesis fails)");

  std::mt19937_64 rng(seed);
  const int kmax = std::max(1, std::min(opts.kmax, grid.n() / 3));
  auto eval = [&](const VectorField& w) {
    ++est.evaluations;
    return korn_ratio(w, weight);
  };

  std::vector<VectorField> members;
  for (int c = 0; c < grid.dim(); ++c) {
    VectorField e(grid);
    for (auto& x : e[c].values()) x = 1.0;
    members.push_back(std::move(e));
  }
  for (int m = 0; m < opts.ensemble_size; ++m)
    members.push_back(random_band_limited_vector(grid, kmax, rng));

  for (auto& w : members) {
    double best = eval(w);
    for (int s = 0; s < opts.refine_steps; ++s) {
      VectorField trial = random_band_limited_vector(grid, kmax, rng);
      const double scale = opts.step * lp_norm(w, 2.0) / std::max(lp_norm(trial, 2.0), 1e-300);
      trial *= scale;
      trial += w;
      const double r = eval(trial);
      if (r > best) {
        best = r;
        w = std::move(trial);
      }
    }
    est.constant = std::max(est.constant, best);
  }
  return est;
}

}  // namespace nslab::stress
