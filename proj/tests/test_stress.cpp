#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "nslab/errors.hpp"
#include "nslab/norms.hpp"
#include "nslab/stress.hpp"

using namespace nslab;
using std::numbers::pi;

namespace {

ModelParams lame(double mu, double lambda) {
  ModelParams p;
  p.mu = mu;
  p.lambda = lambda;
  return p;
}

VectorField sin_x_field(const Grid& g) {
  return VectorField::sample(g, [](const Point& x) { return Vec3{std::sin(x[0]), 0.0, 0.0}; });
}

VectorField sin_y_field(const Grid& g) {
  return VectorField::sample(g, [](const Point& x) { return Vec3{std::sin(x[1]), 0.0, 0.0}; });
}

double max_abs(const ScalarField& f) { return lp_norm(f, kInfinity); }

}  // namespace

TEST_CASE("strain rate") {
  const Grid g(3, 16);
  CHECK(lp_norm(stress::strain_rate(VectorField(g)), kInfinity) == 0.0);
  const TensorField D = stress::strain_rate(sin_x_field(g));
  CHECK(max_abs(D(0, 0) - ScalarField::sample(g, [](const Point& x) { return std::cos(x[0]); })) <= 1e-12);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i + j > 0) CHECK(max_abs(D(i, j)) <= 1e-12);
  const TensorField Dy = stress::strain_rate(sin_y_field(g));
  const ScalarField half_cos = ScalarField::sample(g, [](const Point& x) { return 0.5 * std::cos(x[1]); });
  CHECK(max_abs(Dy(0, 1) - half_cos) <= 1e-12);
  CHECK(max_abs(Dy(1, 0) - half_cos) <= 1e-12);
}

TEST_CASE("viscous stress") {
  const Grid g(3, 8);
  const ModelParams p = lame(1.5, 0.25);
  const VectorField id = VectorField::sample(g, [](const Point& x) {
    return Vec3{std::sin(x[0]), std::sin(x[1]), std::sin(x[2])};
  });
  // At the origin node the Jacobian of id is the identity.
  const std::size_t origin = g.index({4, 4, 4});
  const TensorField S = stress::viscous_stress(id, p);
  for (int i = 0; i < 3; ++i) {
    CHECK(S(i, i)[origin] == doctest::Approx(2.0 * p.mu + 3.0 * p.lambda).epsilon(1e-12));
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(S(i, j)[origin]) <= 1e-12);
  }
  const TensorField Sy = stress::viscous_stress(sin_y_field(g), p);
  CHECK(Sy(0, 1)[origin] == doctest::Approx(p.mu).epsilon(1e-12));
  CHECK(Sy(1, 0)[origin] == doctest::Approx(p.mu).epsilon(1e-12));
  CHECK(max_abs(Sy.trace()) <= 1e-12);
}

TEST_CASE("stress divergence") {
  const Grid g(3, 16);
  const ModelParams p = lame(1.3, 0.4);
  CHECK(lp_norm(stress::stress_divergence(VectorField(g), p), kInfinity) == 0.0);
  const VectorField dx = stress::stress_divergence(sin_x_field(g), p);
  const ScalarField sx = ScalarField::sample(g, [](const Point& x) { return std::sin(x[0]); });
  CHECK(max_abs(dx[0] + (2.0 * p.mu + p.lambda) * sx) <= 1e-11);
  CHECK(max_abs(dx[1]) <= 1e-12);
  const VectorField dy = stress::stress_divergence(sin_y_field(g), p);
  const ScalarField sy = ScalarField::sample(g, [](const Point& x) { return std::sin(x[1]); });
  CHECK(max_abs(dy[0] + p.mu * sy) <= 1e-11);

  std::mt19937_64 rng(11);
  const VectorField w = random_band_limited_vector(g, 4, rng);
  const VectorField route = tensor_divergence(stress::viscous_stress(w, p));
  CHECK(lp_norm(route - stress::stress_divergence(w, p), kInfinity) <= 1e-10);
}

TEST_CASE("dissipation analytic values") {
  const Grid g(3, 16);
  const ModelParams p = lame(1.0, 0.5);
  const VectorField zero(g);
  CHECK(stress::dissipation(sin_x_field(g), sin_x_field(g), p) == 0.0);
  CHECK(stress::dissipation(sin_x_field(g), zero, p) ==
        doctest::Approx((2.0 * p.mu + p.lambda) * 4.0 * pi * pi * pi).epsilon(1e-12));
  CHECK(stress::dissipation(sin_y_field(g), zero, p) == doctest::Approx(p.mu * 4.0 * pi * pi * pi).epsilon(1e-12));
  CHECK_THROWS_AS(stress::dissipation(sin_x_field(g), VectorField(Grid(3, 8)), p), ArgumentError);
}

TEST_CASE("dissipation routes agree and are nonnegative") {
  std::mt19937_64 rng(13);
  const Grid g(2, 16);
  for (double lambda : {0.0, 1.0, -0.6}) {
    const ModelParams p = lame(1.0, lambda);
    for (int i = 0; i < 5; ++i) {
      const VectorField u = random_band_limited_vector(g, 5, rng);
      const VectorField v = random_band_limited_vector(g, 5, rng);
      const double a = stress::dissipation(u, v, p);
      const double b = stress::dissipation_norm_form(u, v, p);
      CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));
      CHECK(a >= 0.0);
    }
  }
}

TEST_CASE("korn ratio and estimator") {
  const Grid g(3, 8);
  const ScalarField one(g, 1.0);
  const VectorField c = VectorField::sample(g, [](const Point&) { return Vec3{0.3, -1.0, 2.0}; });
  CHECK(stress::korn_ratio(c, one) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(stress::korn_ratio(sin_x_field(g), one) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  stress::KornOptions opts;
  opts.ensemble_size = 3;
  opts.refine_steps = 10;
  const ModelParams p;
  const stress::KornEstimate est = stress::korn_type_constant(g, one, p, 9, opts);
  CHECK(est.constant >= 1.0 - 1e-12);
  CHECK(std::isfinite(est.constant));
  CHECK(est.weight_mass == doctest::Approx(8.0 * pi * pi * pi).epsilon(1e-13));
  CHECK(stress::korn_type_constant(g, one, p, 9, opts).constant == est.constant);
  CHECK_THROWS_AS(stress::korn_type_constant(g, ScalarField(g, 0.0), p, 9, opts), HypothesisError);
  ScalarField negative(g, 1.0);
  negative[0] = -1.0;
  CHECK_THROWS_AS(stress::korn_type_constant(g, negative, p, 9, opts), HypothesisError);
}
