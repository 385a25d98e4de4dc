#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>

#include <doctest.h>

#include "nslab/errors.hpp"
#include "nslab/field.hpp"
#include "nslab/norms.hpp"
#include "nslab/operators.hpp"
#include "nslab/snapshot.hpp"

using namespace nslab;
using std::numbers::pi;

namespace {

// int_0^{2 pi} |sin x|^p dx
double sin_power_integral(double p) {
  return 2.0 * std::sqrt(pi) * std::tgamma(0.5 * (p + 1.0)) / std::tgamma(0.5 * p + 1.0);
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

ScalarField sample(const Grid& g, double (*f)(const Point&)) { return ScalarField::sample(g, f); }

double sin_x(const Point& x) { return std::sin(x[0]); }
double cos_x(const Point& x) { return std::cos(x[0]); }

}  // namespace

TEST_CASE("grid geometry and indexing") {
  const Grid g(3, 8);
  CHECK(g.size() == 512);
  CHECK(g.h() == doctest::Approx(2.0 * pi / 8.0));
  CHECK(g.volume() == doctest::Approx(8.0 * pi * pi * pi).epsilon(1e-14));
  for (std::size_t i : {std::size_t{0}, std::size_t{77}, std::size_t{511}}) CHECK(g.index(g.multi_index(i)) == i);
  const std::size_t i = g.index({7, 0, 3});
  CHECK(g.multi_index(g.shifted(i, 0, 1)) == std::array<int, 3>{0, 0, 3});
  CHECK(g.multi_index(g.shifted(i, 1, -1)) == std::array<int, 3>{7, 7, 3});
  CHECK(g.coordinate(0)[0] == doctest::Approx(-pi));
  CHECK(g.stride(2) == 1);
  CHECK_THROWS_AS(Grid(4, 8), ArgumentError);
  CHECK_THROWS_AS(Grid(2, 1), ArgumentError);
}

TEST_CASE("field arithmetic checks grids") {
  const Grid a(2, 8), b(2, 16);
  ScalarField f(a, 1.0), h(b, 2.0);
  CHECK_THROWS_AS(f += h, ArgumentError);
  const ScalarField s = 3.0 * f + f;
  CHECK(s.min() == 4.0);
  CHECK(s.max() == 4.0);
  CHECK_THROWS_AS(VectorField(std::vector<ScalarField>{f}), ArgumentError);
  ScalarField bad(a, 0.0);
  bad[3] = std::nan("");
  CHECK_FALSE(bad.all_finite());
}

TEST_CASE("gradient of a constant vanishes") {
  for (Backend b : {Backend::Spectral, Backend::FD2}) {
    const VectorField g = gradient(ScalarField(Grid(3, 8), 2.5), b);
    CHECK(lp_norm(g, kInfinity) <= 1e-13);
  }
}

TEST_CASE("spectral divergence and laplacian of sin x") {
  const Grid g(3, 16);
  const VectorField w = VectorField::sample(g, [](const Point& x) { return Vec3{std::sin(x[0]), 0.0, 0.0}; });
  CHECK(max_abs_diff(divergence(w), sample(g, cos_x)) <= 1e-12);
  const ScalarField lap = laplacian(sample(g, sin_x));
  CHECK(max_abs_diff(lap, -1.0 * sample(g, sin_x)) <= 1e-12);
}

TEST_CASE("jacobian convention and tensor divergence") {
  const Grid g(2, 16);
  const VectorField w = VectorField::sample(g, [](const Point& x) { return Vec3{std::sin(x[1]), 0.0, 0.0}; });
  const TensorField J = jacobian(w);
  const ScalarField cy = ScalarField::sample(g, [](const Point& x) { return std::cos(x[1]); });
  CHECK(max_abs_diff(J(0, 1), cy) <= 1e-12);
  CHECK(lp_norm(J(1, 0), kInfinity) <= 1e-12);
  const VectorField d = tensor_divergence(J);
  const ScalarField sy = ScalarField::sample(g, [](const Point& x) { return -std::sin(x[1]); });
  CHECK(max_abs_diff(d[0], sy) <= 1e-12);
  CHECK(max_abs_diff(d[0], vector_laplacian(w)[0]) <= 1e-12);
}

TEST_CASE("finite differences converge at second order") {
  std::vector<double> err;
  for (int n : {32, 64, 128}) {
    const Grid g(1, n);
    const ScalarField f = sample(g, sin_x);
    err.push_back(max_abs_diff(partial(f, 0, Backend::FD2), sample(g, cos_x)));
  }
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::log2(err[1] / err[2]) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("integrals and norms") {
  const Grid g(3, 8);
  CHECK(integral(ScalarField(g, 1.0)) == doctest::Approx(8.0 * pi * pi * pi).epsilon(1e-14));
  const ScalarField s = sample(g, sin_x);
  CHECK(lp_norm(s, 2.0) == doctest::Approx(std::sqrt(4.0 * pi * pi * pi)).epsilon(1e-13));
  CHECK(lp_norm(s, kInfinity) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lp_norm(s, 6.0) == doctest::Approx(std::pow(sin_power_integral(6.0) * 4.0 * pi * pi, 1.0 / 6.0)).epsilon(1e-13));
  CHECK_THROWS_AS(lp_norm(s, 0.5), ArgumentError);
  CHECK(h1_norm(s) == doctest::Approx(std::sqrt(8.0 * pi * pi * pi)).epsilon(1e-12));
  CHECK(mean(s) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("poincare wirtinger ratios") {
  const Grid g(3, 16);
  CHECK(poincare_wirtinger_check(sample(g, sin_x), 2, 2) == doctest::Approx(1.0).epsilon(1e-12));
  const ScalarField s2 = ScalarField::sample(g, [](const Point& x) { return std::sin(2.0 * x[0]); });
  CHECK(poincare_wirtinger_check(s2, 2, 2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(poincare_wirtinger_check(ScalarField(g, 3.0), 2, 2), ArgumentError);
}

TEST_CASE("embedding estimator") {
  const Grid g(3, 16);
  const double volume = 8.0 * pi * pi * pi;
  const double sin_ratio =
      std::pow(sin_power_integral(6.0) * 4.0 * pi * pi, 1.0 / 3.0) / (2.0 * 4.0 * pi * pi * pi);
  const ScalarField s = sample(g, sin_x);
  CHECK(embedding_ratio(s) == doctest::Approx(sin_ratio).epsilon(1e-12));
  CHECK(embedding_ratio(ScalarField(g, 1.0)) == doctest::Approx(std::pow(volume, -2.0 / 3.0)).epsilon(1e-12));

  const std::vector<ScalarField> single{s};
  CHECK(sobolev_embedding_constant(single, 0).constant == embedding_ratio(s));

  EmbeddingOptions opts;
  opts.ensemble_size = 4;
  opts.refine_iterations = 10;
  const Grid small(3, 8);
  const EmbeddingEstimate est = sobolev_embedding_constant(small, 42, opts);
  CHECK(est.constant >= embedding_ratio(sample(small, sin_x)));
  CHECK(est.constant >= std::pow(volume, -2.0 / 3.0) * (1.0 - 1e-12));
  CHECK(est.label.find("critical") != std::string::npos);
  CHECK(sobolev_embedding_constant(small, 42, opts).constant == est.constant);
  CHECK(sobolev_embedding_constant(Grid(2, 16), 1, opts).label.find("subcritical") != std::string::npos);
}

TEST_CASE("dealias removes the upper third of the spectrum") {
  const Grid g(1, 12);
  const ScalarField lo = ScalarField::sample(g, [](const Point& x) { return std::cos(4.0 * x[0]); });
  const ScalarField hi = ScalarField::sample(g, [](const Point& x) { return std::cos(5.0 * x[0]); });
  CHECK(max_abs_diff(dealias(lo), lo) <= 1e-13);
  CHECK(lp_norm(dealias(hi), kInfinity) <= 1e-13);
}

TEST_CASE("convolution matches a direct sum") {
  std::mt19937_64 rng(3);
  const Grid g(2, 8);
  const ScalarField f = random_band_limited(g, 3, rng);
  const ScalarField h = random_band_limited(g, 3, rng);
  const ScalarField c = convolve(f, h);
  const double w = g.h() * g.h();
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto xi = g.multi_index(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const auto xj = g.multi_index(j);
      // x_i - x_j sits at node offset i - j + n/2 since the origin is node n/2.
      const std::size_t k = g.index({(xi[0] - xj[0] + 12) % 8, (xi[1] - xj[1] + 12) % 8, 0});
      acc += f[k] * h[j] * w;
    }
    err = std::max(err, std::abs(acc - c[i]));
  }
  CHECK(err <= 1e-12);
}

TEST_CASE("snapshot round trip") {
  std::mt19937_64 rng(5);
  const Grid g(2, 8);
  const std::vector<ScalarField> comps{random_band_limited(g, 2, rng), random_band_limited(g, 2, rng)};
  const auto path = (std::filesystem::temp_directory_path() / "nslab_snapshot_test.bin").string();
  write_snapshot(path, 0.25, comps);
  const Snapshot s = read_snapshot(path);
  CHECK(s.grid == g);
  CHECK(s.time == 0.25);
  REQUIRE(s.components.size() == 2);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(s.components[1][i] == comps[1][i]);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_snapshot(path), IoError);
}
