#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "nslab/entropy.hpp"
#include "nslab/errors.hpp"
#include "nslab/norms.hpp"

using namespace nslab;
using namespace nslab::entropy;
using std::numbers::pi;

namespace {

double sin_power_integral(double p) {
  return 2.0 * std::sqrt(pi) * std::tgamma(0.5 * (p + 1.0)) / std::tgamma(0.5 * p + 1.0);
}

// Steady pair r = rbar, v = (alpha sin x, 0, 0).
TestPair steady_pair(double rbar, double alpha, double r1) {
  PairEvaluators ev;
  ev.r = [rbar](double, const Point&) { return rbar; };
  ev.dt_r = [](double, const Point&) { return 0.0; };
  ev.v = [alpha](double, const Point& x) { return Vec3{alpha * std::sin(x[0]), 0.0, 0.0}; };
  ev.dt_v = [](double, const Point&) { return Vec3{0.0, 0.0, 0.0}; };
  return TestPair("steady", ev, r1);
}

FluidState state(const Grid& g, double t, const std::function<double(const Point&)>& rho,
                 const std::function<Vec3(const Point&)>& u) {
  FluidState s;
  s.t = t;
  s.rho = ScalarField::sample(g, rho);
  s.m = s.rho * VectorField::sample(g, u);
  s.rho_floor = 1e-3;
  return s;
}

std::vector<FluidState> static_trajectory(const Grid& g, const std::vector<double>& times,
                                          const std::function<double(const Point&)>& rho,
                                          const std::function<Vec3(const Point&)>& u) {
  std::vector<FluidState> tr;
  for (double t : times) tr.push_back(state(g, t, rho, u));
  return tr;
}

const auto kOne = [](const Point&) { return 1.0; };
const auto kZeroVec = [](const Point&) { return Vec3{0.0, 0.0, 0.0}; };

}  // namespace

TEST_CASE("continuity residual") {
  const Grid g(3, 16);
  const ModelParams p;
  CHECK(lp_norm(e1_residual(steady_pair(1.5, 0.0, 1.0), g, 0.0), kInfinity) == 0.0);
  const ScalarField e1 = e1_residual(steady_pair(2.0, 1.0, 1.0), g, 0.3);
  const ScalarField oracle = ScalarField::sample(g, [](const Point& x) { return 2.0 * std::cos(x[0]); });
  CHECK(lp_norm(e1 - oracle, kInfinity) <= 1e-12);
}

TEST_CASE("momentum residual") {
  const Grid g(3, 16);
  ModelParams p;
  p.mu = 1.2;
  p.lambda = 0.3;
  CHECK(lp_norm(e2_residual(steady_pair(1.0, 0.0, 1.0), g, 0.0, p), kInfinity) == 0.0);
  const VectorField e2 = e2_residual(steady_pair(1.0, 1.0, 1.0), g, 0.0, p);
  const ScalarField oracle = ScalarField::sample(g, [&](const Point& x) {
    return std::sin(x[0]) * std::cos(x[0]) + (2.0 * p.mu + p.lambda) * std::sin(x[0]);
  });
  CHECK(lp_norm(e2[0] - oracle, kInfinity) <= 1e-11);
  CHECK(lp_norm(e2[1], kInfinity) <= 1e-12);
}

TEST_CASE("lambda0 of a sine velocity") {
  const Grid g(1, 4096);
  ModelParams p;
  p.mu = 1.0;
  p.lambda = 0.0;
  p.gamma = 2.0;
  const EntropyConstants c{1.0, 1.0, 1.0};
  const double q_a = 12.0 / 7.0, q_b = 4.0;
  const double norm_a = 2.0 * std::pow(sin_power_integral(q_a), 1.0 / q_a);
  const double norm_b = 2.0 * std::pow(sin_power_integral(q_b), 1.0 / q_b);
  const double oracle = 1.0 + norm_a * norm_a + 2.0 * norm_b;
  const TestPair pair = steady_pair(1.0, 1.0, 1.0);
  CHECK(lambda0(pair, g, 0.0, p, c) == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(lambda0(steady_pair(1.0, 0.0, 1.0), g, 0.0, p, c) == 0.0);

  const Lambda0Parts one = lambda0_parts(pair, g, 0.0, p);
  const Lambda0Parts two = lambda0_parts(steady_pair(1.0, 2.0, 1.0), g, 0.0, p);
  CHECK(two.strain_sup == doctest::Approx(2.0 * one.strain_sup).epsilon(1e-13));
  CHECK(two.div_stress_a == doctest::Approx(4.0 * one.div_stress_a).epsilon(1e-13));
  CHECK(two.div_stress_b == doctest::Approx(2.0 * one.div_stress_b).epsilon(1e-13));

  const EntropyConstants big{1.0, 3.0, 2.0};
  CHECK(one.value(p, big) - one.value(p, c) == doctest::Approx(11.0 * one.div_stress_a).epsilon(1e-13));
}

TEST_CASE("lambda boundary branches") {
  const Grid g(2, 16);
  ModelParams p;
  p.mu = 1.7;
  const EntropyConstants c;
  const TestPair rest = steady_pair(1.0, 0.0, 1.0);
  CHECK(lambda(rest, g, 0.0, p, c) == doctest::Approx(p.mu));
  ModelParams d = p;
  d.boundary_case = BoundaryCase::Dirichlet;
  CHECK(lambda(rest, g, 0.0, d, c) == 0.0);
  const TestPair moving = steady_pair(1.0, 0.7, 1.0);
  CHECK(lambda(moving, g, 0.0, p, c) - lambda(moving, g, 0.0, d, c) == doctest::Approx(p.mu).epsilon(1e-13));
}

TEST_CASE("essential and residual masks") {
  const Grid g(1, 4);
  const ScalarField r(g, 1.0);
  const ScalarField rho(g, std::vector<double>{1.0, 1.4, 1.5, 2.0});
  const Masks m = ess_res_masks(rho, r);
  CHECK(m.ess == std::vector<unsigned char>{1, 1, 1, 0});
  CHECK(m.res == std::vector<unsigned char>{0, 0, 0, 1});
  CHECK(m.ess_fraction == doctest::Approx(0.75));
  CHECK(ess_res_masks(r, r).ess_fraction == 1.0);
  CHECK(ess_res_masks(2.0 * r, r).ess_fraction == 0.0);
}

TEST_CASE("gronwall factor") {
  const std::vector<double> t{0.0, 0.25, 0.5, 0.75, 1.0};
  CHECK(gronwall_factor(t, std::vector<double>(5, 0.0), 0.0, 1.0, 3.0) == 1.0);
  CHECK(gronwall_factor(t, std::vector<double>(5, 2.0), 0.25, 1.0, 1.5) ==
        doctest::Approx(std::exp(1.5 * 2.0 * 0.75)).epsilon(1e-14));
  CHECK(gronwall_factor(t, t, 0.0, 1.0, 1.0) == doctest::Approx(std::exp(0.5)).epsilon(1e-14));
  CHECK(gronwall_factor(t, t, 0.1, 0.6, 1.0) == doctest::Approx(std::exp(0.5 * (0.36 - 0.01))).epsilon(1e-14));
  CHECK(gronwall_factor(t, t, 0.3, 0.9, 2.0) >= 1.0);
  CHECK_THROWS_AS(gronwall_factor(t, t, 0.6, 0.5, 1.0), ArgumentError);
  CHECK_THROWS_AS(gronwall_factor(t, t, 0.0, 1.5, 1.0), ArgumentError);
}

TEST_CASE("relative entropy left side") {
  const Grid g(3, 8);
  ModelParams p;
  p.mu = 1.0;
  p.lambda = 0.0;
  const TestPair rest = steady_pair(1.0, 0.0, 1.0);

  const auto same = static_trajectory(g, {0.0, 0.5, 1.0}, kOne, kZeroVec);
  for (double v : relative_entropy_ls(same, rest, p).total) CHECK(v == 0.0);

  const auto bump_rho = [](const Point& x) { return 1.0 + 0.2 * std::cos(x[0]); };
  const auto gapped = static_trajectory(g, {0.0, 0.5, 1.0}, bump_rho, kZeroVec);
  // gap = (rho - r)^2 for gamma = 2, A = 1
  const double gap = 0.04 * 4.0 * pi * pi * pi;
  for (double v : relative_entropy_ls(gapped, rest, p).total) CHECK(v == doctest::Approx(gap).epsilon(1e-12));

  const auto shear = static_trajectory(g, {0.0, 0.5, 1.0}, kOne,
                                       [](const Point& x) { return Vec3{std::sin(x[0]), 0.0, 0.0}; });
  const LsSeries ls = relative_entropy_ls(shear, rest, p);
  const double oracle = 0.5 * 4.0 * pi * pi * pi + 0.5 * (2.0 * p.mu + p.lambda) * 4.0 * pi * pi * pi * 1.0;
  CHECK(ls.total.back() == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(ls.energy.front() == doctest::Approx(2.0 * pi * pi * pi).epsilon(1e-12));
  CHECK(ls.dissipation.front() == 0.0);

  auto unordered = shear;
  std::swap(unordered[0], unordered[1]);
  CHECK_THROWS_AS(relative_entropy_ls(unordered, rest, p), ArgumentError);
  auto mixed = static_trajectory(g, {0.0, 0.5}, kOne, kZeroVec);
  mixed.push_back(state(Grid(3, 16), 1.0, kOne, kZeroVec));
  CHECK_THROWS_AS(relative_entropy_ls(mixed, rest, p), ArgumentError);
}

TEST_CASE("relative entropy right side") {
  const Grid g(3, 8);
  ModelParams p;
  const EntropyConstants c{0.7, 1.0, 1.0};
  const TestPair rest = steady_pair(1.0, 0.0, 1.0);

  const auto same = static_trajectory(g, {0.0, 0.5, 1.0}, kOne, kZeroVec);
  for (double v : relative_entropy_rs(same, rest, p, c).total) CHECK(v == 0.0);

  const auto bump_rho = [](const Point& x) { return 1.0 + 0.2 * std::cos(x[0]); };
  const auto gapped = static_trajectory(g, {0.0, 0.25, 0.5, 1.0}, bump_rho, kZeroVec);
  const double e0 = 0.04 * 4.0 * pi * pi * pi;
  const RsSeries rs = relative_entropy_rs(gapped, rest, p, c);
  for (std::size_t k = 0; k < rs.times.size(); ++k)
    CHECK(rs.total[k] == doctest::Approx(e0 * std::exp(c.C0 * p.mu * rs.times[k])).epsilon(1e-12));
}

TEST_CASE("continuity residual term of the right side") {
  const Grid g(1, 1024);
  ModelParams p;
  const EntropyConstants c{0.0, 1.0, 1.0};
  const TestPair pair = steady_pair(2.0, 1.0, 1.0);
  const auto tr = static_trajectory(g, {0.0, 0.5, 1.0}, kOne,
                                    [](const Point& x) { return Vec3{std::sin(x[0]), 0.0, 0.0}; });
  const RsSeries rs = relative_entropy_rs(tr, pair, p, c);
  // |(r - rho) P''(r) E1| = 1 * 2 * |2 cos x|, whose integral over one period is 16.
  CHECK(rs.e1.back() == doctest::Approx(16.0).epsilon(1e-5));
  CHECK(rs.e2.back() == 0.0);
  CHECK(rs.initial.back() == doctest::Approx(2.0 * pi).epsilon(1e-12));
}

TEST_CASE("right side grows with C0") {
  const Grid g(2, 16);
  ModelParams p;
  const TestPair pair = steady_pair(1.0, 0.5, 0.5);
  const auto tr = static_trajectory(g, {0.0, 0.1, 0.2, 0.3},
                                    [](const Point& x) { return 1.0 + 0.1 * std::sin(x[1]); },
                                    [](const Point& x) { return Vec3{0.4 * std::sin(x[0]), 0.1, 0.0}; });
  const EntropyTerms terms = entropy_terms(tr, pair, p);
  double prev = -1.0;
  for (double C0 : {0.0, 0.5, 1.0, 4.0}) {
    const RsSeries rs = assemble_rs(terms, p, EntropyConstants{C0, 1.0, 1.0});
    CHECK(rs.total.back() >= prev);
    prev = rs.total.back();
  }
  const RsSeries direct = relative_entropy_rs(tr, pair, p, EntropyConstants{0.5, 1.0, 1.0});
  const RsSeries assembled = assemble_rs(terms, p, EntropyConstants{0.5, 1.0, 1.0});
  for (std::size_t k = 0; k < direct.total.size(); ++k) CHECK(direct.total[k] == assembled.total[k]);
}

TEST_CASE("dissipative verdict") {
  const Grid g(2, 16);
  ModelParams p;
  const TestPair pair = steady_pair(1.0, 0.5, 0.5);
  const auto exact = static_trajectory(g, {0.0, 0.5, 1.0}, kOne,
                                       [](const Point& x) { return Vec3{0.5 * std::sin(x[0]), 0.0, 0.0}; });
  const EntropyReport ok = dissipative_verdict(exact, pair, p, EntropyConstants{}, 1e-8);
  CHECK(ok.verdict);
  CHECK(ok.max_ls == 0.0);
  CHECK_FALSE(ok.first_violation_time.has_value());

  const TestPair rest = steady_pair(1.0, 0.0, 1.0);
  const auto moving = static_trajectory(g, {0.0, 0.5, 1.0}, kOne,
                                        [](const Point& x) { return Vec3{std::sin(x[1]), 0.0, 0.0}; });
  const EntropyReport bad = dissipative_verdict(moving, rest, p, EntropyConstants{0.0, 1.0, 1.0}, 1e-8);
  CHECK_FALSE(bad.verdict);
  REQUIRE(bad.first_violation_time.has_value());
  CHECK(*bad.first_violation_time == 0.5);
  CHECK(bad.first_violation_term == "LS_dissipation");
  CHECK(bad.min_slack < 0.0);

  const nlohmann::json j = bad;
  CHECK(j["verdict"] == false);
  CHECK(j["first_violation"]["t"] == 0.5);
  const auto path = (std::filesystem::temp_directory_path() / "nslab_entropy_report.csv").string();
  write_report_csv(path, bad);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,LS,LS_energy,LS_dissipation,RS,RS_initial,RS_E1,RS_E2,lambda,ess_fraction");
  std::filesystem::remove(path);
}

TEST_CASE("sampled pairs differentiate across samples") {
  const Grid g(1, 8);
  const std::vector<double> t{0.0, 0.1, 0.3, 0.6};
  std::vector<ScalarField> r;
  std::vector<VectorField> v;
  for (double s : t) {
    r.emplace_back(g, 1.0 + s * s);
    v.emplace_back(g, 2.0 * s);
  }
  const TestPair pair = TestPair::from_samples("sampled", t, r, v, 1.0);
  CHECK_FALSE(pair.analytic());
  CHECK(pair.evaluators() == nullptr);
  for (double s : t) {
    CHECK(pair.dt_r(g, s)[3] == doctest::Approx(2.0 * s).epsilon(1e-12));
    CHECK(pair.dt_v(g, s)[0][3] == doctest::Approx(2.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(pair.r(g, 0.2), ArgumentError);
  CHECK_THROWS_AS(TestPair::from_samples("short", {0.0, 1.0}, {r[0], r[1]}, {v[0], v[1]}, 1.0), ArgumentError);
}

TEST_CASE("pair validation") {
  const Grid g(2, 8);
  ModelParams p;
  CHECK_NOTHROW(steady_pair(1.0, 0.5, 1.0).validate(g, 0.0, p));
  CHECK_THROWS_AS(steady_pair(1.0, 0.5, 1.5).validate(g, 0.0, p), ArgumentError);
  CHECK_THROWS_AS(steady_pair(1.0, 0.5, 0.0).validate(g, 0.0, p), ArgumentError);
  p.gamma = 3.0;
  CHECK_THROWS_AS(steady_pair(1.0, 0.5, 1.0).validate(g, 0.0, p), ArgumentError);
}

TEST_CASE("entropy constants") {
  CHECK_NOTHROW((EntropyConstants{0.0, 1.0, 1.0}.validate()));
  CHECK_THROWS_AS((EntropyConstants{-1.0, 1.0, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((EntropyConstants{1.0, 0.0, 1.0}.validate()), ConfigError);
  const nlohmann::json j = EntropyConstants{2.0, 3.0, 4.0};
  CHECK(j.at("C0") == 2.0);
  const EntropyConstants back = j.get<EntropyConstants>();
  CHECK(back.c_gamma == 4.0);
}
