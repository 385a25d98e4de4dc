#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "nslab/entropy.hpp"
#include "nslab/errors.hpp"
#include "nslab/manufactured.hpp"
#include "nslab/norms.hpp"
#include "nslab/solver.hpp"

using namespace nslab;
using namespace nslab::solver;
using std::numbers::pi;

namespace {

FluidState make_state(const Grid& g, const std::function<double(const Point&)>& rho,
                      const std::function<Vec3(const Point&)>& u, double floor = 1e-3) {
  FluidState s;
  s.rho = ScalarField::sample(g, rho);
  s.m = s.rho * VectorField::sample(g, u);
  s.rho_floor = floor;
  return s;
}

const auto kOne = [](const Point&) { return 1.0; };
const auto kRest = [](const Point&) { return Vec3{0.0, 0.0, 0.0}; };

double max_abs(const ScalarField& f) { return lp_norm(f, kInfinity); }

FluidState smooth_state(const Grid& g) {
  return make_state(
      g, [](const Point& x) { return 1.0 + 0.2 * std::sin(x[0]) * std::cos(x[1]); },
      [](const Point& x) { return Vec3{0.3 * std::sin(x[1]), -0.2 * std::cos(x[0]), 0.0}; });
}

}  // namespace

TEST_CASE("rest state is stationary") {
  const Grid g(2, 16);
  const ModelParams p;
  const Rhs r = brenner_rhs(make_state(g, kOne, kRest), p);
  CHECK(max_abs(r.drho) <= 1e-14);
  CHECK(lp_norm(r.dm, kInfinity) <= 1e-14);
  SolverConfig c;
  const FluidState s0 = make_state(g, kOne, kRest);
  const FluidState s1 = step(s0, p, c);
  CHECK(max_abs(s1.rho - s0.rho) <= 1e-14);
  CHECK(lp_norm(s1.m, kInfinity) <= 1e-14);
  CHECK(s1.t > 0.0);
}

TEST_CASE("right-hand side against a symbolic oracle") {
  const Grid g(2, 32);
  ModelParams p;
  p.mu = 1.0;
  p.lambda = 0.0;
  p.eps = 0.0;
  const FluidState s = make_state(g, kOne, [](const Point& x) { return Vec3{std::sin(x[0]), 0.0, 0.0}; });
  const Rhs r = brenner_rhs(s, p);
  const ScalarField drho = ScalarField::sample(g, [](const Point& x) { return -std::cos(x[0]); });
  const ScalarField dm = ScalarField::sample(g, [&](const Point& x) {
    return -std::sin(2.0 * x[0]) - (2.0 * p.mu + p.lambda) * std::sin(x[0]);
  });
  CHECK(max_abs(r.drho - drho) <= 1e-12);
  CHECK(max_abs(r.dm[0] - dm) <= 1e-12);
  CHECK(max_abs(r.dm[1]) <= 1e-12);
}

TEST_CASE("regularization terms of the right-hand side") {
  const Grid g(1, 64);
  ModelParams p;
  p.eps = 0.05;
  p.a = 1.0;
  p.beta = 5.0;
  const FluidState s = make_state(g, [](const Point& x) { return 1.0 + 0.1 * std::sin(x[0]); }, kRest);
  const Rhs r = brenner_rhs(s, p);
  const ScalarField drho = ScalarField::sample(g, [&](const Point& x) { return -0.1 * p.eps * std::sin(x[0]); });
  const ScalarField dm = ScalarField::sample(g, [&](const Point& x) {
    const double rho = 1.0 + 0.1 * std::sin(x[0]);
    const double drho_dx = 0.1 * std::cos(x[0]);
    return -(p.A * p.gamma * std::pow(rho, p.gamma - 1.0) + std::pow(p.eps, p.a) * p.beta * std::pow(rho, p.beta - 1.0)) *
           drho_dx;
  });
  CHECK(max_abs(r.drho - drho) <= 1e-12);
  CHECK(max_abs(r.dm[0] - dm) <= 1e-11);
}

TEST_CASE("vacuum is detected") {
  const Grid g(1, 16);
  const ModelParams p;
  FluidState s = make_state(g, kOne, kRest, 0.1);
  s.rho[3] = 0.01;
  CHECK_THROWS_AS(brenner_rhs(s, p), VacuumError);
  SolverConfig c;
  c.t_end = 0.01;
  c.rho_floor = 0.1;
  const Trajectory tr = run(s, p, c);
  CHECK(tr.aborted);
  CHECK(tr.abort_reason.rfind("vacuum", 0) == 0);
  CHECK(tr.diagnostic.has_value());
}

TEST_CASE("time step rule") {
  const Grid g(2, 16);
  ModelParams p;
  p.eps = 0.01;
  SolverConfig c;
  c.cfl = 0.4;
  const FluidState s = make_state(g, kOne, [](const Point&) { return Vec3{0.5, 0.0, 0.0}; });
  const double h = g.h();
  const double cs = std::sqrt(2.0 + p.eps * 5.0);
  const double oracle = 0.4 * std::min(h / (0.5 + cs), h * h / (2.0 * 2.0 * 2.0));
  CHECK(stable_dt(s, p, c) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("mass is conserved") {
  const Grid g(2, 32);
  const ModelParams p;
  SolverConfig c;
  FluidState s = smooth_state(g);
  const double m0 = integral(s.rho);
  for (int k = 0; k < 100; ++k) s = step(s, p, c);
  CHECK(std::abs(integral(s.rho) - m0) <= 1e-11 * m0);
}

TEST_CASE("energy and dissipation rate") {
  const Grid g(3, 8);
  ModelParams p;
  p.eps = 0.01;
  const double e = energy(make_state(g, kOne, kRest), p);
  CHECK(e == doctest::Approx((1.0 + std::pow(p.eps, p.a) / 4.0) * 8.0 * pi * pi * pi).epsilon(1e-13));
  CHECK(energy_dissipation_rate(make_state(g, [](const Point&) { return 2.0; }, kRest), p) == 0.0);
  const FluidState shear = make_state(g, kOne, [](const Point& x) { return Vec3{std::sin(x[0]), 0.0, 0.0}; });
  CHECK(energy_dissipation_rate(shear, p) == doctest::Approx(2.0 * 4.0 * pi * pi * pi).epsilon(1e-12));
}

TEST_CASE("energy monitor") {
  const Grid g(2, 16);
  const ModelParams p;
  SolverConfig c;
  c.t_end = 0.05;
  const Trajectory rest = run(make_state(g, kOne, kRest), p, c);
  const EnergyMonitorReport r0 = energy_inequality_monitor(rest.samples, p, 1e-12);
  CHECK(r0.pass);
  CHECK(r0.max_abs_defect <= 1e-10);

  const Trajectory smooth = run(smooth_state(g), p, c);
  CHECK(energy_inequality_monitor(smooth.samples, p, 1.0).pass);

  // An energy increase between samples is reported as a positive defect.
  std::vector<FluidState> spiked{make_state(g, kOne, kRest), make_state(g, kOne, kRest)};
  spiked[1].t = 0.01;
  spiked[1].rho = ScalarField(g, 1.1);
  const EnergyMonitorReport bad = energy_inequality_monitor(spiked, p, 1e-6);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_defect > 1.0);
}

TEST_CASE("run keeps strided samples and the final state") {
  const Grid g(2, 16);
  const ModelParams p;
  SolverConfig c;
  c.t_end = 0.05;
  c.sample_stride = 3;
  const Trajectory tr = run(smooth_state(g), p, c);
  CHECK_FALSE(tr.aborted);
  CHECK(tr.samples.front().t == 0.0);
  CHECK(tr.samples.back().t == doctest::Approx(c.t_end).epsilon(1e-14));
  CHECK(tr.ledger.size() == static_cast<std::size_t>(tr.steps + 1));
  CHECK(tr.samples.size() == static_cast<std::size_t>(tr.steps / 3 + 1 + (tr.steps % 3 == 0 ? 0 : 1)));

  c.fixed_dt = 0.0045;
  const Trajectory fixed = run(smooth_state(g), p, c);
  CHECK(fixed.steps == 11);
  CHECK(fixed.samples.back().t == doctest::Approx(0.05).epsilon(1e-14));

  const Trajectory again = run(smooth_state(g), p, c);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(again.samples.back().rho[i] == fixed.samples.back().rho[i]);

  const auto dir = std::filesystem::temp_directory_path() / "nslab_solver_test";
  std::filesystem::create_directories(dir);
  write_ledger_csv((dir / "ledger.csv").string(), fixed);
  std::ifstream in(dir / "ledger.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,mass,momentum_0,momentum_1,energy,dissipation,min_rho,max_u,dt");
  write_snapshots(dir.string(), fixed);
  CHECK(std::filesystem::exists(dir / "snap_000000.bin"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("renormalized continuity residual") {
  const Grid g(2, 16);
  const ModelParams p;
  SolverConfig c;
  c.t_end = 0.02;
  const Trajectory rest = run(make_state(g, kOne, kRest), p, c);
  CHECK(renormalized_continuity_residual(rest.samples, renorm_square(), p).max_l1 <= 1e-12);
  const Trajectory smooth = run(smooth_state(g), p, c);
  const RenormReport id = renormalized_continuity_residual(smooth.samples, renorm_identity(), p);
  CHECK(id.times.size() + 2 == smooth.samples.size());
  CHECK(id.max_l1 <= 1e-3);
  CHECK(renormalized_continuity_residual(smooth.samples, renorm_entropy(), p).max_l1 <= 1e-3);
  CHECK_THROWS_AS(renorm_entropy().B(0.0), DomainError);
  CHECK(renorm_entropy().dB(1.0) == doctest::Approx(1.0));
}

TEST_CASE("initial data construction") {
  const Grid g(2, 32);
  ModelParams p;
  p.eps = 1e-2;
  InitialDataTarget uniform{kOne, kRest};
  const InitialData d = initial_data(g, p, uniform, 0.5);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(d.state.rho[i] == 1.0);
  CHECK(d.clamped_low == 0);
  CHECK(d.clamped_high == 0);

  InitialDataTarget patch{[](const Point& x) { return std::abs(x[0]) < 0.5 ? 0.0 : 1.0; }, kRest};
  const InitialData v = initial_data(g, p, patch);
  CHECK(v.clamped_low > 0);
  CHECK(v.state.rho.min() == p.eps);

  InitialDataTarget heavy{[](const Point&) { return 10.0; }, kRest};
  const InitialData h = initial_data(g, p, heavy);
  CHECK(h.clamped_high == g.size());
  CHECK(h.state.rho.max() == doctest::Approx(std::pow(p.eps, -p.a / (2.0 * p.beta))).epsilon(1e-14));

  InitialDataTarget bad{[](const Point& x) { return std::abs(x[0]) < 0.5 ? 0.0 : 1.0; },
                        [](const Point&) { return Vec3{1.0, 0.0, 0.0}; }};
  CHECK_THROWS_AS(initial_data(g, p, bad), ArgumentError);
}

TEST_CASE("clamped initial density converges to the target") {
  const Grid g(1, 1 << 16);
  const auto rho0 = [](const Point& x) { return std::abs(std::sin(0.5 * x[0])); };
  std::vector<double> eps{1e-1, 1e-2, 1e-3}, err;
  for (double e : eps) {
    ModelParams p;
    p.eps = e;
    const InitialData d = initial_data(g, p, InitialDataTarget{rho0, kRest});
    err.push_back(lp_norm(d.state.rho - ScalarField::sample(g, rho0), p.gamma));
  }
  CHECK(err[0] > err[1]);
  CHECK(err[1] > err[2]);
  CHECK(std::log(err[0] / err[2]) / std::log(eps[0] / eps[2]) >= 1.0);
}

TEST_CASE("solver configuration") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.cfl = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SolverConfig{};
  c.sample_stride = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SolverConfig{};
  c.backend = Backend::FD2;
  c.fixed_dt = 1e-3;
  const nlohmann::json j = c;
  CHECK(j.at("backend") == "fd2");
  const SolverConfig back = j.get<SolverConfig>();
  CHECK(back.backend == Backend::FD2);
  CHECK(back.fixed_dt == 1e-3);
  CHECK(c.floor_for(0.25) == 0.25);
  c.rho_floor = 0.0;
  CHECK(c.floor_for(0.25) == 0.0);
}

TEST_CASE("manufactured catalogue residuals") {
  ModelParams p;
  p.mu = 0.8;
  p.lambda = 0.1;
  const Point x{0.3, -1.1, 0.7};

  PairRecipe rest;
  const TestPair r = manufactured_pair(rest, p, 2);
  const auto [e1r, e2r] = analytic_residuals(*r.evaluators(), p, 2, 0.4, x);
  CHECK(e1r == 0.0);
  CHECK(e2r == Vec3{0.0, 0.0, 0.0});

  PairRecipe shear;
  shear.kind = "shear";
  const TestPair s = manufactured_pair(shear, p, 2);
  const auto [e1s, e2s] = analytic_residuals(*s.evaluators(), p, 2, 0.0, x);
  CHECK(e1s == 0.0);
  CHECK(e2s[0] == doctest::Approx(p.mu * std::sin(x[1])).epsilon(1e-14));
  CHECK(e2s[1] == 0.0);

  PairRecipe decay;
  decay.kind = "decaying_shear";
  const TestPair d = manufactured_pair(decay, p, 3);
  const auto [e1d, e2d] = analytic_residuals(*d.evaluators(), p, 3, 0.7, x);
  CHECK(std::abs(e1d) <= 1e-15);
  for (double c : e2d) CHECK(std::abs(c) <= 1e-14);

  PairRecipe tiny;
  tiny.kind = "acoustic";
  tiny.amplitude = 1e-9;
  const Source f = manufactured_forcing(tiny, p, 2);
  CHECK(std::abs(f.mass(0.2, x)) <= 1e-8);
  for (double c : f.momentum(0.2, x)) CHECK(std::abs(c) <= 1e-8);

  PairRecipe unknown;
  unknown.kind = "vortex";
  CHECK_THROWS_AS(manufactured_pair(unknown, p, 2), ArgumentError);
  CHECK_THROWS_AS(manufactured_pair(shear, p, 1), ArgumentError);
}

TEST_CASE("analytic and numerical residuals agree") {
  const Grid g(2, 32);
  ModelParams p;
  p.lambda = 0.2;
  PairRecipe rec;
  rec.kind = "acoustic";
  rec.amplitude = 0.1;
  rec.perturbation.r_amp = 0.05;
  rec.perturbation.v_amp = 0.1;
  rec.perturbation.v_shift = {0.2, -0.1, 0.0};
  rec.perturbation.omega = 1.5;
  const TestPair pair = manufactured_pair(rec, p, 2);
  pair.validate(g, 0.3, p);
  const double t = 0.3;
  const ScalarField e1 = entropy::e1_residual(pair, g, t);
  const VectorField e2 = entropy::e2_residual(pair, g, t, p);
  double err1 = 0.0, err2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto [a1, a2] = analytic_residuals(*pair.evaluators(), p, 2, t, g.coordinate(i));
    err1 = std::max(err1, std::abs(a1 - e1[i]));
    for (int c = 0; c < 2; ++c) err2 = std::max(err2, std::abs(a2[static_cast<std::size_t>(c)] - e2[c][i]));
  }
  CHECK(err1 <= 1e-10);
  CHECK(err2 <= 1e-8);

  const Source f = manufactured_forcing(rec, p, 2);
  const Point x = g.coordinate(17);
  const auto [a1, a2] = analytic_residuals(*pair.evaluators(), p, 2, t, x);
  const Vec3 v = pair.evaluators()->v(t, x);
  CHECK(f.mass(t, x) == doctest::Approx(a1).epsilon(1e-14));
  for (std::size_t c = 0; c < 2; ++c) CHECK(f.momentum(t, x)[c] == doctest::Approx(a2[c] + v[c] * a1).epsilon(1e-13));
}

TEST_CASE("pair recipe json") {
  PairRecipe r;
  r.kind = "acoustic";
  r.amplitude = 0.05;
  r.perturbation.omega = 2.0;
  r.r1 = 0.5;
  const nlohmann::json j = r;
  const PairRecipe back = j.get<PairRecipe>();
  CHECK(back.kind == "acoustic");
  CHECK(back.amplitude == 0.05);
  CHECK(back.perturbation.omega == 2.0);
  REQUIRE(back.r1.has_value());
  CHECK(*back.r1 == 0.5);
}
