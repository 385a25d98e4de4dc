#include "nslab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "nslab/errors.hpp"
#include "nslab/mollify.hpp"
#include "nslab/norms.hpp"
#include "nslab/snapshot.hpp"
#include "nslab/stress.hpp"

namespace nslab {

VectorField FluidState::velocity() const {
  const double fl = rho_floor;
  const ScalarField denom = rho.map([fl](double x) { return std::max(x, fl); });
  std::vector<ScalarField> comps;
  for (int i = 0; i < m.components(); ++i) comps.push_back(m[i] / denom);
  return VectorField(std::move(comps));
}

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl in (0,1]", "cfl must lie in (0, 1]");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end>0", "t_end must be positive");
  if (sample_stride < 1) throw ConfigError("sample_stride>=1", "sample_stride must be at least 1");
  if (max_steps < 1) throw ConfigError("max_steps>=1", "max_steps must be at least 1");
  if (!(fixed_dt >= 0.0)) throw ConfigError("fixed_dt>=0", "fixed_dt must be >= 0");
}

void to_json(nlohmann::json& j, const SolverConfig& c) {
  j = nlohmann::json{{"cfl", c.cfl},           {"t_end", c.t_end},
                     {"sample_stride", c.sample_stride}, {"backend", to_string(c.backend)},
                     {"rho_floor", c.rho_floor}, {"dealias", c.dealias},
                     {"max_steps", c.max_steps}, {"fixed_dt", c.fixed_dt}};
}

void from_json(const nlohmann::json& j, SolverConfig& c) {
  SolverConfig d;
  c.cfl = j.value("cfl", d.cfl);
  c.t_end = j.value("t_end", d.t_end);
  c.sample_stride = j.value("sample_stride", d.sample_stride);
  c.backend = backend_from_string(j.value("backend", to_string(d.backend)));
  c.rho_floor = j.value("rho_floor", d.rho_floor);
  c.dealias = j.value("dealias", d.dealias);
  c.max_steps = j.value("max_steps", d.max_steps);
  c.fixed_dt = j.value("fixed_dt", d.fixed_dt);
  c.validate();
}

namespace solver {

namespace {

FluidState combine(const FluidState& s, double t, double c, const Rhs& k) {
  FluidState out = s;
  out.t = t;
  for (std::size_t i = 0; i < out.rho.size(); ++i) out.rho[i] += c * k.drho[i];
  for (int a = 0; a < out.m.components(); ++a)
    for (std::size_t i = 0; i < out.rho.size(); ++i) out.m[a][i] += c * k.dm[a][i];
  return out;
}

LedgerRow ledger_row(const FluidState& s, const ModelParams& p, Backend b, double dt) {
  LedgerRow row;
  row.t = s.t;
  row.mass = integral(s.rho);
  for (int a = 0; a < s.m.components(); ++a) row.momentum[static_cast<std::size_t>(a)] = integral(s.m[a]);
  row.energy = energy(s, p);
  row.dissipation = energy_dissipation_rate(s, p, b);
  row.min_rho = s.rho.min();
  row.max_u = magnitude(s.velocity()).max();
  row.dt = dt;
  return row;
}

// Derivative weights of the Lagrange interpolant through three sample times.
std::array<double, 3> lagrange_derivative(double x, double xa, double xb, double xc) {
  return {((x - xb) + (x - xc)) / ((xa - xb) * (xa - xc)),
          ((x - xa) + (x - xc)) / ((xb - xa) * (xb - xc)),
          ((x - xa) + (x - xb)) / ((xc - xa) * (xc - xb))};
}

}  // namespace

Rhs brenner_rhs(const FluidState& s, const ModelParams& p, Backend b, bool dealias,
                const Source* source) {
  const Grid& g = s.grid();
  const int d = g.dim();
  if (s.rho.min() < 0.5 * s.rho_floor)
    throw VacuumError("brenner_rhs: density fell below half the floor");
  const bool filter = dealias && b == Backend::Spectral;
  auto F = [filter](const ScalarField& f) { return filter ? nslab::dealias(f) : f; };

  const VectorField u = s.velocity();
  const VectorField grad_rho = gradient(s.rho, b);

  Rhs out;
  out.drho = laplacian(s.rho, b);
  out.drho *= p.eps;
  out.drho -= divergence(s.m, b);

  // Flux m (x) u - eps u (x) grad rho
  TensorField flux(g);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      ScalarField f = s.m[i] * u[j];
      if (p.eps != 0.0) {
        ScalarField reg = u[i] * grad_rho[j];
        reg *= p.eps;
        f -= reg;
      }
      flux(i, j) = F(f);
    }
  const double art = p.eps > 0.0 ? std::pow(p.eps, p.a) : 0.0;
  const ScalarField press = F(s.rho.map([&](double x) {
    return eos::pressure(x, p) + (art != 0.0 ? art * std::pow(x, p.beta) : 0.0);
  }));

  out.dm = stress::stress_divergence(u, p, b);
  out.dm -= tensor_divergence(flux, b);
  out.dm -= gradient(press, b);

  if (source != nullptr) {
    ScalarField gsrc;
    VectorField fsrc;
    source->sample(g, s.t, gsrc, fsrc);
    out.drho += gsrc;
    out.dm += fsrc;
  }
  return out;
}

double stable_dt(const FluidState& s, const ModelParams& p, const SolverConfig& c) {
  const Grid& g = s.grid();
  const double art = p.eps > 0.0 ? std::pow(p.eps, p.a) : 0.0;
  double cmax = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = std::max(s.rho[i], s.rho_floor);
    const double c2 = eos::pressure_derivative(r, p) + art * p.beta * std::pow(r, p.beta - 1.0);
    cmax = std::max(cmax, std::sqrt(std::max(c2, 0.0)));
  }
  const double umax = magnitude(s.velocity()).max();
  const double rho_min = std::max(s.rho.min(), s.rho_floor);
  if (!(rho_min > 0.0)) throw VacuumError("stable_dt: nonpositive density");
  const double visc = std::max(2.0 * p.mu + p.lambda, p.mu);
  const double nu = std::max(visc / rho_min, p.eps);
  const double h = g.h();
  double dt = h * h / (2.0 * g.dim() * nu);
  if (umax + cmax > 0.0) dt = std::min(dt, h / (umax + cmax));
  return c.cfl * dt;
}

FluidState step(const FluidState& s, const ModelParams& p, const SolverConfig& c, double dt,
                const Source* source) {
  const Backend b = c.backend;
  const Rhs k1 = brenner_rhs(s, p, b, c.dealias, source);
  const Rhs k2 = brenner_rhs(combine(s, s.t + 0.5 * dt, 0.5 * dt, k1), p, b, c.dealias, source);
  const Rhs k3 = brenner_rhs(combine(s, s.t + 0.5 * dt, 0.5 * dt, k2), p, b, c.dealias, source);
  const Rhs k4 = brenner_rhs(combine(s, s.t + dt, dt, k3), p, b, c.dealias, source);
  FluidState out = s;
  out.t = s.t + dt;
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < out.rho.size(); ++i)
    out.rho[i] += w * (k1.drho[i] + 2.0 * k2.drho[i] + 2.0 * k3.drho[i] + k4.drho[i]);
  for (int a = 0; a < out.m.components(); ++a)
    for (std::size_t i = 0; i < out.rho.size(); ++i)
      out.m[a][i] += w * (k1.dm[a][i] + 2.0 * k2.dm[a][i] + 2.0 * k3.dm[a][i] + k4.dm[a][i]);
  return out;
}

FluidState step(const FluidState& s, const ModelParams& p, const SolverConfig& c) {
  return step(s, p, c, stable_dt(s, p, c));
}

double energy(const FluidState& s, const ModelParams& p) {
  const VectorField u = s.velocity();
  const double art = p.eps > 0.0 ? std::pow(p.eps, p.a) : 0.0;
  ScalarField dens(s.grid());
  for (std::size_t i = 0; i < dens.size(); ++i) {
    const Vec3 ui = u.at(i);
    const double r = s.rho[i];
    dens[i] = 0.5 * r * (ui[0] * ui[0] + ui[1] * ui[1] + ui[2] * ui[2]) + eos::potential(r, p);
    if (art != 0.0) dens[i] += art * eos::artificial_potential(r, p);
  }
  return integral(dens);
}

double energy_dissipation_rate(const FluidState& s, const ModelParams& p, Backend b) {
  const VectorField u = s.velocity();
  ScalarField dens = contract(stress::viscous_stress(u, p, b), jacobian(u, b));
  if (p.eps != 0.0) {
    const ScalarField g2 = [&] {
      const VectorField gr = gradient(s.rho, b);
      return dot(gr, gr);
    }();
    const double art = std::pow(p.eps, 1.0 + p.a);
    for (std::size_t i = 0; i < dens.size(); ++i) {
      const double r = s.rho[i];
      dens[i] += (p.eps * eos::potential_second(r, p) + art * eos::artificial_potential_second(r, p)) * g2[i];
    }
  }
  return integral(dens);
}

Trajectory run(const FluidState& initial, const ModelParams& p, const SolverConfig& c,
               const Source* source) {
  c.validate();
  Trajectory tr;
  FluidState s = initial;
  s.rho_floor = c.floor_for(p.eps);
  tr.samples.push_back(s);
  tr.ledger.push_back(ledger_row(s, p, c.backend, 0.0));

  const double t0 = s.t;
  const double t1 = t0 + c.t_end;
  long fixed_steps = 0;
  double fixed = 0.0;
  if (c.fixed_dt > 0.0) {
    fixed_steps = std::max(1L, std::lround(c.t_end / c.fixed_dt));
    fixed = c.t_end / static_cast<double>(fixed_steps);
  }
  const double eps_t = 1e-12 * std::max(1.0, std::abs(t1));

  while (true) {
    if (fixed_steps > 0 ? tr.steps >= fixed_steps : s.t >= t1 - eps_t) break;
    if (tr.steps >= c.max_steps) {
      tr.aborted = true;
      tr.abort_reason = "maximum step count reached";
      tr.diagnostic = s;
      break;
    }
    double dt = 0.0;
    FluidState next;
    try {
      if (fixed_steps > 0) {
        dt = fixed;
      } else {
        dt = std::min(stable_dt(s, p, c), t1 - s.t);
      }
      next = step(s, p, c, dt, source);
      if (fixed_steps > 0 && tr.steps + 1 == fixed_steps) next.t = t1;
    } catch (const VacuumError& e) {
      tr.aborted = true;
      tr.abort_reason = std::string("vacuum: ") + e.what();
      tr.diagnostic = s;
      break;
    }
    ++tr.steps;
    if (!next.all_finite()) {
      tr.aborted = true;
      tr.abort_reason = "non-finite state";
      tr.diagnostic = next;
      break;
    }
    if (next.rho.min() < 0.5 * next.rho_floor) {
      tr.aborted = true;
      tr.abort_reason = "vacuum: density fell below half the floor";
      tr.diagnostic = next;
      break;
    }
    s = std::move(next);
    tr.ledger.push_back(ledger_row(s, p, c.backend, dt));
    const bool last = fixed_steps > 0 ? tr.steps >= fixed_steps : s.t >= t1 - eps_t;
    if (tr.steps % c.sample_stride == 0 || last) tr.samples.push_back(s);
  }
  return tr;
}

void write_ledger_csv(const std::string& path, const Trajectory& tr) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (fp == nullptr) throw IoError("write_ledger_csv: cannot open '" + path + "'");
  const int d = tr.samples.empty() ? 1 : tr.samples.front().grid().dim();
  std::fprintf(fp, "t,mass");
  for (int a = 0; a < d; ++a) std::fprintf(fp, ",momentum_%d", a);
  std::fprintf(fp, ",energy,dissipation,min_rho,max_u,dt\n");
  for (const auto& r : tr.ledger) {
    std::fprintf(fp, "%.17g,%.17g", r.t, r.mass);
    for (int a = 0; a < d; ++a) std::fprintf(fp, ",%.17g", r.momentum[static_cast<std::size_t>(a)]);
    std::fprintf(fp, ",%.17g,%.17g,%.17g,%.17g,%.17g\n", r.energy, r.dissipation, r.min_rho,
                 r.max_u, r.dt);
  }
  std::fclose(fp);
}

void write_snapshots(const std::string& directory, const Trajectory& tr) {
  char name[32];
  for (std::size_t k = 0; k < tr.samples.size(); ++k) {
    const FluidState& s = tr.samples[k];
    std::vector<ScalarField> comps{s.rho};
    for (int a = 0; a < s.m.components(); ++a) comps.push_back(s.m[a]);
    std::snprintf(name, sizeof(name), "snap_%06zu.bin", k);
    write_snapshot(directory + "/" + name, s.t, comps);
  }
}

EnergyMonitorReport energy_inequality_monitor(const std::vector<FluidState>& samples,
                                              const ModelParams& p, double tolerance, Backend b) {
  EnergyMonitorReport rep;
  rep.tolerance = tolerance;
  if (samples.size() < 2) return rep;
  std::vector<double> e, d;
  for (const auto& s : samples) {
    e.push_back(energy(s, p));
    d.push_back(energy_dissipation_rate(s, p, b));
  }
  rep.max_defect = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const double dt = samples[k + 1].t - samples[k].t;
    if (!(dt > 0.0)) throw ArgumentError("energy_inequality_monitor: times must increase");
    const double defect = (e[k + 1] - e[k]) / dt + 0.5 * (d[k] + d[k + 1]);
    rep.times.push_back(0.5 * (samples[k].t + samples[k + 1].t));
    rep.defects.push_back(defect);
    rep.max_defect = std::max(rep.max_defect, defect);
    rep.max_abs_defect = std::max(rep.max_abs_defect, std::abs(defect));
  }
  rep.pass = rep.max_defect <= tolerance;
  return rep;
}

RenormFunction renorm_identity() {
  return {"z", [](double z) { return z; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
}

RenormFunction renorm_square() {
  return {"z^2", [](double z) { return z * z; }, [](double z) { return 2.0 * z; },
          [](double) { return 2.0; }};
}

RenormFunction renorm_entropy() {
  auto check = [](double z) {
    if (!(z > 0.0)) throw DomainError("z ln z renormalization needs positive density");
  };
  return {"z ln z",
          [check](double z) {
            check(z);
            return z * std::log(z);
          },
          [check](double z) {
            check(z);
            return std::log(z) + 1.0;
          },
          [check](double z) {
            check(z);
            return 1.0 / z;
          }};
}

RenormReport renormalized_continuity_residual(const std::vector<FluidState>& samples,
                                              const RenormFunction& B, const ModelParams& p,
                                              Backend b) {
  RenormReport rep;
  if (samples.size() < 3) throw ArgumentError("renormalized_continuity_residual: need >= 3 samples");
  std::vector<ScalarField> bval;
  for (const auto& s : samples) bval.push_back(s.rho.map(B.B));
  for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
    const FluidState& s = samples[k];
    const auto w = lagrange_derivative(s.t, samples[k - 1].t, s.t, samples[k + 1].t);
    ScalarField res(s.grid());
    for (std::size_t i = 0; i < res.size(); ++i)
      res[i] = w[0] * bval[k - 1][i] + w[1] * bval[k][i] + w[2] * bval[k + 1][i];
    const VectorField u = s.velocity();
    const ScalarField& bk = bval[k];
    const ScalarField db = s.rho.map(B.dB);
    const ScalarField d2b = s.rho.map(B.d2B);
    res += divergence(bk * u, b);
    res += (db * s.rho - bk) * divergence(u, b);
    if (p.eps != 0.0) {
      const VectorField gr = gradient(s.rho, b);
      ScalarField diff = divergence(db * gr, b);
      diff -= d2b * dot(gr, gr);
      diff *= p.eps;
      res -= diff;
    }
    rep.times.push_back(s.t);
    rep.l1.push_back(lp_norm(res, 1.0));
    rep.max_l1 = std::max(rep.max_l1, rep.l1.back());
  }
  return rep;
}

InitialData initial_data(const Grid& g, const ModelParams& p, const InitialDataTarget& target,
                         double mollify_delta) {
  if (!target.rho || !target.m) throw ArgumentError("initial_data: rho and m targets are required");
  if (!(p.eps > 0.0)) throw ArgumentError("initial_data: eps must be positive");
  const double lo = p.eps;
  const double hi = std::pow(p.eps, -p.a / (2.0 * p.beta));
  InitialData out;
  ScalarField rho(g);
  VectorField u(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point x = g.coordinate(i);
    const double r0 = target.rho(x);
    const Vec3 m0 = target.m(x);
    if (!(r0 >= 0.0) || !std::isfinite(r0)) throw ArgumentError("initial_data: target density must be >= 0");
    if (r0 == 0.0 && (m0[0] != 0.0 || m0[1] != 0.0 || m0[2] != 0.0))
      throw ArgumentError("initial_data: momentum must vanish where the density does");
    if (r0 < lo) ++out.clamped_low;
    if (r0 > hi) ++out.clamped_high;
    rho[i] = std::clamp(r0, lo, hi);
    const double denom = std::max(r0, lo);
    for (int a = 0; a < g.dim(); ++a) u[a][i] = m0[static_cast<std::size_t>(a)] / denom;
  }
  if (mollify_delta > 0.0) {
    const mollify::MollifierSpec spec{mollify_delta, mollify::TimeExtension::Constant};
    rho = mollify::space_mollify(rho, spec);
    u = mollify::space_mollify(u, spec);
  }
  out.mass = integral(rho);
  if (!(out.mass > 0.0)) throw HypothesisError("initial_data: initial mass must be positive");
  out.state.t = 0.0;
  out.state.rho_floor = lo;
  out.state.m = rho * u;
  out.state.rho = std::move(rho);
  return out;
}

}  // namespace solver
}  // namespace nslab
