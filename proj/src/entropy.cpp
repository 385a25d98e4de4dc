#include "nslab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "nslab/errors.hpp"
#include "nslab/norms.hpp"
#include "nslab/stress.hpp"

namespace nslab {

void Source::sample(const Grid& g, double t, ScalarField& mass_out, VectorField& momentum_out) const {
  mass_out = ScalarField(g);
  momentum_out = VectorField(g);
  if (both) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto [m, f] = both(t, g.coordinate(i));
      mass_out[i] = m;
      for (int a = 0; a < g.dim(); ++a) momentum_out[a][i] = f[static_cast<std::size_t>(a)];
    }
    return;
  }
  if (mass) mass_out = ScalarField::sample(g, [&](const Point& x) { return mass(t, x); });
  if (momentum) momentum_out = VectorField::sample(g, [&](const Point& x) { return momentum(t, x); });
}

namespace entropy {

void EntropyConstants::validate() const {
  if (!(C0 >= 0.0) || !std::isfinite(C0)) throw ConfigError("C0>=0", "C0 must be finite and >= 0");
  if (!(c_hat > 0.0) || !std::isfinite(c_hat)) throw ConfigError("c_hat>0", "c_hat must be positive");
  if (!(c_gamma > 0.0) || !std::isfinite(c_gamma))
    throw ConfigError("c_gamma>0", "c_gamma must be positive");
}

void to_json(nlohmann::json& j, const EntropyConstants& c) {
  j = nlohmann::json{{"C0", c.C0}, {"c_hat", c.c_hat}, {"c_gamma", c.c_gamma}};
}

void from_json(const nlohmann::json& j, EntropyConstants& c) {
  EntropyConstants d;
  c.C0 = j.value("C0", d.C0);
  c.c_hat = j.value("c_hat", d.c_hat);
  c.c_gamma = j.value("c_gamma", d.c_gamma);
  c.validate();
}

ScalarField e1_residual(const TestPair& pair, const Grid& g, double t, Backend b) {
  const ScalarField r = pair.r(g, t);
  const VectorField v = pair.v(g, t);
  return pair.dt_r(g, t) + divergence(r * v, b);
}

VectorField e2_residual(const TestPair& pair, const Grid& g, double t, const ModelParams& p,
                        Backend b) {
  const ScalarField r = pair.r(g, t);
  const VectorField v = pair.v(g, t);
  VectorField out = r * (pair.dt_v(g, t) + apply(jacobian(v, b), v));
  out += gradient(r.map([&](double x) { return eos::pressure(x, p); }), b);
  out -= stress::stress_divergence(v, p, b);
  return out;
}

double Lambda0Parts::value(const ModelParams& p, const EntropyConstants& c) const {
  return strain_sup + c.c_hat * c.c_gamma * c.c_gamma / (p.mu * r1) * div_stress_a +
         (1.0 + std::sqrt(r1)) / r1 * div_stress_b;
}

Lambda0Parts lambda0_parts(const TestPair& pair, const Grid& g, double t, const ModelParams& p,
                           Backend b) {
  if (!(p.gamma > 1.0)) throw ArgumentError("lambda0: gamma must exceed 1");
  const VectorField v = pair.v(g, t);
  const VectorField ds = stress::stress_divergence(v, p, b);
  Lambda0Parts parts;
  parts.r1 = pair.r1();
  parts.strain_sup = lp_norm(stress::strain_rate(v, b), kInfinity);
  const double na = lp_norm(ds, 6.0 * p.gamma / (5.0 * p.gamma - 3.0));
  parts.div_stress_a = na * na;
  parts.div_stress_b = lp_norm(ds, 2.0 * p.gamma / (p.gamma - 1.0));
  return parts;
}

double lambda0(const TestPair& pair, const Grid& g, double t, const ModelParams& p,
               const EntropyConstants& c, Backend b) {
  return lambda0_parts(pair, g, t, p, b).value(p, c);
}

double lambda_from_lambda0(double lambda0_value, const ModelParams& p) {
  return p.boundary_case == BoundaryCase::Periodic ? p.mu + lambda0_value : lambda0_value;
}

double lambda(const TestPair& pair, const Grid& g, double t, const ModelParams& p,
              const EntropyConstants& c, Backend b) {
  return lambda_from_lambda0(lambda0(pair, g, t, p, c, b), p);
}

Masks ess_res_masks(const ScalarField& rho, const ScalarField& r) {
  require_same_grid(rho.grid(), r.grid(), "ess_res_masks");
  Masks m;
  m.ess.resize(rho.size());
  m.res.resize(rho.size());
  std::size_t count = 0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(r[i] > 0.0)) throw ArgumentError("ess_res_masks: r must be positive");
    const bool ess = std::abs(rho[i] - r[i]) <= 0.5 * r[i];
    m.ess[i] = ess ? 1 : 0;
    m.res[i] = ess ? 0 : 1;
    count += ess ? 1 : 0;
  }
  m.ess_fraction = rho.size() ? static_cast<double>(count) / static_cast<double>(rho.size()) : 0.0;
  return m;
}

namespace {

// Integral of the piecewise-linear interpolant of (times, f) over [s, t].
double piecewise_linear_integral(const std::vector<double>& times, const std::vector<double>& f,
                                 double s, double t) {
  auto value_at = [&](std::size_t k, double x) {
    const double w = (x - times[k]) / (times[k + 1] - times[k]);
    return f[k] + w * (f[k + 1] - f[k]);
  };
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double a = std::max(s, times[k]);
    const double b = std::min(t, times[k + 1]);
    if (!(b > a)) continue;
    acc += 0.5 * (b - a) * (value_at(k, a) + value_at(k, b));
  }
  return acc;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& times,
                                         const std::vector<double>& f) {
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t k = 1; k < times.size(); ++k)
    out[k] = out[k - 1] + 0.5 * (times[k] - times[k - 1]) * (f[k] + f[k - 1]);
  return out;
}

// A_k = trapezoid over s in [t_0, t_k] of exp(C0 (I_k - I(s))) f(s).
std::vector<double> weighted_accumulation(const std::vector<double>& times,
                                          const std::vector<double>& prefix, double C0,
                                          const std::vector<double>& f) {
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double half = 0.5 * (times[k] - times[k - 1]);
    const double growth = std::exp(C0 * (prefix[k] - prefix[k - 1]));
    out[k] = growth * (out[k - 1] + half * f[k - 1]) + half * f[k];
  }
  return out;
}

void check_trajectory(const std::vector<FluidState>& trajectory) {
  if (trajectory.empty()) throw ArgumentError("entropy: empty trajectory");
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    require_same_grid(trajectory[0].grid(), trajectory[k].grid(), "entropy trajectory");
    if (!(trajectory[k].t > trajectory[k - 1].t))
      throw ArgumentError("entropy: trajectory times must increase");
  }
}

double relative_energy(const FluidState& s, const ScalarField& r, const VectorField& v,
                       const ModelParams& p) {
  const VectorField u = s.velocity();
  const VectorField w = u - v;
  ScalarField dens(s.grid());
  for (std::size_t i = 0; i < dens.size(); ++i) {
    const Vec3 wi = w.at(i);
    const double kin = 0.5 * s.rho[i] * (wi[0] * wi[0] + wi[1] * wi[1] + wi[2] * wi[2]);
    dens[i] = kin + eos::bregman_gap(s.rho[i], r[i], p);
  }
  return integral(dens);
}

}  // namespace

double gronwall_factor(const std::vector<double>& times, const std::vector<double>& lambda_series,
                       double s, double t, double C0) {
  if (times.size() != lambda_series.size() || times.empty())
    throw ArgumentError("gronwall_factor: times and lambda series must match and be nonempty");
  if (s > t) throw ArgumentError("gronwall_factor: s must not exceed t");
  const double tol = 1e-12 * std::max(1.0, std::abs(times.back()));
  if (s < times.front() - tol || t > times.back() + tol)
    throw ArgumentError("gronwall_factor: [s, t] outside the sampled range");
  if (s == t || times.size() == 1) return 1.0;
  return std::exp(C0 * piecewise_linear_integral(times, lambda_series, s, t));
}

LsSeries relative_entropy_ls(const std::vector<FluidState>& trajectory, const TestPair& pair,
                             const ModelParams& p, Backend b) {
  check_trajectory(trajectory);
  LsSeries ls;
  std::vector<double> diss;
  for (const FluidState& s : trajectory) {
    const Grid& g = s.grid();
    const ScalarField r = pair.r(g, s.t);
    const VectorField v = pair.v(g, s.t);
    ls.times.push_back(s.t);
    ls.energy.push_back(relative_energy(s, r, v, p));
    diss.push_back(stress::dissipation(s.velocity(), v, p, b));
  }
  ls.dissipation = cumulative_trapezoid(ls.times, diss);
  for (auto& x : ls.dissipation) x *= 0.5;
  for (std::size_t k = 0; k < ls.times.size(); ++k)
    ls.total.push_back(ls.energy[k] + ls.dissipation[k]);
  return ls;
}

EntropyTerms entropy_terms(const std::vector<FluidState>& trajectory, const TestPair& pair,
                           const ModelParams& p, Backend b, const FluidState* initial,
                           const TestPair* initial_pair, const Source* source) {
  check_trajectory(trajectory);
  EntropyTerms terms;
  terms.ls = relative_entropy_ls(trajectory, pair, p, b);
  terms.times = terms.ls.times;

  const FluidState& s0 = initial ? *initial : trajectory.front();
  const TestPair& p0 = initial_pair ? *initial_pair : pair;
  terms.initial_relative_energy =
      relative_energy(s0, p0.r(s0.grid(), s0.t), p0.v(s0.grid(), s0.t), p);

  for (const FluidState& s : trajectory) {
    const Grid& g = s.grid();
    const ScalarField r = pair.r(g, s.t);
    const VectorField v = pair.v(g, s.t);
    const VectorField u = s.velocity();
    ScalarField e1 = e1_residual(pair, g, s.t, b);
    VectorField e2 = e2_residual(pair, g, s.t, p, b);
    if (source != nullptr) {
      ScalarField gsrc;
      VectorField fsrc;
      source->sample(g, s.t, gsrc, fsrc);
      // Non-conservative momentum source: f - v g.
      e2 -= fsrc - gsrc * v;
      e1 -= gsrc;
    }
    const VectorField vu = v - u;
    ScalarField d1(g), d2(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      d1[i] = std::abs((r[i] - s.rho[i]) * eos::potential_second(r[i], p) * e1[i]);
      const Vec3 a = e2.at(i), c = vu.at(i);
      d2[i] = std::abs(s.rho[i] / r[i] * (a[0] * c[0] + a[1] * c[1] + a[2] * c[2]));
    }
    terms.e1_density.push_back(integral(d1));
    terms.e2_density.push_back(integral(d2));
    terms.lambda_parts.push_back(lambda0_parts(pair, g, s.t, p, b));
    terms.ess_fraction.push_back(ess_res_masks(s.rho, r).ess_fraction);
  }
  return terms;
}

RsSeries assemble_rs(const EntropyTerms& terms, const ModelParams& p, const EntropyConstants& c) {
  RsSeries rs;
  rs.times = terms.times;
  for (const auto& part : terms.lambda_parts)
    rs.lambda.push_back(lambda_from_lambda0(part.value(p, c), p));
  const std::vector<double> prefix = cumulative_trapezoid(rs.times, rs.lambda);
  rs.e1 = weighted_accumulation(rs.times, prefix, c.C0, terms.e1_density);
  rs.e2 = weighted_accumulation(rs.times, prefix, c.C0, terms.e2_density);
  for (std::size_t k = 0; k < rs.times.size(); ++k) {
    rs.initial.push_back(std::exp(c.C0 * prefix[k]) * terms.initial_relative_energy);
    rs.total.push_back(rs.initial[k] + rs.e1[k] + rs.e2[k]);
  }
  return rs;
}

RsSeries relative_entropy_rs(const std::vector<FluidState>& trajectory, const TestPair& pair,
                             const ModelParams& p, const EntropyConstants& c, Backend b,
                             const FluidState* initial, const TestPair* initial_pair) {
  return assemble_rs(entropy_terms(trajectory, pair, p, b, initial, initial_pair), p, c);
}

EntropyReport assemble_report(const EntropyTerms& terms, const ModelParams& p,
                              const EntropyConstants& c, double tolerance, std::string scenario) {
  const RsSeries rs = assemble_rs(terms, p, c);
  EntropyReport rep;
  rep.scenario = std::move(scenario);
  rep.times = terms.times;
  rep.ls = terms.ls.total;
  rep.ls_energy = terms.ls.energy;
  rep.ls_dissipation = terms.ls.dissipation;
  rep.rs = rs.total;
  rep.rs_initial = rs.initial;
  rep.rs_e1 = rs.e1;
  rep.rs_e2 = rs.e2;
  rep.lambda = rs.lambda;
  rep.ess_fraction = terms.ess_fraction;
  rep.constants = c;
  rep.tolerance = tolerance;
  rep.verdict = true;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rep.times.size(); ++k) {
    rep.max_ls = std::max(rep.max_ls, rep.ls[k]);
    const double slack = rep.rs[k] + tolerance - rep.ls[k];
    rep.min_slack = std::min(rep.min_slack, slack);
    if (!(slack >= 0.0) && rep.verdict) {
      rep.verdict = false;
      rep.first_violation_time = rep.times[k];
      rep.first_violation_term =
          rep.ls_energy[k] > rep.rs[k] + tolerance ? "LS_energy" : "LS_dissipation";
    }
  }
  return rep;
}

EntropyReport dissipative_verdict(const std::vector<FluidState>& trajectory, const TestPair& pair,
                                  const ModelParams& p, const EntropyConstants& c,
                                  double tolerance, Backend b) {
  return assemble_report(entropy_terms(trajectory, pair, p, b), p, c, tolerance, pair.name());
}

void to_json(nlohmann::json& j, const EntropyReport& r) {
  j = nlohmann::json{{"scenario", r.scenario},
                     {"constants", r.constants},
                     {"tolerance", r.tolerance},
                     {"verdict", r.verdict},
                     {"max_LS", r.max_ls},
                     {"min_slack", r.min_slack},
                     {"t", r.times},
                     {"LS", r.ls},
                     {"LS_energy", r.ls_energy},
                     {"LS_dissipation", r.ls_dissipation},
                     {"RS", r.rs},
                     {"RS_initial", r.rs_initial},
                     {"RS_E1", r.rs_e1},
                     {"RS_E2", r.rs_e2},
                     {"lambda", r.lambda},
                     {"ess_fraction", r.ess_fraction}};
  if (r.first_violation_time) {
    j["first_violation"] = {{"t", *r.first_violation_time}, {"term", r.first_violation_term}};
  } else {
    j["first_violation"] = nullptr;
  }
}

void write_report_csv(const std::string& path, const EntropyReport& r) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (fp == nullptr) throw IoError("write_report_csv: cannot open '" + path + "'");
  std::fprintf(fp, "t,LS,LS_energy,LS_dissipation,RS,RS_initial,RS_E1,RS_E2,lambda,ess_fraction\n");
  for (std::size_t k = 0; k < r.times.size(); ++k)
    std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.times[k],
                 r.ls[k], r.ls_energy[k], r.ls_dissipation[k], r.rs[k], r.rs_initial[k],
                 r.rs_e1[k], r.rs_e2[k], r.lambda[k], r.ess_fraction[k]);
  std::fclose(fp);
}

}  // namespace entropy
}  // namespace nslab
