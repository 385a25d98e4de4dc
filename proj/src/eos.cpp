#include "nslab/eos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "nslab/errors.hpp"

namespace nslab {

std::string to_string(BoundaryCase bc) {
  return bc == BoundaryCase::Periodic ? "periodic" : "dirichlet";
}

BoundaryCase boundary_case_from_string(const std::string& s) {
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "periodic") return BoundaryCase::Periodic;
  if (lower == "dirichlet") return BoundaryCase::Dirichlet;
  throw ConfigError("boundary_case", "unknown boundary case '" + s + "'");
}

void ModelParams::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!(finite(A) && finite(gamma) && finite(mu) && finite(lambda) && finite(eps) &&
        finite(a) && finite(beta)))
    throw ConfigError("finite", "all model parameters must be finite");
  if (!(A > 0.0)) throw ConfigError("A>0", "pressure coefficient must be positive");
  if (!(mu > 0.0)) throw ConfigError("mu>0", "shear viscosity must be positive");
  if (!(2.0 * mu + 3.0 * lambda >= 0.0))
    throw ConfigError("2mu+3lambda>=0", "Lame coefficients violate 2mu+3lambda >= 0");
  if (boundary_case == BoundaryCase::Periodic) {
    if (!(gamma >= 6.0 / 5.0))
      throw ConfigError("gamma>=6/5", "periodic case requires gamma >= 6/5");
  } else if (!(gamma > 1.0)) {
    throw ConfigError("gamma>1", "adiabatic exponent must exceed 1");
  }
  if (!(beta > std::max(4.0, gamma)))
    throw ConfigError("beta>max(4,gamma)", "artificial exponent must exceed max(4, gamma)");
  if (!(a > 0.0)) throw ConfigError("a>0", "artificial-pressure exponent must be positive");
  if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("eps in (0,1]", "eps must lie in (0,1]");
}

void to_json(nlohmann::json& j, const ModelParams& p) {
  j = nlohmann::json{{"A", p.A},           {"gamma", p.gamma}, {"mu", p.mu},
                     {"lambda", p.lambda}, {"eps", p.eps},     {"a", p.a},
                     {"beta", p.beta},     {"boundary_case", to_string(p.boundary_case)}};
}

void from_json(const nlohmann::json& j, ModelParams& p) {
  ModelParams d;
  p.A = j.value("A", d.A);
  p.gamma = j.value("gamma", d.gamma);
  p.mu = j.value("mu", d.mu);
  p.lambda = j.value("lambda", d.lambda);
  p.eps = j.value("eps", d.eps);
  p.a = j.value("a", d.a);
  p.beta = j.value("beta", d.beta);
  p.boundary_case = boundary_case_from_string(j.value("boundary_case", std::string("periodic")));
}

namespace eos {
namespace {

void require_nonnegative(double rho, const char* what) {
  if (!(rho >= 0.0)) throw DomainError(std::string(what) + ": density must be >= 0");
}

}  // namespace

double pressure(double rho, const ModelParams& p) {
  require_nonnegative(rho, "pressure");
  return p.A * std::pow(rho, p.gamma);
}

double pressure_derivative(double rho, const ModelParams& p) {
  require_nonnegative(rho, "pressure_derivative");
  return p.A * p.gamma * std::pow(rho, p.gamma - 1.0);
}

double potential(double rho, const ModelParams& p) {
  require_nonnegative(rho, "potential");
  return p.A / (p.gamma - 1.0) * std::pow(rho, p.gamma);
}

double potential_prime(double rho, const ModelParams& p) {
  require_nonnegative(rho, "potential_prime");
  return p.A * p.gamma / (p.gamma - 1.0) * std::pow(rho, p.gamma - 1.0);
}

double potential_second(double rho, const ModelParams& p) {
  require_nonnegative(rho, "potential_second");
  if (rho == 0.0 && p.gamma < 2.0)
    throw SingularityError("potential_second: P'' is singular at vacuum for gamma < 2");
  return p.A * p.gamma * std::pow(rho, p.gamma - 2.0);
}

double artificial_potential(double rho, const ModelParams& p) {
  require_nonnegative(rho, "artificial_potential");
  return std::pow(rho, p.beta) / (p.beta - 1.0);
}

double artificial_potential_second(double rho, const ModelParams& p) {
  require_nonnegative(rho, "artificial_potential_second");
  return p.beta * std::pow(rho, p.beta - 2.0);
}

double bregman_gap(double rho, double r, const ModelParams& p) {
  require_nonnegative(rho, "bregman_gap");
  if (!(r > 0.0)) throw DomainError("bregman_gap: comparison density r must be > 0");
  if (rho == r) return 0.0;
  // With rho = r (1 + x): gap = A r^gamma / (gamma - 1) ((1 + x)^gamma - 1 - gamma x).
  const double x = (rho - r) / r;
  double f = 0.0;
  if (std::abs(x) < 0.1) {
    // Binomial tail sum_{k>=2} C(gamma, k) x^k; avoids cancellation near rho = r.
    double term = p.gamma * (p.gamma - 1.0) * 0.5 * x * x;
    for (int k = 2; k < 40 && term != 0.0; ++k) {
      f += term;
      term *= (p.gamma - k) / (k + 1.0) * x;
    }
  } else {
    f = std::pow(1.0 + x, p.gamma) - 1.0 - p.gamma * x;
  }
  return std::max(p.A * std::pow(r, p.gamma) / (p.gamma - 1.0) * f, 0.0);
}

GapCoercivity gap_coercivity_constant(Interval r_range, Interval rho_range, const ModelParams& p,
                                      int resolution) {
  if (!(r_range.lo > 0.0) || !(r_range.hi >= r_range.lo))
    throw ArgumentError("gap_coercivity_constant: r range must be a nonempty subset of (0,inf)");
  if (!(rho_range.lo >= 0.0) || !(rho_range.hi >= rho_range.lo))
    throw ArgumentError("gap_coercivity_constant: rho range must be a nonempty subset of [0,inf)");
  if (resolution < 1) throw ArgumentError("gap_coercivity_constant: resolution must be >= 1");

  const double inf = std::numeric_limits<double>::infinity();
  GapCoercivity out;
  out.c_ess = inf;
  out.c_res = inf;
  auto node = [resolution](Interval iv, int k) {
    if (resolution == 1) return iv.lo;
    return iv.lo + (iv.hi - iv.lo) * static_cast<double>(k) / (resolution - 1);
  };
  for (int i = 0; i < resolution; ++i) {
    const double r = node(r_range, i);
    for (int k = 0; k < resolution; ++k) {
      const double rho = node(rho_range, k);
      const double diff = std::abs(rho - r);
      const double gap = bregman_gap(rho, r, p);
      if (diff <= 0.5 * r) {
        if (diff == 0.0) continue;
        out.c_ess = std::min(out.c_ess, gap / (diff * diff));
        ++out.ess_samples;
      } else {
        out.c_res = std::min(out.c_res, gap / (1.0 + std::pow(diff, p.gamma)));
        ++out.res_samples;
      }
    }
  }
  out.c = std::min(out.c_ess, out.c_res);
  return out;
}

}  // namespace eos
}  // namespace nslab
