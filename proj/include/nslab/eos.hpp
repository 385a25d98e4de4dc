#ifndef NSLAB_EOS_HPP_
#define NSLAB_EOS_HPP_

#include <string>

#include <nlohmann/json_fwd.hpp>

namespace nslab {

enum class BoundaryCase { Periodic, Dirichlet };

std::string to_string(BoundaryCase bc);
BoundaryCase boundary_case_from_string(const std::string& s);

// Physical constants (A, gamma, mu, lambda) and regularization constants
// (eps, a, beta) of the regularized barotropic system. Dimensionless code units.
struct ModelParams {
  double A = 1.0;
  double gamma = 2.0;
  double mu = 1.0;
  double lambda = 0.0;
  double eps = 1.0e-3;
  double a = 1.0;
  double beta = 5.0;
  BoundaryCase boundary_case = BoundaryCase::Periodic;

  // Throws ConfigError naming the first violated invariant.
  void validate() const;
};

void to_json(nlohmann::json& j, const ModelParams& p);
void from_json(const nlohmann::json& j, ModelParams& p);

namespace eos {

// p(rho) = A rho^gamma
double pressure(double rho, const ModelParams& p);
// p'(rho) = A gamma rho^(gamma-1)
double pressure_derivative(double rho, const ModelParams& p);

// Pressure potential P(rho) = A/(gamma-1) rho^gamma and its derivatives.
double potential(double rho, const ModelParams& p);
double potential_prime(double rho, const ModelParams& p);
// Throws SingularityError at rho = 0 when gamma < 2.
double potential_second(double rho, const ModelParams& p);

// Artificial-pressure potential Q(rho) = rho^beta/(beta-1).
double artificial_potential(double rho, const ModelParams& p);
double artificial_potential_second(double rho, const ModelParams& p);

// Convexity defect P(rho) - P'(r)(rho - r) - P(r); requires r > 0.
double bregman_gap(double rho, double r, const ModelParams& p);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct GapCoercivity {
  double c = 0.0;      // min(c_ess, c_res)
  double c_ess = 0.0;  // inf gap/|rho-r|^2 over essential samples (rho != r)
  double c_res = 0.0;  // inf gap/(1+|rho-r|^gamma) over residual samples
  long ess_samples = 0;
  long res_samples = 0;
};

// Largest c with gap >= c|rho-r|^2 on {|rho-r| <= r/2} and
// gap >= c(1+|rho-r|^gamma) on the complement, over a uniform
// `resolution x resolution` sample of the two ranges. Branches with no
// samples contribute +infinity.
GapCoercivity gap_coercivity_constant(Interval r_range, Interval rho_range,
                                      const ModelParams& p, int resolution = 201);

}  // namespace eos
}  // namespace nslab

#endif  // NSLAB_EOS_HPP_
