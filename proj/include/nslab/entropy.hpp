#ifndef NSLAB_ENTROPY_HPP_
#define NSLAB_ENTROPY_HPP_

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nslab/eos.hpp"
#include "nslab/pair.hpp"
#include "nslab/state.hpp"

namespace nslab {

// Mass and momentum sources on the right-hand side of the continuity and
// momentum equations (used for manufactured runs).
struct Source {
  std::function<double(double, const Point&)> mass;
  std::function<Vec3(double, const Point&)> momentum;
  // Optional single-pass evaluation of (mass, momentum); used when set.
  std::function<std::pair<double, Vec3>(double, const Point&)> both;

  void sample(const Grid& g, double t, ScalarField& mass_out, VectorField& momentum_out) const;
};

namespace entropy {

struct EntropyConstants {
  double C0 = 1.0;       // Gronwall constant
  double c_hat = 1.0;    // H^1 -> L^6 embedding constant
  double c_gamma = 1.0;  // Korn / Poincare constant

  void validate() const;  // all strictly positive, except C0 >= 0 allowed for calibration
};

void to_json(nlohmann::json& j, const EntropyConstants& c);
void from_json(const nlohmann::json& j, EntropyConstants& c);

// E1(r, v) = dt r + div(r v)
ScalarField e1_residual(const TestPair& pair, const Grid& g, double t,
                        Backend b = Backend::Spectral);
// E2(r, v) = r dt v + r (v . grad) v + grad p(r) - div S(grad v)
VectorField e2_residual(const TestPair& pair, const Grid& g, double t, const ModelParams& p,
                        Backend b = Backend::Spectral);

// The three summands of Lambda_0(v), split so the constants can vary.
struct Lambda0Parts {
  double strain_sup = 0.0;   // ||D(v)||_inf (pointwise Frobenius norm)
  double div_stress_a = 0.0; // ||div S(grad v)||^2 in L^{6 gamma/(5 gamma - 3)}
  double div_stress_b = 0.0; // ||div S(grad v)||   in L^{2 gamma/(gamma - 1)}
  double r1 = 1.0;

  double value(const ModelParams& p, const EntropyConstants& c) const;
};

Lambda0Parts lambda0_parts(const TestPair& pair, const Grid& g, double t, const ModelParams& p,
                           Backend b = Backend::Spectral);
double lambda0(const TestPair& pair, const Grid& g, double t, const ModelParams& p,
               const EntropyConstants& c, Backend b = Backend::Spectral);
// Periodic: mu + Lambda_0; Dirichlet: Lambda_0.
double lambda(const TestPair& pair, const Grid& g, double t, const ModelParams& p,
              const EntropyConstants& c, Backend b = Backend::Spectral);
double lambda_from_lambda0(double lambda0_value, const ModelParams& p);

struct Masks {
  std::vector<unsigned char> ess;  // |rho - r| <= r/2
  std::vector<unsigned char> res;  // complement
  double ess_fraction = 0.0;
};
Masks ess_res_masks(const ScalarField& rho, const ScalarField& r);

// exp(C0 int_s^t Lambda) by the trapezoid rule on the piecewise-linear
// interpolant of (times, lambda_series).
double gronwall_factor(const std::vector<double>& times, const std::vector<double>& lambda_series,
                       double s, double t, double C0);

struct LsSeries {
  std::vector<double> times;
  std::vector<double> energy;       // int 1/2 rho |u-v|^2 + gap(rho, r)
  std::vector<double> dissipation;  // 1/2 int_0^t int S(grad(u-v)):grad(u-v)
  std::vector<double> total;
};

LsSeries relative_entropy_ls(const std::vector<FluidState>& trajectory, const TestPair& pair,
                             const ModelParams& p, Backend b = Backend::Spectral);

struct RsSeries {
  std::vector<double> times;
  std::vector<double> initial;  // exp(int_0^t C0 Lambda) E_rel(0)
  std::vector<double> e1;
  std::vector<double> e2;
  std::vector<double> total;
  std::vector<double> lambda;
};

// C0-independent per-sample integrands; assembling RS from these is cheap,
// which the calibration bisection relies on.
struct EntropyTerms {
  std::vector<double> times;
  LsSeries ls;
  double initial_relative_energy = 0.0;
  std::vector<Lambda0Parts> lambda_parts;
  std::vector<double> e1_density;  // int |(r - rho) P''(r) E1| dx
  std::vector<double> e2_density;  // int |rho/r E2 . (v - u)| dx
  std::vector<double> ess_fraction;
};

// `initial` / `initial_pair` default to the first trajectory sample and `pair`.
// A source, when given, is subtracted from E1 / E2 (residual of the forced system).
EntropyTerms entropy_terms(const std::vector<FluidState>& trajectory, const TestPair& pair,
                           const ModelParams& p, Backend b = Backend::Spectral,
                           const FluidState* initial = nullptr,
                           const TestPair* initial_pair = nullptr,
                           const Source* source = nullptr);

RsSeries assemble_rs(const EntropyTerms& terms, const ModelParams& p, const EntropyConstants& c);

RsSeries relative_entropy_rs(const std::vector<FluidState>& trajectory, const TestPair& pair,
                             const ModelParams& p, const EntropyConstants& c,
                             Backend b = Backend::Spectral, const FluidState* initial = nullptr,
                             const TestPair* initial_pair = nullptr);

struct EntropyReport {
  std::string scenario;
  std::vector<double> times;
  std::vector<double> ls, ls_energy, ls_dissipation;
  std::vector<double> rs, rs_initial, rs_e1, rs_e2;
  std::vector<double> lambda;
  std::vector<double> ess_fraction;
  EntropyConstants constants;
  double tolerance = 0.0;
  bool verdict = false;
  std::optional<double> first_violation_time;
  std::string first_violation_term;
  double max_ls = 0.0;
  double min_slack = 0.0;  // min_t (RS + tol - LS)
};

EntropyReport assemble_report(const EntropyTerms& terms, const ModelParams& p,
                              const EntropyConstants& c, double tolerance,
                              std::string scenario = {});

// LS(t) <= RS(t) + tolerance at every sample.
EntropyReport dissipative_verdict(const std::vector<FluidState>& trajectory, const TestPair& pair,
                                  const ModelParams& p, const EntropyConstants& c,
                                  double tolerance, Backend b = Backend::Spectral);

void to_json(nlohmann::json& j, const EntropyReport& r);
// Columns: t,LS,LS_energy,LS_dissipation,RS,RS_initial,RS_E1,RS_E2,lambda,ess_fraction
void write_report_csv(const std::string& path, const EntropyReport& r);

}  // namespace entropy
}  // namespace nslab

#endif  // NSLAB_ENTROPY_HPP_
