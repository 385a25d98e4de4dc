#ifndef NSLAB_HARNESS_HPP_
#define NSLAB_HARNESS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nslab/entropy.hpp"
#include "nslab/manufactured.hpp"
#include "nslab/mollify.hpp"
#include "nslab/solver.hpp"

namespace nslab::harness {

struct GridSpec {
  int dim = 2;
  int n = 32;
};

struct Tolerances {
  double verdict = 1e-8;             // LS <= RS + verdict
  double energy_monitor = 10.0;      // defect <= energy_monitor * (dt^2 + h^2)
  std::array<double, 3> kappa{1.0, 1.0, 1.0};  // tol_disc = k1 h^2 + k2 dt^2 + k3 eps
  double slope_min = 0.4;            // remainder decay slope in eps
  double uniformity = 2.0;           // max/min over eps of a priori quantities
  double c0_max = 1e4;
  double bisection_rel = 0.01;
};

struct MollifyTestSpec {
  int dim = 1;
  int n = 512;
  double t_end = 1.0;
  double dt = 0.005;
  std::vector<double> deltas{0.2, 0.1, 0.05, 0.025};
  mollify::TimeExtension extension = mollify::TimeExtension::Constant;
  int young_pairs = 100;
  double young_p = 2.0;
  double slope_min = 0.9;
};

struct ExperimentConfig {
  std::string scenario = "experiment";
  GridSpec grid;
  ModelParams params;
  SolverConfig solver;
  solver::PairRecipe pair;                    // comparison pair (and forcing recipe)
  std::optional<solver::PairRecipe> initial;  // initial data recipe; defaults to `pair`
  double mollify_delta = 0.0;                 // initial-data mollification radius
  bool forcing = false;                       // simulate: apply manufactured forcing of `pair`
  std::string verify_mode = "weak_strong";    // or "dissipative"
  std::vector<double> eps_list;
  Tolerances tol;
  std::optional<entropy::EntropyConstants> constants;
  std::vector<solver::PairRecipe> catalogue;  // kind "self" compares against the trajectory itself
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  bool write_snapshots = false;
  MollifyTestSpec mollify;

  // Throws ConfigError naming the violated invariant.
  void validate() const;
  Grid make_grid() const { return Grid(grid.dim, grid.n); }
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

double tol_disc(const std::array<double, 3>& kappa, double h, double dt, double eps);

// Unforced or forced (config.forcing) run from the configured initial data.
solver::Trajectory simulate_trajectory(const ExperimentConfig& c);

entropy::EntropyReport run_weak_strong(const ExperimentConfig& c);

struct SuiteResult {
  std::vector<entropy::EntropyReport> reports;
  bool pass = false;
};

// Comparison pairs of the catalogue (validated at every sample time before
// any evaluation) against one unforced trajectory.
struct SuiteTerms {
  solver::Trajectory trajectory;
  std::vector<std::string> names;
  std::vector<entropy::EntropyTerms> terms;
};
SuiteTerms dissipative_suite_terms(const ExperimentConfig& c);
SuiteResult run_dissipative_suite(const ExperimentConfig& c, const entropy::EntropyConstants& k);
SuiteResult assemble_suite(const SuiteTerms& t, const ModelParams& p,
                           const entropy::EntropyConstants& k, double tolerance);

struct CalibrationResult {
  entropy::EntropyConstants constants;
  std::string embedding_label;
  std::vector<std::pair<double, bool>> probes;  // (C0, suite passed)
  std::vector<double> min_slack;                // per scenario at the chosen C0
  std::vector<std::string> scenarios;
};

// c_hat from the embedding estimator, c_gamma from the Korn estimator
// (weighted by the initial density), C0* the least C0 in [0, c0_max] for
// which the suite passes, bisected to bisection_rel. Throws CalibrationError
// when no C0 <= c0_max passes.
CalibrationResult calibrate_constants(const ExperimentConfig& c);
CalibrationResult calibrate_from_terms(const SuiteTerms& t, const ExperimentConfig& c,
                                       double c_hat, double c_gamma);

struct Battery {
  double kinetic_sup = 0.0;     // sup_t int rho |u|^2
  double rho_gamma_sup = 0.0;   // sup_t int rho^gamma
  double u_h1_time = 0.0;       // int_0^T ||u||_{H^1}
  double eps_grad_rho = 0.0;    // eps int int rho^(gamma-2) |grad rho|^2
};

struct SweepMember {
  double eps = 0.0;
  bool aborted = false;
  std::string failure;
  double energy0 = 0.0;
  Battery battery;
  Battery ceiling;
  double r3 = 0.0;  // signed
  double r4 = 0.0;
  double ls_final = 0.0;
  double rs_final = 0.0;
};

struct SweepReport {
  std::vector<SweepMember> members;
  entropy::EntropyConstants constants;
  double korn_constant = 0.0;
  double r3_slope = 0.0;
  double r4_slope = 0.0;
  bool battery_below_ceiling = false;
  bool ceilings_uniform = false;
  bool battery_uniform = false;  // first three battery entries
  bool r3_decreasing = false;
  bool r4_decreasing = false;
  bool pass = false;
};

SweepReport run_eps_sweep(const ExperimentConfig& c, const entropy::EntropyConstants& k);

struct MollifyTestReport {
  mollify::ConvergenceReport convergence;
  bool constants_preserved = false;
  bool below_bound = false;
  double min_young_slack = 0.0;
  bool pass = false;
};
MollifyTestReport run_mollify_test(const ExperimentConfig& c);

void to_json(nlohmann::json& j, const SweepReport& r);
void write_sweep_csv(const std::string& path, const SweepReport& r);

// Subcommand drivers: run, write CSV/JSON under output_dir, return the verdict.
struct Outcome {
  bool pass = false;
  nlohmann::json summary;
  std::vector<std::string> files;
};
Outcome simulate(const ExperimentConfig& c);
Outcome verify(const ExperimentConfig& c);
Outcome sweep(const ExperimentConfig& c);
Outcome calibrate(const ExperimentConfig& c);
Outcome mollify_test(const ExperimentConfig& c);

}  // namespace nslab::harness

#endif  // NSLAB_HARNESS_HPP_
