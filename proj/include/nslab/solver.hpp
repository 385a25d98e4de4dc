#ifndef NSLAB_SOLVER_HPP_
#define NSLAB_SOLVER_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nslab/entropy.hpp"
#include "nslab/eos.hpp"
#include "nslab/state.hpp"

namespace nslab {

void to_json(nlohmann::json& j, const SolverConfig& c);
void from_json(const nlohmann::json& j, SolverConfig& c);

namespace solver {

struct Rhs {
  ScalarField drho;
  VectorField dm;
};

// Right-hand side of the regularized system
//   dt rho = -div m + eps Lap rho + g
//   dt m   = -div(m (x) u) - grad p - eps^a grad rho^beta + div S(grad u)
//            + eps div(u (x) grad rho) + f,   (u (x) grad rho)_ij = u_i d_j rho.
// Throws VacuumError when min rho < rho_floor / 2.
Rhs brenner_rhs(const FluidState& s, const ModelParams& p, Backend b = Backend::Spectral,
                bool dealias = true, const Source* source = nullptr);

// cfl * min(h / (max|u| + max c_s), h^2 / (2 d nu_max)),
// c_s^2 = p'(rho) + eps^a beta rho^(beta-1), nu_max = max((2mu+lambda)/rho_min, eps).
double stable_dt(const FluidState& s, const ModelParams& p, const SolverConfig& c);

// One classical RK4 step of size dt.
FluidState step(const FluidState& s, const ModelParams& p, const SolverConfig& c, double dt,
                const Source* source = nullptr);
// One step with dt from stable_dt.
FluidState step(const FluidState& s, const ModelParams& p, const SolverConfig& c);

double energy(const FluidState& s, const ModelParams& p);
double energy_dissipation_rate(const FluidState& s, const ModelParams& p,
                               Backend b = Backend::Spectral);

struct LedgerRow {
  double t = 0.0;
  double mass = 0.0;
  Vec3 momentum{0.0, 0.0, 0.0};
  double energy = 0.0;
  double dissipation = 0.0;
  double min_rho = 0.0;
  double max_u = 0.0;
  double dt = 0.0;
};

struct Trajectory {
  std::vector<FluidState> samples;
  std::vector<LedgerRow> ledger;
  long steps = 0;
  bool aborted = false;
  std::string abort_reason;
  std::optional<FluidState> diagnostic;  // offending state on abort
};

// Integrates to config.t_end, keeping every sample_stride-th step plus the
// final state. Vacuum and non-finite states stop the run with aborted = true.
Trajectory run(const FluidState& initial, const ModelParams& p, const SolverConfig& c,
               const Source* source = nullptr);

// Columns: t,mass,momentum_0..,energy,dissipation,min_rho,max_u,dt
void write_ledger_csv(const std::string& path, const Trajectory& tr);
// snap_000000.bin, ... (rho then momentum components) into an existing directory.
void write_snapshots(const std::string& directory, const Trajectory& tr);

struct EnergyMonitorReport {
  std::vector<double> times;    // interval midpoints
  std::vector<double> defects;  // (E_{k+1} - E_k)/dt + (D_k + D_{k+1})/2
  double max_defect = 0.0;      // signed maximum
  double max_abs_defect = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

EnergyMonitorReport energy_inequality_monitor(const std::vector<FluidState>& samples,
                                              const ModelParams& p, double tolerance,
                                              Backend b = Backend::Spectral);

struct RenormFunction {
  std::string name;
  std::function<double(double)> B, dB, d2B;
};
RenormFunction renorm_identity();
RenormFunction renorm_square();
RenormFunction renorm_entropy();  // z ln z

struct RenormReport {
  std::vector<double> times;  // interior sample times
  std::vector<double> l1;     // L^1 norm of the residual
  double max_l1 = 0.0;
};

// dt B + div(B u) + (B' rho - B) div u - eps div(B' grad rho) + eps B'' |grad rho|^2,
// dt by centered differences across samples (interior samples only).
RenormReport renormalized_continuity_residual(const std::vector<FluidState>& samples,
                                              const RenormFunction& B, const ModelParams& p,
                                              Backend b = Backend::Spectral);

struct InitialDataTarget {
  std::function<double(const Point&)> rho;
  std::function<Vec3(const Point&)> m;
};

struct InitialData {
  FluidState state;
  std::size_t clamped_low = 0;   // nodes raised to eps (vacuum patches)
  std::size_t clamped_high = 0;  // nodes lowered to eps^(-a/(2 beta))
  double mass = 0.0;
};

// rho_0^eps = clamp(rho_0, eps, eps^(-a/(2 beta))), u_0^eps = m_0 / max(rho_0, eps),
// both space-mollified at radius delta (delta = 0 disables), m = rho u.
// Throws ArgumentError when m_0 != 0 where rho_0 = 0.
InitialData initial_data(const Grid& g, const ModelParams& p, const InitialDataTarget& target,
                         double mollify_delta = 0.0);

}  // namespace solver
}  // namespace nslab

#endif  // NSLAB_SOLVER_HPP_
