// Pilot runs that fix the discretization-tolerance coefficients
// tol_disc = k1 h^2 + k2 dt^2 + k3 eps for the weak-strong checks.
// Every pilot point is coarser than the 64^2, eps = 1e-3 target.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "nslab/harness.hpp"

using nslab::harness::ExperimentConfig;

namespace {

struct Point {
  double max_ls = 0.0;
  double h = 0.0;
  double dt = 0.0;
};

Point pilot(const std::string& kind, int n, double eps, double cfl, double t_end) {
  ExperimentConfig c;
  c.scenario = kind;
  c.grid = {2, n};
  c.params.eps = eps;
  c.solver.t_end = t_end;
  c.solver.cfl = cfl;
  c.pair.kind = kind;
  c.tol.kappa = {0.0, 1.0, 0.0};
  const auto rep = nslab::harness::run_weak_strong(c);
  return {rep.max_ls, c.make_grid().h(), std::sqrt(rep.tolerance)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out = argc > 1 ? argv[1] : "data/tol_disc.json";
  const double safety = 4.0;
  const double t_end = 0.2;
  const int n0 = 16;
  const double eps0 = 4e-3;
  const double cfl0 = 0.5;

  nlohmann::json runs = nlohmann::json::array();
  std::array<double, 3> kappa{0.0, 0.0, 0.0};
  for (const std::string kind : {"shear", "acoustic"}) {
    const Point base = pilot(kind, n0, eps0, cfl0, t_end);
    const Point fine_h = pilot(kind, 2 * n0, eps0, cfl0, t_end);
    const Point fine_dt = pilot(kind, n0, eps0, cfl0 / 2.0, t_end);
    const Point fine_eps = pilot(kind, n0, eps0 / 2.0, cfl0, t_end);

    const double k1 = std::abs(base.max_ls - fine_h.max_ls) / (base.h * base.h - fine_h.h * fine_h.h);
    const double k2 = std::abs(base.max_ls - fine_dt.max_ls) / (base.dt * base.dt - fine_dt.dt * fine_dt.dt);
    // All remaining LS is charged to the regularization.
    const double k3 = std::max(base.max_ls / eps0, fine_eps.max_ls / (eps0 / 2.0));
    kappa[0] = std::max(kappa[0], safety * k1);
    kappa[1] = std::max(kappa[1], safety * k2);
    kappa[2] = std::max(kappa[2], safety * k3);

    auto row = [&](const char* label, const Point& p, int n, double eps, double cfl) {
      runs.push_back({{"scenario", kind}, {"variant", label}, {"n", n}, {"eps", eps}, {"cfl", cfl},
                      {"h", p.h}, {"max_dt", p.dt}, {"max_ls", p.max_ls}});
    };
    row("base", base, n0, eps0, cfl0);
    row("h/2", fine_h, 2 * n0, eps0, cfl0);
    row("dt/2", fine_dt, n0, eps0, cfl0 / 2.0);
    row("eps/2", fine_eps, n0, eps0 / 2.0, cfl0);
  }

  const nlohmann::json j{{"kappa", kappa}, {"safety", safety}, {"t_end", t_end}, {"runs", runs}};
  std::ofstream f(out);
  if (!f) {
    std::fprintf(stderr, "cannot write %s\n", out.c_str());
    return 2;
  }
  f << j.dump(2) << '\n';
  std::printf("kappa = %.17g %.17g %.17g\n", kappa[0], kappa[1], kappa[2]);
  return 0;
}
