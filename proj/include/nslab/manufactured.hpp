#ifndef NSLAB_MANUFACTURED_HPP_
#define NSLAB_MANUFACTURED_HPP_

#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json_fwd.hpp>

#include "nslab/entropy.hpp"
#include "nslab/pair.hpp"

namespace nslab::solver {

// Smooth additive perturbation of a base recipe:
//   r += r_amp cos(x_0) cos(omega t)
//   v_i += v_amp sin(x_{(i+1) mod d}) cos(omega t) + shift_i
struct Perturbation {
  double r_amp = 0.0;
  double v_amp = 0.0;
  Vec3 v_shift{0.0, 0.0, 0.0};
  double omega = 0.0;
};

// Catalogue:
//   rest            r = rbar, v = 0
//   acoustic        r = rbar + amp sin(x - c t), v_0 = (c / rbar) amp sin(x - c t), c = sqrt(p'(rbar))
//   shear           r = rbar, v = (U sin y, 0, 0)                (dim >= 2)
//   decaying_shear  r = rbar, v = (U exp(-mu t / rbar) sin y, 0, 0)  (dim >= 2)
struct PairRecipe {
  std::string kind = "rest";
  std::string name;  // defaults to kind
  double rbar = 1.0;
  double amplitude = 0.1;  // acoustic amplitude
  double shear_u = 1.0;
  Perturbation perturbation;
  std::optional<double> r1;  // declared lower bound; defaults to the analytic minimum
};

void to_json(nlohmann::json& j, const PairRecipe& r);
void from_json(const nlohmann::json& j, PairRecipe& r);

// Analytic pair with every evaluator filled. Throws ArgumentError for an
// unknown recipe or a shear recipe in 1-D.
TestPair manufactured_pair(const PairRecipe& recipe, const ModelParams& p, int dim);

// Analytic (E1, E2) of a pair with complete evaluators, un-regularized system.
std::pair<double, Vec3> analytic_residuals(const PairEvaluators& ev, const ModelParams& p, int dim,
                                           double t, const Point& x);

// Sources g = E1, f = E2 + v E1 (conservative form) making the pair an exact
// solution of the forced system with eps = 0.
Source manufactured_forcing(const PairRecipe& recipe, const ModelParams& p, int dim);

}  // namespace nslab::solver

#endif  // NSLAB_MANUFACTURED_HPP_
