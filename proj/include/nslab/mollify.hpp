#ifndef NSLAB_MOLLIFY_HPP_
#define NSLAB_MOLLIFY_HPP_

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "nslab/field.hpp"

namespace nslab::mollify {

enum class TimeExtension { Constant, Periodic };

std::string to_string(TimeExtension e);
TimeExtension time_extension_from_string(const std::string& s);

// Standard bump exp(-1/(1-|x|^2)) on |x| < 1, scaled to radius delta and
// renormalized so the lattice weights sum to one.
struct MollifierSpec {
  double delta = 0.1;
  TimeExtension extension = TimeExtension::Constant;
};

// Unnormalized profile exp(-1/(1-s^2)) for |s| < 1, zero otherwise.
double bump(double s);

struct SpaceKernel {
  std::vector<std::array<int, 3>> offsets;
  std::vector<double> weights;  // sums to one
};

// Throws ResolutionError when delta < 2h.
SpaceKernel space_kernel(const Grid& grid, double delta);
// Weights for time offsets -m..m; throws ResolutionError when delta < 2 dt.
std::vector<double> time_kernel(double dt, double delta);

ScalarField space_mollify(const ScalarField& f, const MollifierSpec& spec);
VectorField space_mollify(const VectorField& w, const MollifierSpec& spec);

// Space-time mollification of a uniformly sampled sequence (spacing dt).
std::vector<ScalarField> time_space_mollify(const std::vector<ScalarField>& sequence, double dt,
                                            const MollifierSpec& spec);

// Analytic w(t,x) with its time derivative and spatial gradient.
struct SpaceTimeFunction {
  std::function<double(double, const Point&)> value;
  std::function<double(double, const Point&)> dt;
  std::function<Vec3(double, const Point&)> grad;
};

struct ConvergenceRow {
  double delta = 0.0;
  double error = 0.0;  // max over the interior time window and all nodes
  double bound = 0.0;  // delta (||dt w||_{L1(L1)} + ||grad w||_{Linf(L1)})
  double slope = 0.0;  // secant slope against the previous row (NaN on the first)
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double fitted_slope = 0.0;  // least-squares slope of log(error) vs log(delta)
  double window_start = 0.0;
  double window_end = 0.0;
};

// Samples w on [0, t_end] at spacing dt, mollifies for every delta and
// reports the sup error on the window [max delta, t_end - max delta].
ConvergenceReport mollify_convergence_report(const SpaceTimeFunction& w, const Grid& grid,
                                             double t_end, double dt,
                                             const std::vector<double>& deltas,
                                             TimeExtension extension = TimeExtension::Constant);

// Least-squares slope of log(y) against log(x); two points give the secant.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

void write_convergence_csv(const std::string& path, const ConvergenceReport& report);

struct YoungCheck {
  double lhs = 0.0;  // ||f * g||_p
  double rhs = 0.0;  // ||f||_1 ||g||_p
};

YoungCheck young_convolution_check(const ScalarField& f, const ScalarField& g, double p);

}  // namespace nslab::mollify

#endif  // NSLAB_MOLLIFY_HPP_
