#include "nslab/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "nslab/errors.hpp"
#include "nslab/norms.hpp"
#include "nslab/operators.hpp"

namespace nslab::mollify {

std::string to_string(TimeExtension e) { return e == TimeExtension::Constant ? "constant" : "periodic"; }

TimeExtension time_extension_from_string(const std::string& s) {
  if (s == "constant") return TimeExtension::Constant;
  if (s == "periodic") return TimeExtension::Periodic;
  throw ConfigError("time_extension", "unknown time extension '" + s + "'");
}

double bump(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s2));
}

SpaceKernel space_kernel(const Grid& grid, double delta) {
  if (!(delta >= 2.0 * grid.h()))
    throw ResolutionError("space_kernel: delta must be at least 2h (unresolved mollifier)");
  const int radius = static_cast<int>(std::ceil(delta / grid.h()));
  const int d = grid.dim();
  SpaceKernel k;
  double total = 0.0;
  const int r1 = d > 1 ? radius : 0;
  const int r2 = d > 2 ? radius : 0;
  for (int a = -radius; a <= radius; ++a)
    for (int b = -r1; b <= r1; ++b)
      for (int c = -r2; c <= r2; ++c) {
        const double dist = grid.h() * std::sqrt(static_cast<double>(a * a + b * b + c * c));
        const double w = bump(dist / delta);
        if (w <= 0.0) continue;
        k.offsets.push_back({a, b, c});
        k.weights.push_back(w);
        total += w;
      }
  for (auto& w : k.weights) w /= total;
  return k;
}

std::vector<double> time_kernel(double dt, double delta) {
  if (!(dt > 0.0)) throw ArgumentError("time_kernel: dt must be positive");
  if (!(delta >= 2.0 * dt))
    throw ResolutionError("time_kernel: delta must be at least 2 dt (unresolved mollifier)");
  const int m = static_cast<int>(std::ceil(delta / dt));
  std::vector<double> w(static_cast<std::size_t>(2 * m + 1));
  double total = 0.0;
  for (int s = -m; s <= m; ++s) {
    w[static_cast<std::size_t>(s + m)] = bump(s * dt / delta);
    total += w[static_cast<std::size_t>(s + m)];
  }
  for (auto& x : w) x /= total;
  return w;
}

ScalarField space_mollify(const ScalarField& f, const MollifierSpec& spec) {
  const Grid& g = f.grid();
  const SpaceKernel k = space_kernel(g, spec.delta);
  const int n = g.n();
  const int d = g.dim();
  ScalarField out(g);
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  for (std::size_t node = 0; node < g.size(); ++node) {
    const auto ijk = g.multi_index(node);
    const double centre = f[node];
    double acc = 0.0;
    for (std::size_t o = 0; o < k.offsets.size(); ++o) {
      std::size_t src = 0;
      for (int a = 0; a < d; ++a)
        src += static_cast<std::size_t>(wrap(ijk[static_cast<std::size_t>(a)] - k.offsets[o][static_cast<std::size_t>(a)])) * g.stride(a);
      acc += k.weights[o] * (f[src] - centre);
    }
    // Difference form: constants come back bit-for-bit.
    out[node] = centre + acc;
  }
  return out;
}

VectorField space_mollify(const VectorField& w, const MollifierSpec& spec) {
  std::vector<ScalarField> comps;
  for (int c = 0; c < w.components(); ++c) comps.push_back(space_mollify(w[c], spec));
  return VectorField(std::move(comps));
}

std::vector<ScalarField> time_space_mollify(const std::vector<ScalarField>& sequence, double dt,
                                            const MollifierSpec& spec) {
  if (sequence.empty()) throw ArgumentError("time_space_mollify: empty sequence");
  const std::vector<double> w = time_kernel(dt, spec.delta);
  const int m = static_cast<int>(w.size() / 2);
  const int count = static_cast<int>(sequence.size());
  auto source = [&](int k) {
    if (spec.extension == TimeExtension::Periodic) return ((k % count) + count) % count;
    return std::clamp(k, 0, count - 1);
  };
  std::vector<ScalarField> out;
  out.reserve(sequence.size());
  for (int k = 0; k < count; ++k) {
    const ScalarField& centre = sequence[static_cast<std::size_t>(k)];
    ScalarField acc(centre.grid());
    for (int s = -m; s <= m; ++s) {
      const double ws = w[static_cast<std::size_t>(s + m)];
      if (ws == 0.0) continue;
      const ScalarField& other = sequence[static_cast<std::size_t>(source(k - s))];
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += ws * (other[i] - centre[i]);
    }
    acc += centre;
    out.push_back(space_mollify(acc, spec));
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("loglog_slope: need >= 2 points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw ArgumentError("loglog_slope: abscissae coincide");
  return (n * sxy - sx * sy) / den;
}

ConvergenceReport mollify_convergence_report(const SpaceTimeFunction& w, const Grid& grid,
                                             double t_end, double dt,
                                             const std::vector<double>& deltas,
                                             TimeExtension extension) {
  if (deltas.size() < 2) throw ArgumentError("mollify_convergence_report: need at least two deltas");
  if (!(t_end > 0.0) || !(dt > 0.0)) throw ArgumentError("mollify_convergence_report: bad time axis");
  const int steps = static_cast<int>(std::lround(t_end / dt));
  std::vector<double> times;
  std::vector<ScalarField> seq;
  for (int k = 0; k <= steps; ++k) {
    const double t = k * dt;
    times.push_back(t);
    seq.push_back(ScalarField::sample(grid, [&](const Point& x) { return w.value(t, x); }));
  }

  // Right-hand side of the pointwise estimate, with unit constant.
  double dt_l1l1 = 0.0;
  double grad_linf_l1 = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    const double a = lp_norm(ScalarField::sample(grid, [&](const Point& x) { return w.dt(t, x); }), 1.0);
    const double wk = (k == 0 || k + 1 == times.size()) ? 0.5 : 1.0;
    dt_l1l1 += wk * dt * a;
    const VectorField g = VectorField::sample(grid, [&](const Point& x) { return w.grad(t, x); });
    grad_linf_l1 = std::max(grad_linf_l1, lp_norm(g, 1.0));
  }

  ConvergenceReport report;
  const double dmax = *std::max_element(deltas.begin(), deltas.end());
  report.window_start = dmax;
  report.window_end = t_end - dmax;
  if (!(report.window_end > report.window_start))
    throw ArgumentError("mollify_convergence_report: time window empty for the largest delta");

  std::vector<double> errs;
  for (std::size_t r = 0; r < deltas.size(); ++r) {
    const double delta = deltas[r];
    const auto moll = time_space_mollify(seq, dt, MollifierSpec{delta, extension});
    double err = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (times[k] < report.window_start - 1e-12 || times[k] > report.window_end + 1e-12) continue;
      for (std::size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(moll[k][i] - seq[k][i]));
    }
    ConvergenceRow row;
    row.delta = delta;
    row.error = err;
    row.bound = delta * (dt_l1l1 + grad_linf_l1);
    row.slope = std::numeric_limits<double>::quiet_NaN();
    if (r > 0 && err > 0.0 && report.rows.back().error > 0.0)
      row.slope = loglog_slope({report.rows.back().delta, delta}, {report.rows.back().error, err});
    report.rows.push_back(row);
    errs.push_back(err);
  }
  const bool all_positive = std::all_of(errs.begin(), errs.end(), [](double e) { return e > 0.0; });
  report.fitted_slope = all_positive ? loglog_slope(deltas, errs) : std::numeric_limits<double>::quiet_NaN();
  return report;
}

void write_convergence_csv(const std::string& path, const ConvergenceReport& report) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (fp == nullptr) throw IoError("write_convergence_csv: cannot open '" + path + "'");
  std::fprintf(fp, "delta,error,bound,slope\n");
  for (const auto& r : report.rows) {
    if (std::isnan(r.slope)) {
      std::fprintf(fp, "%.17g,%.17g,%.17g,\n", r.delta, r.error, r.bound);
    } else {
      std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g\n", r.delta, r.error, r.bound, r.slope);
    }
  }
  std::fclose(fp);
}

YoungCheck young_convolution_check(const ScalarField& f, const ScalarField& g, double p) {
  if (!(p >= 1.0)) throw ArgumentError("young_convolution_check: p must be >= 1");
  YoungCheck out;
  out.lhs = lp_norm(convolve(f, g), p);
  out.rhs = lp_norm(f, 1.0) * lp_norm(g, p);
  return out;
}

}  // namespace nslab::mollify
