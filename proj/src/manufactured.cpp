#include "nslab/manufactured.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "nslab/errors.hpp"

namespace nslab::solver {

void to_json(nlohmann::json& j, const PairRecipe& r) {
  const auto& q = r.perturbation;
  j = nlohmann::json{{"kind", r.kind},
                     {"name", r.name.empty() ? r.kind : r.name},
                     {"rbar", r.rbar},
                     {"amplitude", r.amplitude},
                     {"shear_u", r.shear_u},
                     {"perturbation",
                      {{"r_amp", q.r_amp},
                       {"v_amp", q.v_amp},
                       {"v_shift", {q.v_shift[0], q.v_shift[1], q.v_shift[2]}},
                       {"omega", q.omega}}}};
  if (r.r1) j["r1"] = *r.r1;
}

void from_json(const nlohmann::json& j, PairRecipe& r) {
  PairRecipe d;
  r.kind = j.value("kind", d.kind);
  r.name = j.value("name", std::string{});
  r.rbar = j.value("rbar", d.rbar);
  r.amplitude = j.value("amplitude", d.amplitude);
  r.shear_u = j.value("shear_u", d.shear_u);
  r.perturbation = Perturbation{};
  r.r1.reset();
  if (j.contains("r1")) r.r1 = j.at("r1").get<double>();
  if (j.contains("perturbation")) {
    const auto& q = j.at("perturbation");
    r.perturbation.r_amp = q.value("r_amp", 0.0);
    r.perturbation.v_amp = q.value("v_amp", 0.0);
    r.perturbation.omega = q.value("omega", 0.0);
    if (q.contains("v_shift")) {
      const auto& s = q.at("v_shift");
      if (!s.is_array() || s.size() > 3)
        throw ConfigError("v_shift", "perturbation.v_shift must be an array of at most 3 numbers");
      for (std::size_t i = 0; i < s.size(); ++i) r.perturbation.v_shift[i] = s[i].get<double>();
    }
  }
}

namespace {

struct Shape {
  int dim = 1;
  double rbar = 1.0;
  double alpha = 0.0;  // acoustic amplitude
  double c = 0.0;      // acoustic speed
  double shear = 0.0;
  double shear_rate = 0.0;  // decay exponent
  Perturbation q;
};

double shear_factor(const Shape& s, double t) { return s.shear * std::exp(-s.shear_rate * t); }

PairEvaluators make_evaluators(const Shape& s) {
  PairEvaluators ev;
  const int d = s.dim;
  auto nb = [d](int i) { return (i + 1) % d; };
  const double a_v = s.rbar > 0.0 ? s.c / s.rbar * s.alpha : 0.0;

  ev.r = [s](double t, const Point& x) {
    return s.rbar + s.alpha * std::sin(x[0] - s.c * t) + s.q.r_amp * std::cos(x[0]) * std::cos(s.q.omega * t);
  };
  ev.dt_r = [s](double t, const Point& x) {
    return -s.c * s.alpha * std::cos(x[0] - s.c * t) -
           s.q.omega * s.q.r_amp * std::cos(x[0]) * std::sin(s.q.omega * t);
  };
  ev.grad_r = [s](double t, const Point& x) {
    return Vec3{s.alpha * std::cos(x[0] - s.c * t) - s.q.r_amp * std::sin(x[0]) * std::cos(s.q.omega * t), 0.0, 0.0};
  };
  ev.v = [s, d, nb, a_v](double t, const Point& x) {
    Vec3 v{0.0, 0.0, 0.0};
    v[0] += a_v * std::sin(x[0] - s.c * t);
    if (d >= 2) v[0] += shear_factor(s, t) * std::sin(x[1]);
    for (int i = 0; i < d; ++i)
      v[static_cast<std::size_t>(i)] += s.q.v_amp * std::sin(x[static_cast<std::size_t>(nb(i))]) * std::cos(s.q.omega * t) +
                                        s.q.v_shift[static_cast<std::size_t>(i)];
    return v;
  };
  ev.dt_v = [s, d, nb, a_v](double t, const Point& x) {
    Vec3 v{0.0, 0.0, 0.0};
    v[0] += -s.c * a_v * std::cos(x[0] - s.c * t);
    if (d >= 2) v[0] += -s.shear_rate * shear_factor(s, t) * std::sin(x[1]);
    for (int i = 0; i < d; ++i)
      v[static_cast<std::size_t>(i)] += -s.q.omega * s.q.v_amp * std::sin(x[static_cast<std::size_t>(nb(i))]) * std::sin(s.q.omega * t);
    return v;
  };
  ev.grad_v = [s, d, nb, a_v](double t, const Point& x) {
    Mat3 J{};
    J[0][0] += a_v * std::cos(x[0] - s.c * t);
    if (d >= 2) J[0][1] += shear_factor(s, t) * std::cos(x[1]);
    for (int i = 0; i < d; ++i) {
      const int j = nb(i);
      J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
          s.q.v_amp * std::cos(x[static_cast<std::size_t>(j)]) * std::cos(s.q.omega * t);
    }
    return J;
  };
  // Every component is a single Fourier mode, so Lap v = -(oscillating part of v).
  ev.lap_v = [s, d, nb, a_v](double t, const Point& x) {
    Vec3 v{0.0, 0.0, 0.0};
    v[0] -= a_v * std::sin(x[0] - s.c * t);
    if (d >= 2) v[0] -= shear_factor(s, t) * std::sin(x[1]);
    for (int i = 0; i < d; ++i)
      v[static_cast<std::size_t>(i)] -= s.q.v_amp * std::sin(x[static_cast<std::size_t>(nb(i))]) * std::cos(s.q.omega * t);
    return v;
  };
  ev.grad_div_v = [s, d, nb, a_v](double t, const Point& x) {
    Vec3 g{0.0, 0.0, 0.0};
    g[0] -= a_v * std::sin(x[0] - s.c * t);
    for (int i = 0; i < d; ++i)
      if (nb(i) == i)
        g[static_cast<std::size_t>(i)] -= s.q.v_amp * std::sin(x[static_cast<std::size_t>(i)]) * std::cos(s.q.omega * t);
    return g;
  };
  return ev;
}

Shape make_shape(const PairRecipe& recipe, const ModelParams& p, int dim) {
  if (dim < 1 || dim > 3) throw ArgumentError("manufactured_pair: dim must be 1, 2 or 3");
  if (!(recipe.rbar > 0.0)) throw ArgumentError("manufactured_pair: rbar must be positive");
  Shape s;
  s.dim = dim;
  s.rbar = recipe.rbar;
  s.q = recipe.perturbation;
  for (int i = dim; i < 3; ++i) s.q.v_shift[static_cast<std::size_t>(i)] = 0.0;
  if (recipe.kind == "rest") {
  } else if (recipe.kind == "acoustic") {
    s.alpha = recipe.amplitude;
    s.c = std::sqrt(eos::pressure_derivative(recipe.rbar, p));
  } else if (recipe.kind == "shear" || recipe.kind == "decaying_shear") {
    if (dim < 2) throw ArgumentError("manufactured_pair: shear recipes need dim >= 2");
    s.shear = recipe.shear_u;
    if (recipe.kind == "decaying_shear") s.shear_rate = p.mu / recipe.rbar;
  } else {
    throw ArgumentError("manufactured_pair: unknown recipe '" + recipe.kind + "'");
  }
  return s;
}

}  // namespace

TestPair manufactured_pair(const PairRecipe& recipe, const ModelParams& p, int dim) {
  const Shape s = make_shape(recipe, p, dim);
  const double r1 = recipe.r1 ? *recipe.r1 : s.rbar - std::abs(s.alpha) - std::abs(s.q.r_amp);
  if (!(r1 > 0.0)) throw ArgumentError("manufactured_pair: amplitudes leave no positive lower bound");
  const double r2 = s.rbar + std::abs(s.alpha) + std::abs(s.q.r_amp);
  return TestPair(recipe.name.empty() ? recipe.kind : recipe.name, make_evaluators(s), r1, r2);
}

std::pair<double, Vec3> analytic_residuals(const PairEvaluators& ev, const ModelParams& p, int dim,
                                           double t, const Point& x) {
  if (!ev.grad_r || !ev.grad_v || !ev.lap_v || !ev.grad_div_v)
    throw ArgumentError("analytic_residuals: pair lacks spatial derivative evaluators");
  const double r = ev.r(t, x);
  const Vec3 gr = ev.grad_r(t, x);
  const Vec3 v = ev.v(t, x);
  const Vec3 dv = ev.dt_v(t, x);
  const Mat3 J = ev.grad_v(t, x);
  const Vec3 lap = ev.lap_v(t, x);
  const Vec3 gd = ev.grad_div_v(t, x);
  double div_v = 0.0, v_grad_r = 0.0;
  for (int i = 0; i < dim; ++i) {
    div_v += J[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    v_grad_r += v[static_cast<std::size_t>(i)] * gr[static_cast<std::size_t>(i)];
  }
  const double e1 = ev.dt_r(t, x) + v_grad_r + r * div_v;
  const double dp = eos::pressure_derivative(r, p);
  Vec3 e2{0.0, 0.0, 0.0};
  for (int i = 0; i < dim; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    double conv = 0.0;
    for (int j = 0; j < dim; ++j) conv += J[ii][static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
    e2[ii] = r * (dv[ii] + conv) + dp * gr[ii] - p.mu * lap[ii] - (p.mu + p.lambda) * gd[ii];
  }
  return {e1, e2};
}

Source manufactured_forcing(const PairRecipe& recipe, const ModelParams& p, int dim) {
  const Shape s = make_shape(recipe, p, dim);
  auto ev = std::make_shared<const PairEvaluators>(make_evaluators(s));
  Source src;
  src.mass = [ev, p, dim](double t, const Point& x) { return analytic_residuals(*ev, p, dim, t, x).first; };
  src.momentum = [ev, p, dim](double t, const Point& x) {
    const auto [e1, e2] = analytic_residuals(*ev, p, dim, t, x);
    const Vec3 v = ev->v(t, x);
    Vec3 f{0.0, 0.0, 0.0};
    for (int i = 0; i < dim; ++i) f[static_cast<std::size_t>(i)] = e2[static_cast<std::size_t>(i)] + v[static_cast<std::size_t>(i)] * e1;
    return f;
  };
  src.both = [ev, p, dim](double t, const Point& x) {
    const auto [e1, e2] = analytic_residuals(*ev, p, dim, t, x);
    const Vec3 v = ev->v(t, x);
    Vec3 f{0.0, 0.0, 0.0};
    for (int i = 0; i < dim; ++i) f[static_cast<std::size_t>(i)] = e2[static_cast<std::size_t>(i)] + v[static_cast<std::size_t>(i)] * e1;
    return std::pair<double, Vec3>{e1, f};
  };
  return src;
}

}  // namespace nslab::solver
