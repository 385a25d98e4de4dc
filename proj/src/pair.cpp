#include "nslab/pair.hpp"

#include <algorithm>
#include <cmath>

#include "nslab/errors.hpp"

namespace nslab {

struct TestPair::Samples {
  std::vector<double> times;
  std::vector<ScalarField> r;
  std::vector<VectorField> v;

  std::size_t locate(double t) const {
    const double tol = 1e-9 * std::max(1.0, std::abs(times.back()));
    for (std::size_t k = 0; k < times.size(); ++k)
      if (std::abs(times[k] - t) <= tol) return k;
    throw ArgumentError("sampled TestPair: time is not one of the sample times");
  }

  // Weights of the 3-point second-order derivative at index k.
  std::array<std::pair<std::size_t, double>, 3> stencil(std::size_t k) const {
    const std::size_t n = times.size();
    std::size_t a, b, c;  // three consecutive indices containing k
    if (k == 0) {
      a = 0, b = 1, c = 2;
    } else if (k + 1 == n) {
      a = n - 3, b = n - 2, c = n - 1;
    } else {
      a = k - 1, b = k, c = k + 1;
    }
    const double x = times[k], xa = times[a], xb = times[b], xc = times[c];
    // Derivative of the Lagrange interpolant through (xa, xb, xc) at x.
    const double wa = ((x - xb) + (x - xc)) / ((xa - xb) * (xa - xc));
    const double wb = ((x - xa) + (x - xc)) / ((xb - xa) * (xb - xc));
    const double wc = ((x - xa) + (x - xb)) / ((xc - xa) * (xc - xb));
    return {{{a, wa}, {b, wb}, {c, wc}}};
  }
};

TestPair::TestPair(std::string name, PairEvaluators ev, double r1, std::optional<double> r2)
    : name_(std::move(name)), r1_(r1), r2_(r2),
      ev_(std::make_shared<const PairEvaluators>(std::move(ev))) {
  if (!ev_->r || !ev_->dt_r || !ev_->v || !ev_->dt_v)
    throw ArgumentError("TestPair: r, dt_r, v and dt_v evaluators are required");
}

TestPair TestPair::from_samples(std::string name, std::vector<double> times,
                                std::vector<ScalarField> r, std::vector<VectorField> v, double r1,
                                std::optional<double> r2) {
  if (times.size() < 3 || r.size() != times.size() || v.size() != times.size())
    throw ArgumentError("TestPair::from_samples: need >= 3 matching samples");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw ArgumentError("TestPair::from_samples: times must increase");
  auto s = std::make_shared<Samples>();
  s->times = std::move(times);
  s->r = std::move(r);
  s->v = std::move(v);
  return TestPair(std::move(name), r1, r2, std::move(s));
}

TestPair::TestPair(std::string name, double r1, std::optional<double> r2,
                   std::shared_ptr<const Samples> samples)
    : name_(std::move(name)), r1_(r1), r2_(r2), samples_(std::move(samples)) {}

bool TestPair::analytic() const noexcept { return ev_ != nullptr; }
const PairEvaluators* TestPair::evaluators() const noexcept { return ev_.get(); }

ScalarField TestPair::r(const Grid& g, double t) const {
  if (ev_) return ScalarField::sample(g, [&](const Point& x) { return ev_->r(t, x); });
  const auto& f = samples_->r[samples_->locate(t)];
  require_same_grid(g, f.grid(), "TestPair::r");
  return f;
}

VectorField TestPair::v(const Grid& g, double t) const {
  if (ev_) return VectorField::sample(g, [&](const Point& x) { return ev_->v(t, x); });
  const auto& f = samples_->v[samples_->locate(t)];
  require_same_grid(g, f.grid(), "TestPair::v");
  return f;
}

ScalarField TestPair::dt_r(const Grid& g, double t) const {
  if (ev_) return ScalarField::sample(g, [&](const Point& x) { return ev_->dt_r(t, x); });
  ScalarField out(g);
  for (const auto& [k, w] : samples_->stencil(samples_->locate(t))) {
    ScalarField term = samples_->r[k];
    term *= w;
    out += term;
  }
  return out;
}

VectorField TestPair::dt_v(const Grid& g, double t) const {
  if (ev_) return VectorField::sample(g, [&](const Point& x) { return ev_->dt_v(t, x); });
  VectorField out(g);
  for (const auto& [k, w] : samples_->stencil(samples_->locate(t))) out += w * samples_->v[k];
  return out;
}

void TestPair::validate(const Grid& g, double t, const ModelParams& p) const {
  if (!(r1_ > 0.0)) throw ArgumentError("TestPair '" + name_ + "': lower bound r1 must be positive");
  const ScalarField rf = r(g, t);
  if (rf.min() < r1_)
    throw ArgumentError("TestPair '" + name_ + "': r falls below its lower bound r1");
  if (p.gamma > 2.0) {
    if (!r2_) throw ArgumentError("TestPair '" + name_ + "': gamma > 2 requires an upper bound r2");
    if (rf.max() > *r2_)
      throw ArgumentError("TestPair '" + name_ + "': r exceeds its upper bound r2");
  }
}

}  // namespace nslab
