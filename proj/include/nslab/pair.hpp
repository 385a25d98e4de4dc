#ifndef NSLAB_PAIR_HPP_
#define NSLAB_PAIR_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nslab/eos.hpp"
#include "nslab/field.hpp"

namespace nslab {

// Analytic comparison pair (r, v) with the derivatives the relative-entropy
// functionals need. grad_v, lap_v and grad_div_v are only used by the
// analytic residual route; the numerical route differentiates samples.
struct PairEvaluators {
  std::function<double(double, const Point&)> r;
  std::function<double(double, const Point&)> dt_r;
  std::function<Vec3(double, const Point&)> grad_r;
  std::function<Vec3(double, const Point&)> v;
  std::function<Vec3(double, const Point&)> dt_v;
  std::function<Mat3(double, const Point&)> grad_v;
  std::function<Vec3(double, const Point&)> lap_v;
  std::function<Vec3(double, const Point&)> grad_div_v;
};

// Smooth comparison pair. Either analytic (exact time derivatives) or built
// from time samples, in which case time derivatives are second-order
// finite differences across samples.
class TestPair {
 public:
  TestPair(std::string name, PairEvaluators ev, double r1, std::optional<double> r2 = std::nullopt);

  // Samples r_k, v_k at strictly increasing times; needs at least 3 samples.
  static TestPair from_samples(std::string name, std::vector<double> times,
                               std::vector<ScalarField> r, std::vector<VectorField> v, double r1,
                               std::optional<double> r2 = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  double r1() const noexcept { return r1_; }
  std::optional<double> r2() const noexcept { return r2_; }
  bool analytic() const noexcept;
  // Null for sampled pairs.
  const PairEvaluators* evaluators() const noexcept;

  ScalarField r(const Grid& g, double t) const;
  VectorField v(const Grid& g, double t) const;
  ScalarField dt_r(const Grid& g, double t) const;
  VectorField dt_v(const Grid& g, double t) const;

  // Throws ArgumentError when min r < r1, r1 <= 0, or (gamma > 2) r2 is
  // missing or exceeded.
  void validate(const Grid& g, double t, const ModelParams& p) const;

  struct Samples;

 private:
  TestPair(std::string name, double r1, std::optional<double> r2,
           std::shared_ptr<const Samples> samples);

  std::string name_;
  double r1_;
  std::optional<double> r2_;
  std::shared_ptr<const PairEvaluators> ev_;
  std::shared_ptr<const Samples> samples_;
};

}  // namespace nslab

#endif  // NSLAB_PAIR_HPP_
