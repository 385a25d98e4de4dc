#ifndef NSLAB_FIELD_HPP_
#define NSLAB_FIELD_HPP_

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "nslab/grid.hpp"

namespace nslab {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// Node samples of a scalar function on a periodic grid.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  static ScalarField sample(const Grid& grid, const std::function<double(const Point&)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  double min() const;
  double max() const;
  bool all_finite() const noexcept;

  ScalarField map(const std::function<double(double)>& f) const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(const ScalarField& o);
  ScalarField& operator*=(double s) noexcept;

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
ScalarField operator/(const ScalarField& a, const ScalarField& b);

// Vector field with grid.dim() components.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& grid, double fill = 0.0);
  explicit VectorField(std::vector<ScalarField> components);

  static VectorField sample(const Grid& grid, const std::function<Vec3(const Point&)>& f);

  const Grid& grid() const noexcept { return grid_; }
  int components() const noexcept { return static_cast<int>(c_.size()); }
  ScalarField& operator[](int i) noexcept { return c_[static_cast<std::size_t>(i)]; }
  const ScalarField& operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
  Vec3 at(std::size_t node) const noexcept;

  bool all_finite() const noexcept;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s) noexcept;

 private:
  Grid grid_;
  std::vector<ScalarField> c_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);
// Nodewise scaling of each component.
VectorField operator*(const ScalarField& s, const VectorField& v);

ScalarField dot(const VectorField& a, const VectorField& b);
// Pointwise Euclidean magnitude.
ScalarField magnitude(const VectorField& a);

// d x d tensor field; entry (i,j) is stored at i*d + j.
class TensorField {
 public:
  TensorField() = default;
  explicit TensorField(const Grid& grid, double fill = 0.0);

  const Grid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return grid_.dim(); }
  ScalarField& operator()(int i, int j) noexcept {
    return c_[static_cast<std::size_t>(i * grid_.dim() + j)];
  }
  const ScalarField& operator()(int i, int j) const noexcept {
    return c_[static_cast<std::size_t>(i * grid_.dim() + j)];
  }

  TensorField transpose() const;
  ScalarField trace() const;
  bool all_finite() const noexcept;

  TensorField& operator+=(const TensorField& o);
  TensorField& operator-=(const TensorField& o);
  TensorField& operator*=(double s) noexcept;

 private:
  Grid grid_;
  std::vector<ScalarField> c_;
};

TensorField operator+(TensorField a, const TensorField& b);
TensorField operator-(TensorField a, const TensorField& b);
TensorField operator*(double s, TensorField a);

// Nodewise Frobenius contraction A:B.
ScalarField contract(const TensorField& a, const TensorField& b);
// Nodewise Frobenius norm.
ScalarField magnitude(const TensorField& a);
// (T w)_i = sum_j T_ij w_j
VectorField apply(const TensorField& t, const VectorField& w);
// (a (x) b)_ij = a_i b_j
TensorField outer(const VectorField& a, const VectorField& b);

}  // namespace nslab

#endif  // NSLAB_FIELD_HPP_
