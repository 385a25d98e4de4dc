#include "nslab/field.hpp"

#include <algorithm>
#include <cmath>

#include "nslab/errors.hpp"

namespace nslab {

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid.size()) throw ArgumentError("ScalarField: sample count mismatch");
}

ScalarField ScalarField::sample(const Grid& grid, const std::function<double(const Point&)>& f) {
  ScalarField out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = f(grid.coordinate(i));
  return out;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool ScalarField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

ScalarField ScalarField::map(const std::function<double(double)>& f) const {
  ScalarField out(grid_);
  for (std::size_t i = 0; i < size(); ++i) out[i] = f(values_[i]);
  return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField::operator+=");
  for (std::size_t i = 0; i < size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField::operator-=");
  for (std::size_t i = 0; i < size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField::operator*=");
  for (std::size_t i = 0; i < size(); ++i) values_[i] *= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) noexcept {
  for (auto& x : values_) x *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "ScalarField::operator/");
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] / b[i];
  return out;
}

VectorField::VectorField(const Grid& grid, double fill)
    : grid_(grid), c_(static_cast<std::size_t>(grid.dim()), ScalarField(grid, fill)) {}

VectorField::VectorField(std::vector<ScalarField> components) : c_(std::move(components)) {
  if (c_.empty()) throw ArgumentError("VectorField: no components");
  grid_ = c_.front().grid();
  if (static_cast<int>(c_.size()) != grid_.dim())
    throw ArgumentError("VectorField: component count must equal grid dimension");
  for (const auto& c : c_) require_same_grid(grid_, c.grid(), "VectorField");
}

VectorField VectorField::sample(const Grid& grid, const std::function<Vec3(const Point&)>& f) {
  VectorField out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3 w = f(grid.coordinate(i));
    for (int c = 0; c < grid.dim(); ++c) out[c][i] = w[static_cast<std::size_t>(c)];
  }
  return out;
}

Vec3 VectorField::at(std::size_t node) const noexcept {
  Vec3 w{0.0, 0.0, 0.0};
  for (int c = 0; c < components(); ++c) w[static_cast<std::size_t>(c)] = c_[static_cast<std::size_t>(c)][node];
  return w;
}

bool VectorField::all_finite() const noexcept {
  return std::all_of(c_.begin(), c_.end(), [](const ScalarField& f) { return f.all_finite(); });
}

VectorField& VectorField::operator+=(const VectorField& o) {
  require_same_grid(grid_, o.grid_, "VectorField::operator+=");
  for (std::size_t c = 0; c < c_.size(); ++c) c_[c] += o.c_[c];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  require_same_grid(grid_, o.grid_, "VectorField::operator-=");
  for (std::size_t c = 0; c < c_.size(); ++c) c_[c] -= o.c_[c];
  return *this;
}

VectorField& VectorField::operator*=(double s) noexcept {
  for (auto& c : c_) c *= s;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

VectorField operator*(const ScalarField& s, const VectorField& v) {
  VectorField out = v;
  for (int c = 0; c < out.components(); ++c) out[c] *= s;
  return out;
}

ScalarField dot(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "dot");
  ScalarField out(a.grid());
  for (int c = 0; c < a.components(); ++c)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a[c][i] * b[c][i];
  return out;
}

ScalarField magnitude(const VectorField& a) {
  ScalarField out = dot(a, a);
  for (auto& x : out.values()) x = std::sqrt(x);
  return out;
}

TensorField::TensorField(const Grid& grid, double fill)
    : grid_(grid), c_(static_cast<std::size_t>(grid.dim() * grid.dim()), ScalarField(grid, fill)) {}

TensorField TensorField::transpose() const {
  TensorField out(grid_);
  const int d = dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = (*this)(j, i);
  return out;
}

ScalarField TensorField::trace() const {
  ScalarField out(grid_);
  for (int i = 0; i < dim(); ++i) out += (*this)(i, i);
  return out;
}

bool TensorField::all_finite() const noexcept {
  return std::all_of(c_.begin(), c_.end(), [](const ScalarField& f) { return f.all_finite(); });
}

TensorField& TensorField::operator+=(const TensorField& o) {
  require_same_grid(grid_, o.grid_, "TensorField::operator+=");
  for (std::size_t c = 0; c < c_.size(); ++c) c_[c] += o.c_[c];
  return *this;
}

TensorField& TensorField::operator-=(const TensorField& o) {
  require_same_grid(grid_, o.grid_, "TensorField::operator-=");
  for (std::size_t c = 0; c < c_.size(); ++c) c_[c] -= o.c_[c];
  return *this;
}

TensorField& TensorField::operator*=(double s) noexcept {
  for (auto& c : c_) c *= s;
  return *this;
}

TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
TensorField operator*(double s, TensorField a) { return a *= s; }

ScalarField contract(const TensorField& a, const TensorField& b) {
  require_same_grid(a.grid(), b.grid(), "contract");
  ScalarField out(a.grid());
  const int d = a.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const auto& x = a(i, j);
      const auto& y = b(i, j);
      for (std::size_t n = 0; n < out.size(); ++n) out[n] += x[n] * y[n];
    }
  return out;
}

ScalarField magnitude(const TensorField& a) {
  ScalarField out = contract(a, a);
  for (auto& x : out.values()) x = std::sqrt(x);
  return out;
}

VectorField apply(const TensorField& t, const VectorField& w) {
  require_same_grid(t.grid(), w.grid(), "apply");
  VectorField out(t.grid());
  const int d = t.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const auto& tij = t(i, j);
      const auto& wj = w[j];
      for (std::size_t n = 0; n < wj.size(); ++n) out[i][n] += tij[n] * wj[n];
    }
  return out;
}

TensorField outer(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "outer");
  TensorField out(a.grid());
  const int d = a.grid().dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = a[i] * b[j];
  return out;
}

}  // namespace nslab
