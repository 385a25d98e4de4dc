#include "nslab/grid.hpp"

#include <cmath>
#include <string>

#include "nslab/errors.hpp"

namespace nslab {

Grid::Grid(int dim, int n) : dim_(dim), n_(n) {
  if (dim < 1 || dim > 3) throw ArgumentError("Grid: dimension must be 1, 2 or 3");
  if (n < 2) throw ArgumentError("Grid: need at least 2 points per axis");
  h_ = 2.0 * std::numbers::pi / n;
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(n);
  cell_volume_ = std::pow(h_, dim);
  std::size_t s = 1;
  for (int a = dim - 1; a >= 0; --a) {
    strides_[a] = s;
    s *= static_cast<std::size_t>(n);
  }
}

std::size_t Grid::index(const std::array<int, 3>& ijk) const noexcept {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) flat += static_cast<std::size_t>(ijk[a]) * strides_[a];
  return flat;
}

std::array<int, 3> Grid::multi_index(std::size_t flat) const noexcept {
  std::array<int, 3> ijk{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    ijk[a] = static_cast<int>((flat / strides_[a]) % static_cast<std::size_t>(n_));
  }
  return ijk;
}

std::size_t Grid::shifted(std::size_t flat, int axis, int offset) const noexcept {
  const int k = static_cast<int>((flat / strides_[axis]) % static_cast<std::size_t>(n_));
  int kk = (k + offset) % n_;
  if (kk < 0) kk += n_;
  return flat + (static_cast<std::size_t>(kk) - static_cast<std::size_t>(k)) * strides_[axis];
}

Point Grid::coordinate(std::size_t flat) const noexcept {
  Point x{0.0, 0.0, 0.0};
  const auto ijk = multi_index(flat);
  for (int a = 0; a < dim_; ++a) x[a] = axis_coordinate(ijk[a]);
  return x;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) throw ArgumentError(std::string(where) + ": grid mismatch");
}

}  // namespace nslab
