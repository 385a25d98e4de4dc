#ifndef NSLAB_GRID_HPP_
#define NSLAB_GRID_HPP_

#include <array>
#include <cstddef>
#include <numbers>

namespace nslab {

using Point = std::array<double, 3>;

// Uniform periodic lattice on the torus (-pi, pi)^dim with n nodes per axis.
// Node k on an axis sits at x = -pi + k h, h = 2 pi / n.
class Grid {
 public:
  Grid() = default;
  Grid(int dim, int n);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  std::size_t size() const noexcept { return size_; }
  double length() const noexcept { return 2.0 * std::numbers::pi; }
  double cell_volume() const noexcept { return cell_volume_; }
  double volume() const noexcept { return cell_volume_ * static_cast<double>(size_); }

  // Row-major flat index; the last axis varies fastest.
  std::size_t index(const std::array<int, 3>& ijk) const noexcept;
  std::array<int, 3> multi_index(std::size_t flat) const noexcept;
  // Flat index of the node displaced by `offset` with periodic wrap.
  std::size_t shifted(std::size_t flat, int axis, int offset) const noexcept;
  Point coordinate(std::size_t flat) const noexcept;
  double axis_coordinate(int k) const noexcept { return -std::numbers::pi + h_ * k; }
  // Offset between consecutive nodes along `axis` in flat storage.
  std::size_t stride(int axis) const noexcept { return strides_[axis]; }

  bool operator==(const Grid& other) const noexcept {
    return dim_ == other.dim_ && n_ == other.n_;
  }

 private:
  int dim_ = 1;
  int n_ = 1;
  double h_ = 2.0 * std::numbers::pi;
  double cell_volume_ = 2.0 * std::numbers::pi;
  std::size_t size_ = 1;
  std::array<std::size_t, 3> strides_{1, 1, 1};
};

// Throws ArgumentError when the grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace nslab

#endif  // NSLAB_GRID_HPP_
