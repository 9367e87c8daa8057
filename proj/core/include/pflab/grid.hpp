#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

namespace pflab {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Vector = Eigen::VectorXd;

inline constexpr int kDefaultStencilOrder = 8;
/// An 8th-order central stencil spans 9 points.
inline constexpr std::size_t kMinGridPoints = 9;

/// Uniform grid symmetric about zero: x_i = (i - (n-1)/2) * spacing.
class Grid1D {
 public:
  Grid1D(std::size_t n_points, double spacing);

  std::size_t size() const noexcept { return n_points_; }
  double spacing() const noexcept { return spacing_; }
  double coordinate(std::size_t i) const noexcept {
    return (static_cast<double>(i) - 0.5 * static_cast<double>(n_points_ - 1)) * spacing_;
  }
  std::vector<double> coordinates() const;
  /// Half-width of the box measured to the outermost node.
  double half_extent() const noexcept { return coordinate(n_points_ - 1); }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  std::size_t n_points_;
  double spacing_;
};

/// Tensor-product grid; flat index is ix * ny + iy.
struct Grid2D {
  Grid1D x;
  Grid1D y;

  std::size_t size() const noexcept { return x.size() * y.size(); }
  double cell_area() const noexcept { return x.spacing() * y.spacing(); }
  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

/// Central second-derivative weights c_0..c_{order/2} (unit spacing).
std::span<const double> laplacian_weights(int order);
/// Central first-derivative weights d_1..d_{order/2} (unit spacing).
std::span<const double> first_derivative_weights(int order);

/// d^2/dx^2 with zero (Dirichlet) values outside the box. Exactly symmetric.
SparseMatrix laplacian(const Grid1D& grid, int order = kDefaultStencilOrder);
/// d/dx with Dirichlet closure. Exactly antisymmetric.
SparseMatrix first_derivative(const Grid1D& grid, int order = kDefaultStencilOrder);

SparseMatrix identity(std::size_t n);
/// Kronecker product A (x) B, row-major flat index i_a * n_b + i_b.
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace pflab
