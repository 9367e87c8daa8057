#include "pflab/grid.hpp"

#include <array>
#include <cmath>
#include <string>

#include "pflab/error.hpp"
#include "pflab/units.hpp"

namespace pflab {

namespace units {
double gaas_coupling_to_hartree(double lambda) {
  return lambda * std::sqrt(gaas_hartree_in_hartree) / gaas_bohr_in_bohr;
}
}  // namespace units

namespace {

constexpr std::array<double, 2> kLap2{-2.0, 1.0};
constexpr std::array<double, 3> kLap4{-5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};
constexpr std::array<double, 4> kLap6{-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
constexpr std::array<double, 5> kLap8{-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0,
                                      -1.0 / 560.0};

constexpr std::array<double, 1> kDer2{1.0 / 2.0};
constexpr std::array<double, 2> kDer4{2.0 / 3.0, -1.0 / 12.0};
constexpr std::array<double, 3> kDer6{3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
constexpr std::array<double, 4> kDer8{4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};

void check_order(int order) {
  if (order != 2 && order != 4 && order != 6 && order != 8) {
    throw ConfigError("stencil order must be one of 2, 4, 6, 8 (got " + std::to_string(order) +
                      ")");
  }
}

}  // namespace

Grid1D::Grid1D(std::size_t n_points, double spacing) : n_points_(n_points), spacing_(spacing) {
  if (n_points < kMinGridPoints) {
    throw ConfigError("grid needs at least " + std::to_string(kMinGridPoints) +
                      " points for the 8th-order stencil (got " + std::to_string(n_points) + ")");
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw DomainError("grid spacing must be positive and finite");
  }
}

std::vector<double> Grid1D::coordinates() const {
  std::vector<double> x(n_points_);
  for (std::size_t i = 0; i < n_points_; ++i) x[i] = coordinate(i);
  return x;
}

std::span<const double> laplacian_weights(int order) {
  check_order(order);
  switch (order) {
    case 2: return kLap2;
    case 4: return kLap4;
    case 6: return kLap6;
    default: return kLap8;
  }
}

std::span<const double> first_derivative_weights(int order) {
  check_order(order);
  switch (order) {
    case 2: return kDer2;
    case 4: return kDer4;
    case 6: return kDer6;
    default: return kDer8;
  }
}

SparseMatrix laplacian(const Grid1D& grid, int order) {
  const auto w = laplacian_weights(order);
  const int n = static_cast<int>(grid.size());
  const int half = static_cast<int>(w.size()) - 1;
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());

  SparseMatrix m(n, n);
  m.reserve(Eigen::VectorXi::Constant(n, 2 * half + 1));
  for (int i = 0; i < n; ++i) {
    for (int k = -half; k <= half; ++k) {
      const int j = i + k;
      if (j < 0 || j >= n) continue;
      m.insert(i, j) = w[static_cast<std::size_t>(std::abs(k))] * inv_h2;
    }
  }
  m.makeCompressed();
  return m;
}

SparseMatrix first_derivative(const Grid1D& grid, int order) {
  const auto w = first_derivative_weights(order);
  const int n = static_cast<int>(grid.size());
  const int half = static_cast<int>(w.size());
  const double inv_h = 1.0 / grid.spacing();

  SparseMatrix m(n, n);
  m.reserve(Eigen::VectorXi::Constant(n, 2 * half));
  for (int i = 0; i < n; ++i) {
    for (int k = -half; k <= half; ++k) {
      const int j = i + k;
      if (k == 0 || j < 0 || j >= n) continue;
      const double c = w[static_cast<std::size_t>(std::abs(k) - 1)] * inv_h;
      m.insert(i, j) = k > 0 ? c : -c;
    }
  }
  m.makeCompressed();
  return m;
}

SparseMatrix identity(std::size_t n) {
  SparseMatrix m(static_cast<int>(n), static_cast<int>(n));
  m.setIdentity();
  return m;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  SparseMatrix out(rows, cols);
  auto row_nnz = [](const SparseMatrix& m, Eigen::Index r) {
    int c = 0;
    for (SparseMatrix::InnerIterator e(m, r); e; ++e) ++c;
    return c;
  };
  Eigen::VectorXi per_row(rows);
  for (Eigen::Index ia = 0; ia < a.rows(); ++ia) {
    const int nnz_a = row_nnz(a, ia);
    for (Eigen::Index ib = 0; ib < b.rows(); ++ib) {
      per_row[ia * b.rows() + ib] = nnz_a * row_nnz(b, ib);
    }
  }
  out.reserve(per_row);
  for (Eigen::Index ia = 0; ia < a.rows(); ++ia) {
    for (Eigen::Index ib = 0; ib < b.rows(); ++ib) {
      const Eigen::Index row = ia * b.rows() + ib;
      for (SparseMatrix::InnerIterator ea(a, ia); ea; ++ea) {
        for (SparseMatrix::InnerIterator eb(b, ib); eb; ++eb) {
          out.insert(row, ea.col() * b.cols() + eb.col()) = ea.value() * eb.value();
        }
      }
    }
  }
  out.makeCompressed();
  return out;
}

}  // namespace pflab
