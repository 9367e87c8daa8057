#pragma once

#include <cstddef>

#include "pflab/grid.hpp"

namespace pflab {

/// Real symmetric operator known only through its action.
class SymmetricOperator {
 public:
  virtual ~SymmetricOperator() = default;
  virtual std::size_t dimension() const = 0;
  /// y = A x. y is resized by the callee.
  virtual void apply(const Vector& x, Vector& y) const = 0;
};

/// Row-parallel CSR matrix-vector product.
void csr_multiply(const SparseMatrix& a, const Vector& x, Vector& y);

class SparseOperator final : public SymmetricOperator {
 public:
  explicit SparseOperator(SparseMatrix m);
  std::size_t dimension() const override { return static_cast<std::size_t>(m_.rows()); }
  void apply(const Vector& x, Vector& y) const override { csr_multiply(m_, x, y); }
  const SparseMatrix& matrix() const noexcept { return m_; }

 private:
  SparseMatrix m_;
};

/// True when the stored pattern and values satisfy A == A^T bit for bit.
bool is_exactly_symmetric(const SparseMatrix& a);
bool is_exactly_antisymmetric(const SparseMatrix& a);

}  // namespace pflab
