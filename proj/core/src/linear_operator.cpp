#include "pflab/linear_operator.hpp"

#include "pflab/error.hpp"

namespace pflab {

void csr_multiply(const SparseMatrix& a, const Vector& x, Vector& y) {
  if (x.size() != a.cols()) throw UsageError("csr_multiply: dimension mismatch");
  y.resize(a.rows());
  const int* outer = a.outerIndexPtr();
  const int* inner = a.innerIndexPtr();
  const double* val = a.valuePtr();
  const int* nnz = a.innerNonZeroPtr();
  const Eigen::Index rows = a.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index r = 0; r < rows; ++r) {
    const int begin = outer[r];
    const int end = nnz ? begin + nnz[r] : outer[r + 1];
    double s = 0.0;
    for (int k = begin; k < end; ++k) s += val[k] * x[inner[k]];
    y[r] = s;
  }
}

SparseOperator::SparseOperator(SparseMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw UsageError("SparseOperator requires a square matrix");
  m_.makeCompressed();
}

namespace {

template <typename Cmp>
bool compare_with_transpose(const SparseMatrix& a, Cmp cmp) {
  if (a.rows() != a.cols()) return false;
  const SparseMatrix t = a.transpose();
  if (t.nonZeros() != a.nonZeros()) return false;
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    SparseMatrix::InnerIterator ia(a, r);
    SparseMatrix::InnerIterator it(t, r);
    for (; ia && it; ++ia, ++it) {
      if (ia.col() != it.col() || !cmp(ia.value(), it.value())) return false;
    }
    if (ia || it) return false;
  }
  return true;
}

}  // namespace

bool is_exactly_symmetric(const SparseMatrix& a) {
  return compare_with_transpose(a, [](double x, double y) { return x == y; });
}

bool is_exactly_antisymmetric(const SparseMatrix& a) {
  return compare_with_transpose(a, [](double x, double y) { return x == -y; });
}

}  // namespace pflab
