#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pflab/grid.hpp"
#include "pflab/linear_operator.hpp"

namespace pflab {

enum class SolverMethod { lanczos, dense };
enum class Reorthogonalization { full, selective };

std::string_view to_string(SolverMethod m);
std::string_view to_string(Reorthogonalization r);

struct SolverConfig {
  SolverMethod method = SolverMethod::lanczos;
  /// Bound on the residual norm ||H v - E v||.
  double tol = 1e-10;
  /// Budget of operator applications.
  std::size_t max_iterations = 20000;
  std::size_t n_eigenpairs = 1;
  Reorthogonalization reorthogonalization = Reorthogonalization::full;
  std::uint64_t seed = 20240611;
  /// Krylov basis size between restarts.
  std::size_t krylov_dim = 64;
  /// The dense method refuses larger problems.
  std::size_t dense_limit = 4096;

  void validate() const;
  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct EigenPair {
  double energy = 0.0;
  /// Unit norm; largest-magnitude component positive.
  Vector vector;
  double residual = 0.0;
};

struct GroundState {
  double energy = 0.0;
  Vector vector;
  double residual = 0.0;
  std::size_t iterations = 0;
  SolverConfig config_echo;
};

/// Lowest eigenpair. `initial_guess` (if non-empty) replaces the random start vector.
GroundState ground_state(const SymmetricOperator& op, const SolverConfig& cfg,
                         const Vector* initial_guess = nullptr);

/// k lowest eigenpairs, ascending and mutually orthonormal.
std::vector<EigenPair> lowest_k(const SymmetricOperator& op, const SolverConfig& cfg, std::size_t k);

/// Dense matrix of the operator, built column by column from unit vectors.
Eigen::MatrixXd to_dense(const SymmetricOperator& op);

struct ConvergencePoint {
  int cutoff = 0;
  std::size_t dimension = 0;
  double energy = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergencePoint> points;
  /// |E(last) - E(second to last)|; zero for a single point.
  double increment = 0.0;
  /// Energies never rise by more than the solver tolerance along the sweep.
  bool monotone = true;
};

using OperatorFactory = std::function<std::unique_ptr<SymmetricOperator>(int cutoff)>;

ConvergenceTable convergence_sweep(const OperatorFactory& builder, std::span<const int> cutoffs,
                                   const SolverConfig& cfg);

/// Flip the sign so the largest-magnitude entry is positive.
void apply_sign_convention(Vector& v);

}  // namespace pflab
