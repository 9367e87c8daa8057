#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "pflab/eigensolver.hpp"
#include "pflab/fock_basis.hpp"
#include "pflab/linear_operator.hpp"
#include "pflab/matter.hpp"
#include "pflab/photon_bath.hpp"

namespace pflab {

enum class Gauge { length, velocity };
enum class Strategy { exact, m_dse, nrqed_low, nrqed_ave };

std::string_view to_string(Gauge g);
std::string_view to_string(Strategy s);
/// Throws ConfigError on unknown tags.
Strategy parse_strategy(std::string_view tag);
Gauge parse_gauge(std::string_view tag);

enum class Storage { automatic, materialized, matrix_free };

struct AssemblyOptions {
  /// Largest composite dimension accepted; larger problems raise CapacityError.
  std::uint64_t max_dimension = 50'000'000;
  /// Automatic storage materializes CSR up to this many stored entries.
  std::size_t materialize_nnz_limit = 10'000'000;
  Storage storage = Storage::automatic;
};

/// photon (x) matter factor of the composite operator.
struct KronTerm {
  enum class MatterKind { identity, diagonal, sparse };
  SparseMatrix photon;
  MatterKind kind = MatterKind::identity;
  Vector diagonal;
  SparseMatrix matter;
};

/// Composite light-matter Hamiltonian. Basis index = photon_index * matter_dim + matter_index.
///
/// Stored as a sum of Kronecker terms. Small operators are also materialized as
/// CSR; both paths give the same product.
class CoupledOperator final : public SymmetricOperator {
 public:
  CoupledOperator(Gauge gauge, Strategy strategy, std::shared_ptr<const MatterOperator> matter,
                  PhotonBath bath, FockTruncation truncation, std::shared_ptr<const FockBasis> basis,
                  std::vector<KronTerm> terms, const AssemblyOptions& options = {});

  std::size_t dimension() const override { return photon_dimension() * matter_dimension(); }
  void apply(const Vector& x, Vector& y) const override;
  /// Kronecker-term product, regardless of the stored CSR.
  void apply_matrix_free(const Vector& x, Vector& y) const;

  Gauge gauge() const noexcept { return gauge_; }
  Strategy strategy() const noexcept { return strategy_; }
  const MatterOperator& matter() const noexcept { return *matter_; }
  std::shared_ptr<const MatterOperator> matter_ptr() const noexcept { return matter_; }
  /// Modes carried by the photon basis (the reduced bath for nrqed_low/ave; empty for m_dse).
  const PhotonBath& bath() const noexcept { return bath_; }
  const FockTruncation& truncation() const noexcept { return truncation_; }
  const FockBasis& basis() const noexcept { return *basis_; }
  std::size_t photon_dimension() const noexcept { return basis_->size(); }
  std::size_t matter_dimension() const noexcept { return matter_->dimension(); }
  const std::vector<KronTerm>& terms() const noexcept { return terms_; }
  double zero_point_energy() const { return bath_.zero_point_energy(); }

  std::size_t index(std::size_t photon_state, std::size_t matter_index) const noexcept {
    return photon_state * matter_dimension() + matter_index;
  }
  std::pair<std::size_t, std::size_t> split(std::size_t composite) const noexcept {
    return {composite / matter_dimension(), composite % matter_dimension()};
  }

  bool materialized() const noexcept { return static_cast<bool>(csr_); }
  /// CSR form (built on demand when not stored).
  SparseMatrix to_sparse() const;
  /// Stored entries of the CSR form, counting structural zeros.
  std::size_t nnz() const;
  /// Each Kronecker term is (symmetric x symmetric) or (antisymmetric x antisymmetric), bit for bit.
  bool structurally_symmetric() const;

 private:
  SparseMatrix build_sparse() const;

  Gauge gauge_;
  Strategy strategy_;
  std::shared_ptr<const MatterOperator> matter_;
  PhotonBath bath_;
  FockTruncation truncation_;
  std::shared_ptr<const FockBasis> basis_;
  std::vector<KronTerm> terms_;
  std::shared_ptr<const SparseMatrix> csr_;
};

/// Composite dimension for a bath and truncation, saturating; no enumeration.
std::uint64_t coupled_dimension(std::size_t matter_dimension, std::size_t n_modes,
                                const FockTruncation& trunc);

/// H_M + sum_a omega_a (n_a + 1/2) - sum_a sqrt(omega_a / 2) (a + a^dag) (lambda_a . mu)
///     + 1/2 sum_a (lambda_a . mu)^2.
CoupledOperator assemble_length_gauge(std::shared_ptr<const MatterOperator> matter,
                                      const PhotonBath& bath, const FockTruncation& trunc,
                                      const AssemblyOptions& options = {},
                                      Strategy tag = Strategy::exact);

/// Minimal coupling with A = sum_a lambda_a q_a, written in the photon frame rotated by
/// exp(i pi n / 2): q -> -p / omega. The paramagnetic term becomes a product of two real
/// antisymmetric factors and the diamagnetic A^2 term keeps all cross-mode products.
CoupledOperator assemble_velocity_gauge(std::shared_ptr<const MatterOperator> matter,
                                        const PhotonBath& bath, const FockTruncation& trunc,
                                        const AssemblyOptions& options = {},
                                        Strategy tag = Strategy::exact);

struct MeanFieldOptions {
  double mixing = 0.5;
  double tol = 1e-10;
  int max_iter = 200;
};

struct MeanFieldState {
  std::vector<double> mean_dipole;
  int iteration_count = 0;
  double residual = 0.0;
  std::vector<double> history;
};

struct MeanFieldResult {
  CoupledOperator op;
  MeanFieldState state;
  GroundState ground;
};

/// Matter plus dipole self-energy about a self-consistent mean dipole:
/// H = H_M + 1/2 sum_a (lambda_a . <mu> - lambda_a . mu)^2, no photon space.
MeanFieldResult assemble_m_dse(std::shared_ptr<const MatterOperator> matter, const PhotonBath& bath,
                               const MeanFieldOptions& mf = {}, const SolverConfig& solver = {},
                               const AssemblyOptions& options = {});

/// m_dse on a fixed mean dipole (one step of the self-consistency loop).
CoupledOperator assemble_dse_at(std::shared_ptr<const MatterOperator> matter, const PhotonBath& bath,
                                std::span<const double> mean_dipole,
                                const AssemblyOptions& options = {});

/// The photon modes a strategy keeps: exact = all, nrqed_low = lowest per polarization,
/// nrqed_ave = averaged per polarization, m_dse = all (mean field only).
PhotonBath strategy_bath(const PhotonBath& bath, Strategy strategy);

struct StrategyOptions {
  Gauge gauge = Gauge::length;
  AssemblyOptions assembly;
  MeanFieldOptions mean_field;
  SolverConfig solver;
};

/// Dispatch on strategy. For m_dse the self-consistent operator is returned.
CoupledOperator assemble_strategy(std::shared_ptr<const MatterOperator> matter,
                                  const PhotonBath& bath, Strategy strategy,
                                  const FockTruncation& trunc, const StrategyOptions& options = {});

}  // namespace pflab
