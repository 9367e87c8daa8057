#include "pflab/coupled_operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "pflab/error.hpp"

namespace pflab {

std::string_view to_string(Gauge g) { return g == Gauge::velocity ? "velocity" : "length"; }

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::exact:
      return "exact";
    case Strategy::m_dse:
      return "m_dse";
    case Strategy::nrqed_low:
      return "nrqed_low";
    case Strategy::nrqed_ave:
      return "nrqed_ave";
  }
  return "exact";
}

Strategy parse_strategy(std::string_view tag) {
  if (tag == "exact") return Strategy::exact;
  if (tag == "m_dse") return Strategy::m_dse;
  if (tag == "nrqed_low") return Strategy::nrqed_low;
  if (tag == "nrqed_ave") return Strategy::nrqed_ave;
  throw ConfigError("unknown strategy '" + std::string(tag) +
                    "' (expected exact, m_dse, nrqed_low or nrqed_ave)");
}

Gauge parse_gauge(std::string_view tag) {
  if (tag == "length") return Gauge::length;
  if (tag == "velocity") return Gauge::velocity;
  throw ConfigError("unknown gauge '" + std::string(tag) + "' (expected length or velocity)");
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double, int>>;

SparseMatrix from_triplets(std::size_t n, const Triplets& t) {
  SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

SparseMatrix diagonal_matrix(const Vector& d) {
  Triplets t;
  t.reserve(static_cast<std::size_t>(d.size()));
  for (Eigen::Index i = 0; i < d.size(); ++i) t.emplace_back(i, i, d[i]);
  return from_triplets(static_cast<std::size_t>(d.size()), t);
}

bool term_symmetric(const KronTerm& t) {
  const bool photon_sym = is_exactly_symmetric(t.photon);
  switch (t.kind) {
    case KronTerm::MatterKind::identity:
    case KronTerm::MatterKind::diagonal:
      return photon_sym;
    case KronTerm::MatterKind::sparse:
      if (photon_sym) return is_exactly_symmetric(t.matter);
      return is_exactly_antisymmetric(t.photon) && is_exactly_antisymmetric(t.matter);
  }
  return false;
}

void check_capacity(std::size_t nm, std::size_t n_modes, const FockTruncation& trunc,
                    const AssemblyOptions& options) {
  const std::uint64_t dim = coupled_dimension(nm, n_modes, trunc);
  if (dim > options.max_dimension) {
    throw CapacityError("coupled dimension " + std::to_string(dim) + " (" + std::to_string(nm) +
                            " matter x " + std::to_string(fock_dimension(trunc, n_modes)) +
                            " photon states) exceeds the budget of " +
                            std::to_string(options.max_dimension),
                        dim);
  }
}

void check_bath(const MatterOperator& matter, const PhotonBath& bath) {
  if (bath.empty()) throw ConfigError("photon bath is empty");
  if (bath.spatial_dimension() != matter.spatial_dimension()) {
    throw ConfigError("coupling vectors have " + std::to_string(bath.spatial_dimension()) +
                      " components but the matter system has " +
                      std::to_string(matter.spatial_dimension()) + " dipole directions");
  }
}

/// sum_a omega_a (n_a + 1/2) on the basis.
Vector photon_energies(const FockBasis& basis, const PhotonBath& bath) {
  Vector e(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t s = 0; s < basis.size(); ++s) {
    double v = 0.0;
    for (std::size_t a = 0; a < bath.size(); ++a) {
      v += bath[a].omega * (basis.occupation(s, a) + 0.5);
    }
    e[static_cast<Eigen::Index>(s)] = v;
  }
  return e;
}

}  // namespace

std::uint64_t coupled_dimension(std::size_t matter_dimension, std::size_t n_modes,
                                const FockTruncation& trunc) {
  const std::uint64_t nb = fock_dimension(trunc, n_modes);
  const auto nm = static_cast<std::uint64_t>(matter_dimension);
  if (nb == kSaturated || (nm != 0 && nb > kSaturated / nm)) return kSaturated;
  return nb * nm;
}

CoupledOperator::CoupledOperator(Gauge gauge, Strategy strategy,
                                 std::shared_ptr<const MatterOperator> matter, PhotonBath bath,
                                 FockTruncation truncation, std::shared_ptr<const FockBasis> basis,
                                 std::vector<KronTerm> terms, const AssemblyOptions& options)
    : gauge_(gauge),
      strategy_(strategy),
      matter_(std::move(matter)),
      bath_(std::move(bath)),
      truncation_(truncation),
      basis_(std::move(basis)),
      terms_(std::move(terms)) {
  const auto nb = static_cast<Eigen::Index>(basis_->size());
  const auto nm = static_cast<Eigen::Index>(matter_->dimension());
  for (const auto& t : terms_) {
    if (t.photon.rows() != nb || t.photon.cols() != nb) throw Error("internal: photon factor size");
    if (t.kind == KronTerm::MatterKind::diagonal && t.diagonal.size() != nm) {
      throw Error("internal: matter diagonal size");
    }
    if (t.kind == KronTerm::MatterKind::sparse && (t.matter.rows() != nm || t.matter.cols() != nm)) {
      throw Error("internal: matter factor size");
    }
  }
  if (!structurally_symmetric()) throw Error("internal: assembled operator is not symmetric");

  std::size_t estimate = 0;
  for (const auto& t : terms_) {
    const auto m_nnz = t.kind == KronTerm::MatterKind::sparse ? static_cast<std::size_t>(t.matter.nonZeros())
                                                              : static_cast<std::size_t>(nm);
    estimate += static_cast<std::size_t>(t.photon.nonZeros()) * m_nnz;
  }
  const bool materialize = options.storage == Storage::materialized ||
                           (options.storage == Storage::automatic &&
                            estimate <= options.materialize_nnz_limit);
  if (materialize) csr_ = std::make_shared<const SparseMatrix>(build_sparse());
}

bool CoupledOperator::structurally_symmetric() const {
  return std::all_of(terms_.begin(), terms_.end(), term_symmetric);
}

SparseMatrix CoupledOperator::build_sparse() const {
  const auto nm = matter_dimension();
  const SparseMatrix id = identity(nm);
  SparseMatrix total(static_cast<Eigen::Index>(dimension()), static_cast<Eigen::Index>(dimension()));
  for (const auto& t : terms_) {
    switch (t.kind) {
      case KronTerm::MatterKind::identity:
        total += kron(t.photon, id);
        break;
      case KronTerm::MatterKind::diagonal:
        total += kron(t.photon, diagonal_matrix(t.diagonal));
        break;
      case KronTerm::MatterKind::sparse:
        total += kron(t.photon, t.matter);
        break;
    }
  }
  total.makeCompressed();
  return total;
}

SparseMatrix CoupledOperator::to_sparse() const { return csr_ ? *csr_ : build_sparse(); }

std::size_t CoupledOperator::nnz() const {
  return static_cast<std::size_t>(csr_ ? csr_->nonZeros() : build_sparse().nonZeros());
}

void CoupledOperator::apply(const Vector& x, Vector& y) const {
  if (x.size() != static_cast<Eigen::Index>(dimension())) {
    throw UsageError("coupled operator: vector of size " + std::to_string(x.size()) +
                     ", expected " + std::to_string(dimension()));
  }
  if (csr_) {
    csr_multiply(*csr_, x, y);
    return;
  }
  apply_matrix_free(x, y);
}

void CoupledOperator::apply_matrix_free(const Vector& x, Vector& y) const {
  if (x.size() != static_cast<Eigen::Index>(dimension())) {
    throw UsageError("coupled operator: dimension mismatch");
  }
  const auto nm = static_cast<Eigen::Index>(matter_dimension());
  const auto nb = static_cast<Eigen::Index>(photon_dimension());
  y.setZero(x.size());
  // Each photon output block is owned by one thread; Y_i += M (sum_j B_ij X_j).
#pragma omp parallel
  {
    Vector acc(nm);
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < nb; ++i) {
      auto yi = y.segment(i * nm, nm);
      for (const auto& t : terms_) {
        acc.setZero();
        bool any = false;
        for (SparseMatrix::InnerIterator b(t.photon, i); b; ++b) {
          acc.noalias() += b.value() * x.segment(b.col() * nm, nm);
          any = true;
        }
        if (!any) continue;
        switch (t.kind) {
          case KronTerm::MatterKind::identity:
            yi += acc;
            break;
          case KronTerm::MatterKind::diagonal:
            yi += t.diagonal.cwiseProduct(acc);
            break;
          case KronTerm::MatterKind::sparse: {
            const SparseMatrix& m = t.matter;
            for (Eigen::Index r = 0; r < nm; ++r) {
              double s = 0.0;
              for (SparseMatrix::InnerIterator e(m, r); e; ++e) s += e.value() * acc[e.col()];
              yi[r] += s;
            }
            break;
          }
        }
      }
    }
  }
}

CoupledOperator assemble_length_gauge(std::shared_ptr<const MatterOperator> matter,
                                      const PhotonBath& bath, const FockTruncation& trunc,
                                      const AssemblyOptions& options, Strategy tag) {
  check_bath(*matter, bath);
  const std::size_t nm = matter->dimension();
  check_capacity(nm, bath.size(), trunc, options);
  auto basis = std::make_shared<const FockBasis>(bath.size(), trunc);
  const std::size_t nb = basis->size();

  // Modes with identical coupling vectors share one matter factor lambda . mu.
  std::map<std::vector<double>, std::vector<std::size_t>> groups;
  for (std::size_t a = 0; a < bath.size(); ++a) groups[bath[a].coupling].push_back(a);

  Vector dse = Vector::Zero(static_cast<Eigen::Index>(nm));
  std::vector<KronTerm> terms;
  for (const auto& [lambda, members] : groups) {
    const Vector d = matter->projected_dipole(lambda);
    dse += (0.5 * static_cast<double>(members.size())) * d.cwiseProduct(d);
    Triplets tr;
    for (std::size_t a : members) {
      const double c = -std::sqrt(0.5 * bath[a].omega);
      for (std::size_t s = 0; s < nb; ++s) {
        const auto up = basis->raised(s, a);
        if (up == FockBasis::npos) continue;
        const double v = c * std::sqrt(basis->occupation(s, a) + 1.0);
        tr.emplace_back(static_cast<int>(up), static_cast<int>(s), v);
        tr.emplace_back(static_cast<int>(s), static_cast<int>(up), v);
      }
    }
    terms.push_back(KronTerm{from_triplets(nb, tr), KronTerm::MatterKind::diagonal, d, {}});
  }

  SparseMatrix hm = matter->hamiltonian();
  for (Eigen::Index i = 0; i < hm.rows(); ++i) hm.coeffRef(i, i) += dse[i];
  hm.makeCompressed();

  terms.insert(terms.begin(), KronTerm{diagonal_matrix(photon_energies(*basis, bath)),
                                       KronTerm::MatterKind::identity, {}, {}});
  terms.insert(terms.begin(), KronTerm{identity(nb), KronTerm::MatterKind::sparse, {}, std::move(hm)});
  return CoupledOperator(Gauge::length, tag, std::move(matter), bath, trunc, std::move(basis),
                         std::move(terms), options);
}

CoupledOperator assemble_velocity_gauge(std::shared_ptr<const MatterOperator> matter,
                                        const PhotonBath& bath, const FockTruncation& trunc,
                                        const AssemblyOptions& options, Strategy tag) {
  check_bath(*matter, bath);
  const std::size_t nm = matter->dimension();
  check_capacity(nm, bath.size(), trunc, options);
  auto basis = std::make_shared<const FockBasis>(bath.size(), trunc);
  const std::size_t nb = basis->size();
  const std::size_t n_modes = bath.size();
  const std::size_t dims = matter->spatial_dimension();
  const double inv_m = 1.0 / matter->mass();

  // c_{a,d} = lambda_{a,d} / omega_a; G_ab = c_a . c_b.
  std::vector<std::vector<double>> c(n_modes, std::vector<double>(dims));
  for (std::size_t a = 0; a < n_modes; ++a) {
    for (std::size_t d = 0; d < dims; ++d) c[a][d] = bath[a].coupling[d] / bath[a].omega;
  }

  // Diamagnetic part: -(sum_a c_a P_a)^2 with P = sqrt(omega/2) (a^dag - a), expanded in the
  // untruncated Fock space and then projected, so nested cutoffs stay variational.
  Triplets dia;
  std::vector<int> occ(n_modes);
  const double prefactor = 0.5 * matter->n_electrons() * inv_m;
  for (std::size_t s = 0; s < nb; ++s) {
    for (std::size_t a = 0; a < n_modes; ++a) {
      for (std::size_t b = 0; b < n_modes; ++b) {
        double g = 0.0;
        for (std::size_t d = 0; d < dims; ++d) g += c[a][d] * c[b][d];
        if (g == 0.0) continue;
        const double scale = -prefactor * g * 0.5 * std::sqrt(bath[a].omega * bath[b].omega);
        // (a^dag_a - a_a)(a^dag_b - a_b) = sum over signs of the four ladder products.
        for (int sa : {+1, -1}) {
          for (int sb : {+1, -1}) {
            for (std::size_t k = 0; k < n_modes; ++k) occ[k] = basis->occupation(s, k);
            double coef = (sa < 0 ? -1.0 : 1.0) * (sb < 0 ? -1.0 : 1.0);
            // Right factor acts first.
            if (sb > 0) {
              coef *= std::sqrt(occ[b] + 1.0);
              ++occ[b];
            } else {
              if (occ[b] == 0) continue;
              coef *= std::sqrt(static_cast<double>(occ[b]));
              --occ[b];
            }
            if (sa > 0) {
              coef *= std::sqrt(occ[a] + 1.0);
              ++occ[a];
            } else {
              if (occ[a] == 0) continue;
              coef *= std::sqrt(static_cast<double>(occ[a]));
              --occ[a];
            }
            const auto target = basis->index_of(occ);
            if (target == FockBasis::npos) continue;
            dia.emplace_back(static_cast<int>(target), static_cast<int>(s), scale * coef);
          }
        }
      }
    }
  }
  SparseMatrix dia_m = from_triplets(nb, dia);
  SparseMatrix dia_t = dia_m.transpose();
  SparseMatrix photon_only = SparseMatrix(0.5 * (dia_m + dia_t)) +
                             diagonal_matrix(photon_energies(*basis, bath));
  photon_only.makeCompressed();

  std::vector<KronTerm> terms;
  terms.push_back(KronTerm{identity(nb), KronTerm::MatterKind::sparse, {}, matter->hamiltonian()});
  terms.push_back(KronTerm{std::move(photon_only), KronTerm::MatterKind::identity, {}, {}});

  // Paramagnetic part: (1/m) sum_d (sum_a c_{a,d} P_a) (x) D_d, both factors antisymmetric.
  const auto momentum = matter->momentum();
  for (std::size_t d = 0; d < dims; ++d) {
    Triplets tr;
    for (std::size_t a = 0; a < n_modes; ++a) {
      if (c[a][d] == 0.0) continue;
      const double k = inv_m * c[a][d] * std::sqrt(0.5 * bath[a].omega);
      for (std::size_t s = 0; s < nb; ++s) {
        const auto up = basis->raised(s, a);
        if (up == FockBasis::npos) continue;
        const double v = k * std::sqrt(basis->occupation(s, a) + 1.0);
        tr.emplace_back(static_cast<int>(up), static_cast<int>(s), v);
        tr.emplace_back(static_cast<int>(s), static_cast<int>(up), -v);
      }
    }
    if (tr.empty()) continue;
    terms.push_back(KronTerm{from_triplets(nb, tr), KronTerm::MatterKind::sparse, {}, momentum[d]});
  }
  return CoupledOperator(Gauge::velocity, tag, std::move(matter), bath, trunc, std::move(basis),
                         std::move(terms), options);
}

CoupledOperator assemble_dse_at(std::shared_ptr<const MatterOperator> matter, const PhotonBath& bath,
                                std::span<const double> mean_dipole,
                                const AssemblyOptions& options) {
  check_bath(*matter, bath);
  if (mean_dipole.size() != matter->spatial_dimension()) {
    throw ConfigError("mean dipole has the wrong number of components");
  }
  const auto nm = static_cast<Eigen::Index>(matter->dimension());
  Vector shift = Vector::Zero(nm);
  for (const auto& mode : bath.modes()) {
    double mean = 0.0;
    for (std::size_t d = 0; d < mean_dipole.size(); ++d) mean += mode.coupling[d] * mean_dipole[d];
    const Vector dev = Vector::Constant(nm, mean) - matter->projected_dipole(mode.coupling);
    shift += 0.5 * dev.cwiseProduct(dev);
  }
  SparseMatrix hm = matter->hamiltonian();
  for (Eigen::Index i = 0; i < nm; ++i) hm.coeffRef(i, i) += shift[i];
  hm.makeCompressed();
  const FockTruncation none{TruncationScheme::per_mode, 1};
  auto basis = std::make_shared<const FockBasis>(0, none);
  std::vector<KronTerm> terms;
  terms.push_back(KronTerm{identity(1), KronTerm::MatterKind::sparse, {}, std::move(hm)});
  return CoupledOperator(Gauge::length, Strategy::m_dse, std::move(matter), PhotonBath{}, none,
                         std::move(basis), std::move(terms), options);
}

MeanFieldResult assemble_m_dse(std::shared_ptr<const MatterOperator> matter, const PhotonBath& bath,
                               const MeanFieldOptions& mf, const SolverConfig& solver,
                               const AssemblyOptions& options) {
  if (!(mf.mixing > 0.0 && mf.mixing <= 1.0)) throw ConfigError("mean-field mixing must be in (0, 1]");
  if (!(mf.tol > 0.0)) throw ConfigError("mean-field tol must be > 0");
  if (mf.max_iter < 1) throw ConfigError("mean-field max_iter must be >= 1");
  check_bath(*matter, bath);
  const std::size_t dims = matter->spatial_dimension();
  std::vector<double> mean(dims, 0.0);
  MeanFieldState state;
  Vector guess;
  for (int it = 1; it <= mf.max_iter; ++it) {
    CoupledOperator op = assemble_dse_at(matter, bath, mean, options);
    GroundState gs = ground_state(op, solver, guess.size() ? &guess : nullptr);
    double residual = 0.0;
    std::vector<double> updated(dims);
    const Vector prob = gs.vector.cwiseAbs2();
    for (std::size_t d = 0; d < dims; ++d) {
      updated[d] = prob.dot(matter->dipole()[d]);
      residual = std::max(residual, std::abs(updated[d] - mean[d]));
    }
    state.history.push_back(residual);
    state.iteration_count = it;
    state.residual = residual;
    if (residual < mf.tol) {
      state.mean_dipole = mean;
      return MeanFieldResult{std::move(op), std::move(state), std::move(gs)};
    }
    for (std::size_t d = 0; d < dims; ++d) {
      mean[d] = (1.0 - mf.mixing) * mean[d] + mf.mixing * updated[d];
    }
    guess = std::move(gs.vector);
  }
  throw IterationError("mean-field iteration did not converge in " + std::to_string(mf.max_iter) +
                           " steps (last residual " + std::to_string(state.residual) + ")",
                       state.history);
}

PhotonBath strategy_bath(const PhotonBath& bath, Strategy strategy) {
  switch (strategy) {
    case Strategy::exact:
    case Strategy::m_dse:
      return bath;
    case Strategy::nrqed_low:
      return truncate_lowest(bath, 1);
    case Strategy::nrqed_ave:
      return average_bath(bath);
  }
  return bath;
}

CoupledOperator assemble_strategy(std::shared_ptr<const MatterOperator> matter,
                                  const PhotonBath& bath, Strategy strategy,
                                  const FockTruncation& trunc, const StrategyOptions& options) {
  if (strategy == Strategy::m_dse) {
    return assemble_m_dse(std::move(matter), bath, options.mean_field, options.solver,
                          options.assembly)
        .op;
  }
  const PhotonBath reduced = strategy_bath(bath, strategy);
  if (options.gauge == Gauge::velocity) {
    return assemble_velocity_gauge(std::move(matter), reduced, trunc, options.assembly, strategy);
  }
  return assemble_length_gauge(std::move(matter), reduced, trunc, options.assembly, strategy);
}

}  // namespace pflab
