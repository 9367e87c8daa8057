#include "pflab/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "pflab/error.hpp"

namespace pflab {

std::string_view to_string(SolverMethod m) { return m == SolverMethod::dense ? "dense" : "lanczos"; }

std::string_view to_string(Reorthogonalization r) {
  return r == Reorthogonalization::selective ? "selective" : "full";
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw ConfigError("solver tol must be > 0");
  if (n_eigenpairs < 1) throw ConfigError("solver n_eigenpairs must be >= 1");
  if (max_iterations < 1) throw ConfigError("solver max_iterations must be >= 1");
  if (krylov_dim < 2) throw ConfigError("solver krylov_dim must be >= 2");
}

void apply_sign_convention(Vector& v) {
  if (v.size() == 0) return;
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  if (v[imax] < 0.0) v = -v;
}

Eigen::MatrixXd to_dense(const SymmetricOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.dimension());
  Eigen::MatrixXd a(n, n);
  Vector e = Vector::Zero(n);
  Vector col;
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    a.col(j) = col;
    e[j] = 0.0;
  }
  return a;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", r);
  return buf;
}

class Lanczos {
 public:
  Lanczos(const SymmetricOperator& op, const SolverConfig& cfg)
      : op_(op), cfg_(cfg), n_(static_cast<Eigen::Index>(op.dimension())), rng_(cfg.seed) {}

  std::size_t matvecs() const { return matvecs_; }

  /// Lowest eigenpair of H restricted to the orthogonal complement of `locked`.
  EigenPair lowest(const std::vector<Vector>& locked, const Vector* guess, double tol) {
    const Eigen::Index avail = n_ - static_cast<Eigen::Index>(locked.size());
    if (avail <= 0) throw UsageError("lanczos: no dimensions left after locking");
    const Eigen::Index m = std::min<Eigen::Index>(static_cast<Eigen::Index>(cfg_.krylov_dim), avail);

    Eigen::MatrixXd v(n_, m);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    Vector start;
    if (guess != nullptr && guess->size() == n_ && guess->norm() > 0.0) {
      start = *guess;
    } else {
      start = random_vector();
    }
    if (!orthonormalize_new(start, v, 0, locked)) {
      start = random_vector();
      if (!orthonormalize_new(start, v, 0, locked)) throw SolverError("lanczos: degenerate start", 0.0);
    }
    v.col(0) = start;

    double best_residual = std::numeric_limits<double>::infinity();
    Eigen::Index keep = 0;
    Vector w;
    Vector next;
    for (;;) {
      Eigen::Index j = keep;
      Eigen::Index m_eff = m;
      double beta_last = 0.0;
      bool exhausted = false;
      // Simon's orthogonality estimates within the current segment.
      std::vector<double> om_prev;
      std::vector<double> om_cur{1.0};
      double anorm = 0.0;
      while (j < m) {
        op_.apply(v.col(j), w);
        ++matvecs_;
        project_out(w, locked);
        t.col(j).setZero();
        if (full_reorth() || j == keep) {
          Vector h = v.leftCols(j + 1).transpose() * w;
          w.noalias() -= v.leftCols(j + 1) * h;
          Vector h2 = v.leftCols(j + 1).transpose() * w;
          w.noalias() -= v.leftCols(j + 1) * h2;
          t.col(j).head(j + 1) = h + h2;
        } else {
          // Kept Ritz vectors and the two most recent Lanczos vectors.
          for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index i = 0; i < keep; ++i) {
              const double c = v.col(i).dot(w);
              w.noalias() -= c * v.col(i);
              t(i, j) += c;
            }
            for (Eigen::Index i = std::max(keep, j - 1); i <= j; ++i) {
              const double c = v.col(i).dot(w);
              w.noalias() -= c * v.col(i);
              t(i, j) += c;
            }
          }
        }
        // Reorthogonalization reintroduces rounding-level locked components; dividing
        // by a small beta would amplify them.
        project_out(w, locked);
        double beta = w.norm();
        const double alpha = t(j, j);
        anorm = std::max(anorm, std::abs(alpha) + 2.0 * beta);

        if (!full_reorth() && j > keep && beta > 0.0) {
          const std::size_t s = static_cast<std::size_t>(j - keep);
          std::vector<double> om_new(s + 2, 0.0);
          om_new[s + 1] = 1.0;
          om_new[s] = kEps;
          for (std::size_t k = 0; k < s; ++k) {
            const Eigen::Index gk = keep + static_cast<Eigen::Index>(k);
            const double bk = t(gk + 1, gk);
            double x = bk * om_cur[k + 1] + (t(gk, gk) - alpha) * om_cur[k] -
                       t(j, j - 1) * om_prev[k];
            if (k > 0) x += t(gk, gk - 1) * om_cur[k - 1];
            x = (x + std::copysign(2.0 * kEps * anorm, x)) / beta;
            om_new[k] = x;
          }
          double worst = 0.0;
          for (std::size_t k = 0; k < s; ++k) worst = std::max(worst, std::abs(om_new[k]));
          if (worst > std::sqrt(kEps)) {
            for (int pass = 0; pass < 2; ++pass) {
              Vector h = v.leftCols(j + 1).transpose() * w;
              w.noalias() -= v.leftCols(j + 1) * h;
            }
            project_out(w, locked);
            beta = w.norm();
            for (std::size_t k = 0; k < s; ++k) om_new[k] = kEps;
          }
          om_prev = std::move(om_cur);
          om_cur = std::move(om_new);
        } else if (!full_reorth()) {
          om_prev = std::move(om_cur);
          om_cur = {kEps, 1.0};
        }

        const double scale = t.col(j).head(j + 1).norm() + beta;
        const bool breakdown = beta <= 1e-14 * scale;
        if (j + 1 < m) {
          if (!breakdown) {
            v.col(j + 1) = w / beta;
            t(j + 1, j) = beta;
          } else {
            Vector r = random_vector();
            if (!orthonormalize_new(r, v, j + 1, locked)) {
              m_eff = j + 1;
              exhausted = true;
              ++j;
              break;
            }
            v.col(j + 1) = r;
            t(j + 1, j) = 0.0;
          }
        } else {
          if (breakdown) {
            beta_last = 0.0;
            exhausted = true;
          } else {
            beta_last = beta;
            next = w / beta;
          }
        }
        ++j;
      }

      Eigen::MatrixXd ts = t.topLeftCorner(m_eff, m_eff);
      for (Eigen::Index c = 0; c < m_eff; ++c) {
        for (Eigen::Index r = c + 1; r < m_eff; ++r) ts(r, c) = ts(c, r);
      }
      // The sub-diagonal entry computed from the recurrence is authoritative.
      for (Eigen::Index c = std::max<Eigen::Index>(keep, 0); c + 1 < m_eff; ++c) {
        ts(c + 1, c) = t(c + 1, c);
        ts(c, c + 1) = t(c + 1, c);
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ts);
      const Vector theta = es.eigenvalues();
      const Eigen::MatrixXd s = es.eigenvectors();

      const double estimate = std::abs(beta_last * s(m_eff - 1, 0));
      if (estimate <= tol || exhausted) {
        Vector y = v.leftCols(m_eff) * s.col(0);
        project_out(y, locked);
        y.normalize();
        Vector hy;
        op_.apply(y, hy);
        ++matvecs_;
        // Residual of the deflated operator; the final Rayleigh-Ritz step restores H.
        project_out(hy, locked);
        const double e = y.dot(hy);
        const double res = (hy - e * y).norm();
        best_residual = std::min(best_residual, res);
        if (res <= tol) {
          apply_sign_convention(y);
          return EigenPair{e, std::move(y), res};
        }
        if (!full_reorth() && matvecs_ < cfg_.max_iterations) {
          // Semi-orthogonality limits the attainable residual; continue from the
          // current Ritz vector with full reorthogonalization.
          fallback_full_ = true;
          v.col(0) = y;
          keep = 0;
          continue;
        }
      } else {
        best_residual = std::min(best_residual, estimate);
      }
      if (matvecs_ >= cfg_.max_iterations) {
        throw SolverError("lanczos did not converge within " + std::to_string(cfg_.max_iterations) +
                              " operator applications (best residual " +
                              format_residual(best_residual) + ")",
                          best_residual);
      }

      // Thick restart: keep the lowest Ritz vectors and continue from the residual direction.
      keep = m > 1 ? std::clamp<Eigen::Index>(m_eff / 2, 1, m - 1) : 0;
      if (exhausted || next.size() != n_) {
        keep = std::min<Eigen::Index>(keep, m_eff);
      }
      Eigen::MatrixXd ritz = v.leftCols(m_eff) * s.leftCols(keep);
      v.leftCols(keep) = ritz;
      t.setZero();
      for (Eigen::Index i = 0; i < keep; ++i) t(i, i) = theta[i];
      Vector r;
      if (!exhausted && next.size() == n_) {
        r = next;
      } else {
        r = random_vector();
      }
      if (!orthonormalize_new(r, v, keep, locked)) {
        r = random_vector();
        if (!orthonormalize_new(r, v, keep, locked)) {
          throw SolverError("lanczos: could not extend the Krylov basis", best_residual);
        }
      }
      v.col(keep) = r;
      next.resize(0);
    }
  }

 private:
  bool full_reorth() const {
    return fallback_full_ || cfg_.reorthogonalization == Reorthogonalization::full;
  }

  Vector random_vector() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector x(n_);
    for (Eigen::Index i = 0; i < n_; ++i) x[i] = u(rng_);
    return x;
  }

  static void project_out(Vector& w, const std::vector<Vector>& locked) {
    for (int pass = 0; pass < 2 && !locked.empty(); ++pass) {
      for (const auto& l : locked) w.noalias() -= l.dot(w) * l;
    }
  }

  /// Orthogonalize x against the first `cols` columns of v and the locked set, then normalize.
  static bool orthonormalize_new(Vector& x, const Eigen::MatrixXd& v, Eigen::Index cols,
                                 const std::vector<Vector>& locked) {
    const double n0 = x.norm();
    if (n0 == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass) {
      project_out(x, locked);
      if (cols > 0) {
        Vector h = v.leftCols(cols).transpose() * x;
        x.noalias() -= v.leftCols(cols) * h;
      }
    }
    const double n1 = x.norm();
    if (n1 <= 1e-10 * n0) return false;
    x /= n1;
    return true;
  }

  const SymmetricOperator& op_;
  const SolverConfig& cfg_;
  Eigen::Index n_;
  std::mt19937_64 rng_;
  std::size_t matvecs_ = 0;
  bool fallback_full_ = false;
};

std::vector<EigenPair> dense_pairs(const SymmetricOperator& op, const SolverConfig& cfg,
                                   std::size_t k) {
  const std::size_t n = op.dimension();
  if (n > cfg.dense_limit) {
    throw CapacityError("dense eigensolver limited to dimension " + std::to_string(cfg.dense_limit) +
                            ", operator has " + std::to_string(n),
                        n);
  }
  const Eigen::MatrixXd a = to_dense(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed", 0.0);
  std::vector<EigenPair> out;
  for (std::size_t i = 0; i < k; ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    Vector y = es.eigenvectors().col(c);
    apply_sign_convention(y);
    const double e = es.eigenvalues()[c];
    out.push_back(EigenPair{e, y, (a * y - e * y).norm()});
  }
  return out;
}

std::vector<EigenPair> lanczos_pairs(const SymmetricOperator& op, const SolverConfig& cfg,
                                     std::size_t k, const Vector* guess, std::size_t& matvecs) {
  Lanczos lz(op, cfg);
  if (k == 1) {
    auto p = lz.lowest({}, guess, cfg.tol);
    matvecs = lz.matvecs();
    return {std::move(p)};
  }
  std::vector<EigenPair> locked_pairs;
  std::vector<Vector> locked;
  for (std::size_t i = 0; i < k; ++i) {
    auto p = lz.lowest(locked, i == 0 ? guess : nullptr, cfg.tol);
    locked.push_back(p.vector);
    locked_pairs.push_back(std::move(p));
  }
  // Rayleigh-Ritz over the locked block sorts near-degenerate pairs. It is kept only
  // when the rotated residuals stay within the tolerance.
  const auto n = static_cast<Eigen::Index>(op.dimension());
  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd y(n, kk);
  Eigen::MatrixXd hy(n, kk);
  Vector tmp;
  for (Eigen::Index i = 0; i < kk; ++i) {
    y.col(i) = locked[static_cast<std::size_t>(i)];
    op.apply(y.col(i), tmp);
    hy.col(i) = tmp;
  }
  Eigen::MatrixXd g = y.transpose() * hy;
  g = 0.5 * (g + g.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const Eigen::MatrixXd yr = y * es.eigenvectors();
  const Eigen::MatrixXd hyr = hy * es.eigenvectors();
  std::vector<EigenPair> out;
  bool within = true;
  for (Eigen::Index i = 0; i < kk; ++i) {
    Vector v = yr.col(i);
    Vector hv = hyr.col(i);
    const double nv = v.norm();
    v /= nv;
    hv /= nv;
    const double e = v.dot(hv);
    const double res = (hv - e * v).norm();
    within = within && res <= cfg.tol;
    apply_sign_convention(v);
    out.push_back(EigenPair{e, std::move(v), res});
  }
  if (!within) {
    out = std::move(locked_pairs);
    std::stable_sort(out.begin(), out.end(), [](const EigenPair& a, const EigenPair& b) { return a.energy < b.energy; });
  }
  matvecs = lz.matvecs() + k;
  return out;
}

}  // namespace

std::vector<EigenPair> lowest_k(const SymmetricOperator& op, const SolverConfig& cfg, std::size_t k) {
  cfg.validate();
  if (k < 1) throw ConfigError("lowest_k requires k >= 1");
  if (k > op.dimension()) {
    throw ConfigError("requested " + std::to_string(k) + " eigenpairs of a dimension-" +
                      std::to_string(op.dimension()) + " operator");
  }
  if (cfg.method == SolverMethod::dense) return dense_pairs(op, cfg, k);
  std::size_t mv = 0;
  return lanczos_pairs(op, cfg, k, nullptr, mv);
}

GroundState ground_state(const SymmetricOperator& op, const SolverConfig& cfg,
                         const Vector* initial_guess) {
  cfg.validate();
  if (op.dimension() < 1) throw ConfigError("ground_state of an empty operator");
  std::vector<EigenPair> p;
  std::size_t iterations = 1;
  if (cfg.method == SolverMethod::dense) {
    p = dense_pairs(op, cfg, 1);
  } else {
    p = lanczos_pairs(op, cfg, 1, initial_guess, iterations);
  }
  return GroundState{p[0].energy, std::move(p[0].vector), p[0].residual, iterations, cfg};
}

ConvergenceTable convergence_sweep(const OperatorFactory& builder, std::span<const int> cutoffs,
                                   const SolverConfig& cfg) {
  if (cutoffs.empty()) throw ConfigError("convergence sweep needs at least one cutoff");
  for (std::size_t i = 1; i < cutoffs.size(); ++i) {
    if (cutoffs[i] <= cutoffs[i - 1]) throw ConfigError("convergence sweep cutoffs must ascend");
  }
  ConvergenceTable table;
  for (int c : cutoffs) {
    const auto op = builder(c);
    const GroundState gs = ground_state(*op, cfg);
    if (!table.points.empty() && gs.energy > table.points.back().energy + cfg.tol) {
      table.monotone = false;
    }
    table.points.push_back(ConvergencePoint{c, op->dimension(), gs.energy});
  }
  if (table.points.size() > 1) {
    const auto& a = table.points[table.points.size() - 2];
    const auto& b = table.points.back();
    table.increment = std::abs(b.energy - a.energy);
  }
  return table;
}

}  // namespace pflab
