#include "pflab/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "pflab/error.hpp"

namespace pflab {

namespace {

void check_state(const Vector& state, const CoupledOperator& op) {
  if (state.size() != static_cast<Eigen::Index>(op.dimension())) {
    throw UsageError("state has dimension " + std::to_string(state.size()) + ", operator " +
                     std::to_string(op.dimension()));
  }
}

void check_mode(const CoupledOperator& op, std::size_t mode) {
  if (mode >= op.bath().size()) {
    throw UsageError("mode " + std::to_string(mode) + " out of range (operator carries " +
                     std::to_string(op.bath().size()) + " modes)");
  }
}

/// Apply a (shifted by `shift` on every photon block when non-null) to x.
Vector lower(const Vector& x, const CoupledOperator& op, std::size_t mode, const Vector* shift) {
  const auto nm = static_cast<Eigen::Index>(op.matter_dimension());
  const FockBasis& basis = op.basis();
  Vector y = Vector::Zero(x.size());
  for (std::size_t s = 0; s < basis.size(); ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    const int n = basis.occupation(s, mode);
    if (n > 0) {
      const auto t = static_cast<Eigen::Index>(basis.lowered(s, mode));
      y.segment(t * nm, nm) += std::sqrt(static_cast<double>(n)) * x.segment(si * nm, nm);
    }
    if (shift != nullptr) {
      y.segment(si * nm, nm) -= shift->cwiseProduct(x.segment(si * nm, nm));
    }
  }
  return y;
}

struct Moments {
  double n = 0.0;
  double second = 0.0;
  /// <x | L^2 x>
  double l2 = 0.0;
  /// <x | L x>
  double l1 = 0.0;
};

Moments moments(const Vector& x, const CoupledOperator& op, std::size_t mode, bool shifted) {
  Vector shift;
  if (shifted) {
    const auto& m = op.bath()[mode];
    shift = op.matter().projected_dipole(m.coupling) / std::sqrt(2.0 * m.omega);
  }
  const Vector* sp = shifted ? &shift : nullptr;
  const Vector lx = lower(x, op, mode, sp);
  const Vector l2x = lower(lx, op, mode, sp);
  return Moments{lx.squaredNorm(), l2x.squaredNorm(), x.dot(l2x), x.dot(lx)};
}

bool correct_shift(const CoupledOperator& op) {
  if (op.strategy() == Strategy::m_dse) throw UsageError("mean-field operators carry no photon modes");
  return op.gauge() == Gauge::length;
}

}  // namespace

std::optional<double> mandel_q_from_moments(double n, double second_factorial) {
  if (!(n >= kMinPhotonNumberForQ)) return std::nullopt;
  return (second_factorial - n * n) / n;
}

double photon_number(const Vector& state, const CoupledOperator& op, std::size_t mode) {
  check_state(state, op);
  check_mode(op, mode);
  return moments(state, op, mode, correct_shift(op)).n;
}

std::optional<double> mandel_q(const Vector& state, const CoupledOperator& op, std::size_t mode) {
  check_state(state, op);
  check_mode(op, mode);
  const Moments m = moments(state, op, mode, correct_shift(op));
  return mandel_q_from_moments(m.n, m.second);
}

double field_fluctuation(const Vector& state, const CoupledOperator& op, std::size_t mode) {
  check_state(state, op);
  check_mode(op, mode);
  const Moments m = moments(state, op, mode, correct_shift(op));
  // Both gauges reduce to omega^2 <X^2> with X = (L + L^dag) / sqrt(2 omega).
  return 0.5 * op.bath()[mode].omega * (2.0 * m.l2 + 2.0 * m.n + 1.0);
}

double e_field_sq(const Vector& state, const CoupledOperator& op, std::size_t mode) {
  return op.bath().modes().empty() ? 0.0
                                   : field_fluctuation(state, op, mode) *
                                         op.bath()[mode].coupling_norm_sq();
}

double mean_q(const Vector& state, const CoupledOperator& op, std::size_t mode) {
  check_state(state, op);
  check_mode(op, mode);
  if (op.gauge() == Gauge::velocity) {
    // In the rotated frame q maps to an antisymmetric form, whose real expectation vanishes.
    return 0.0;
  }
  const Moments m = moments(state, op, mode, false);
  return 2.0 * m.l1 / std::sqrt(2.0 * op.bath()[mode].omega);
}

ModeObservables mode_observables(const Vector& state, const CoupledOperator& op, std::size_t mode) {
  check_state(state, op);
  check_mode(op, mode);
  const bool shifted = correct_shift(op);
  const auto& pm = op.bath()[mode];
  const Moments m = moments(state, op, mode, shifted);
  ModeObservables o;
  o.omega = pm.omega;
  o.photon_number = m.n;
  o.mandel_q = mandel_q_from_moments(m.n, m.second);
  o.field_fluctuation = 0.5 * pm.omega * (2.0 * m.l2 + 2.0 * m.n + 1.0);
  o.e_field_sq = o.field_fluctuation * pm.coupling_norm_sq();
  const Moments bare = shifted ? moments(state, op, mode, false) : m;
  const double x_mean = 2.0 * bare.l1 / std::sqrt(2.0 * pm.omega);
  if (op.gauge() == Gauge::length) {
    o.mean_q = x_mean;
    o.mean_p = 0.0;
  } else {
    o.mean_q = 0.0;
    o.mean_p = -pm.omega * x_mean;
  }
  return o;
}

IncorrectObservables incorrect_lg_observables(const Vector& state, const CoupledOperator& op,
                                              std::size_t mode) {
  check_state(state, op);
  check_mode(op, mode);
  if (op.gauge() != Gauge::length) {
    throw UsageError("incorrect length-gauge observables require a length-gauge operator");
  }
  const Moments m = moments(state, op, mode, false);
  const double omega = op.bath()[mode].omega;
  IncorrectObservables o;
  o.photon_number = m.n;
  o.mandel_q = mandel_q_from_moments(m.n, m.second);
  // <p^2> with the bare ladder: (omega / 2)(2n + 1 - 2 Re<a^2>).
  o.field_fluctuation = 0.5 * omega * (2.0 * m.n + 1.0 - 2.0 * m.l2);
  o.e_field_sq = o.field_fluctuation * op.bath()[mode].coupling_norm_sq();
  return o;
}

double Density::cell_volume() const {
  double v = 1.0;
  for (double h : spacing) v *= h;
  return v;
}

double Density::integral() const { return values.sum() * cell_volume(); }

Density electron_density(const Vector& matter_state, const MatterOperator& matter) {
  const auto nm = static_cast<Eigen::Index>(matter.dimension());
  if (matter_state.size() % nm != 0) throw UsageError("state size is not a multiple of the matter dimension");
  Vector rho = Vector::Zero(nm);
  for (Eigen::Index b = 0; b < matter_state.size() / nm; ++b) {
    rho += matter_state.segment(b * nm, nm).cwiseAbs2();
  }
  return std::visit(
      [&](const auto& layout) -> Density {
        using L = std::decay_t<decltype(layout)>;
        Density d;
        if constexpr (std::is_same_v<L, LineLayout>) {
          const Grid1D& g = layout.grid;
          d.shape = {g.size()};
          d.spacing = {g.spacing()};
          d.origin = {g.coordinate(0)};
          d.values = rho / g.spacing();
        } else if constexpr (std::is_same_v<L, PlaneLayout>) {
          const Grid2D& g = layout.grid;
          d.shape = {g.x.size(), g.y.size()};
          d.spacing = {g.x.spacing(), g.y.spacing()};
          d.origin = {g.x.coordinate(0), g.y.coordinate(0)};
          d.values = rho / g.cell_area();
        } else {
          const Grid1D& g = layout.grid;
          const auto n = static_cast<Eigen::Index>(g.size());
          d.shape = {g.size()};
          d.spacing = {g.spacing()};
          d.origin = {g.coordinate(0)};
          d.values = Vector::Zero(n);
          for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
              const double p = rho[i * n + j];
              d.values[i] += p;
              d.values[j] += p;
            }
          }
          d.values /= g.spacing();
        }
        return d;
      },
      matter.layout());
}

Density electron_density(const Vector& state, const CoupledOperator& op) {
  check_state(state, op);
  return electron_density(state, op.matter());
}

namespace {

void check_same_grid(const Density& a, const Density& b) {
  if (a.shape != b.shape || a.spacing != b.spacing || a.origin != b.origin) {
    throw ConfigError("densities live on different grids");
  }
}

}  // namespace

double density_diff(const Density& n, const Density& n_ref) {
  check_same_grid(n, n_ref);
  return (n.values - n_ref.values).cwiseAbs().sum() * n.cell_volume();
}

double max_density_deviation(const Density& n, const Density& n_ref) {
  check_same_grid(n, n_ref);
  return (n.values - n_ref.values).cwiseAbs().maxCoeff();
}

double density_anisotropy(const Density& n) {
  if (n.shape.size() != 2 || n.shape[0] != n.shape[1] || n.spacing[0] != n.spacing[1]) {
    throw ConfigError("anisotropy needs a square two-dimensional density");
  }
  const std::size_t m = n.shape[0];
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      s += std::abs(n.values[static_cast<Eigen::Index>(i * m + j)] -
                    n.values[static_cast<Eigen::Index>(j * m + i)]);
    }
  }
  return s * n.cell_volume();
}

std::vector<double> mean_dipole(const Vector& state, const CoupledOperator& op) {
  check_state(state, op);
  const auto nm = static_cast<Eigen::Index>(op.matter_dimension());
  Vector rho = Vector::Zero(nm);
  for (std::size_t b = 0; b < op.photon_dimension(); ++b) {
    rho += state.segment(static_cast<Eigen::Index>(b) * nm, nm).cwiseAbs2();
  }
  std::vector<double> out;
  for (const auto& d : op.matter().dipole()) out.push_back(rho.dot(d));
  return out;
}

std::vector<double> mean_current(const Vector& state, const CoupledOperator& op) {
  check_state(state, op);
  const auto nm = static_cast<Eigen::Index>(op.matter_dimension());
  const double inv_m = 1.0 / op.matter().mass();
  const auto momentum = op.matter().momentum();
  std::vector<double> out;
  Vector tmp;
  for (std::size_t d = 0; d < momentum.size(); ++d) {
    // Charge -1: j = -(1/m) <p>, p = -i D. For real states <D> is the expectation of an
    // antisymmetric form; it is returned as the magnitude-carrying real part.
    double s = 0.0;
    for (std::size_t b = 0; b < op.photon_dimension(); ++b) {
      const auto xb = state.segment(static_cast<Eigen::Index>(b) * nm, nm);
      tmp = momentum[d] * xb;
      s += xb.dot(tmp);
    }
    double j = inv_m * s;
    if (op.gauge() == Gauge::velocity && op.strategy() != Strategy::m_dse) {
      // Diamagnetic part -N_e A / m with A = sum_a lambda_a q_a.
      for (std::size_t a = 0; a < op.bath().size(); ++a) {
        j -= op.matter().n_electrons() * inv_m * op.bath()[a].coupling[d] * mean_q(state, op, a);
      }
    }
    out.push_back(j);
  }
  return out;
}

DissociationResult dissociation_energy(std::span<const double> separations,
                                       std::span<const double> energies) {
  if (separations.size() != energies.size() || separations.size() < 3) {
    throw ConfigError("potential energy surface needs >= 3 matching (R, E) points");
  }
  for (std::size_t i = 1; i < separations.size(); ++i) {
    if (!(separations[i] > separations[i - 1])) throw ConfigError("separations must ascend");
  }
  const auto it = std::min_element(energies.begin(), energies.end());
  const auto k = static_cast<std::size_t>(it - energies.begin());
  if (k == 0 || k + 1 == energies.size()) {
    throw DomainError("potential energy surface has no interior minimum (no bound state)");
  }
  return DissociationResult{energies.back() - *it, separations[k], *it};
}

ObservableReport make_report(const GroundState& gs, const CoupledOperator& op) {
  ObservableReport r;
  r.total_energy = gs.energy;
  if (op.strategy() != Strategy::m_dse) {
    for (std::size_t a = 0; a < op.bath().size(); ++a) {
      r.per_mode.push_back(mode_observables(gs.vector, op, a));
    }
  }
  r.density = electron_density(gs.vector, op);
  r.mean_dipole = mean_dipole(gs.vector, op);
  r.mean_current = mean_current(gs.vector, op);
  return r;
}

}  // namespace pflab
