#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace pflab {

enum class TruncationScheme { per_mode, total_excitation };

std::string_view to_string(TruncationScheme scheme);

struct FockTruncation {
  TruncationScheme scheme = TruncationScheme::total_excitation;
  /// Max photons per mode (per_mode) or max summed photons (total_excitation).
  int cutoff = 2;

  friend bool operator==(const FockTruncation&, const FockTruncation&) = default;
};

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

/// Closed-form basis size, saturating at kSaturated. Zero modes give 1 (vacuum only).
std::uint64_t fock_dimension(const FockTruncation& trunc, std::size_t n_modes);

/// Number of (n, n + e_mode) pairs inside the basis for one mode, identical for all modes.
std::uint64_t fock_ladder_pairs(const FockTruncation& trunc, std::size_t n_modes);

/// Enumerated multimode occupation basis. Both schemes are closed under lowering,
/// so a_k maps the basis into itself exactly.
class FockBasis {
 public:
  static constexpr std::int64_t npos = -1;

  FockBasis(std::size_t n_modes, FockTruncation trunc);

  std::size_t size() const noexcept { return n_states_; }
  std::size_t n_modes() const noexcept { return n_modes_; }
  const FockTruncation& truncation() const noexcept { return trunc_; }

  std::span<const std::uint16_t> occupations(std::size_t state) const {
    return {occ_.data() + state * n_modes_, n_modes_};
  }
  int occupation(std::size_t state, std::size_t mode) const {
    return occ_[state * n_modes_ + mode];
  }
  int total(std::size_t state) const;

  /// Index of the state with one photon fewer in `mode`, or npos.
  std::int64_t lowered(std::size_t state, std::size_t mode) const {
    return lower_[state * n_modes_ + mode];
  }
  /// Index of the state with one photon more in `mode`, or npos if outside the basis.
  std::int64_t raised(std::size_t state, std::size_t mode) const {
    return raise_[state * n_modes_ + mode];
  }
  /// Index of an arbitrary occupation tuple, or npos.
  std::int64_t index_of(std::span<const int> occupation) const;

 private:
  std::size_t n_modes_;
  FockTruncation trunc_;
  std::size_t n_states_ = 0;
  std::vector<std::uint16_t> occ_;
  std::vector<std::int64_t> lower_;
  std::vector<std::int64_t> raise_;
};

}  // namespace pflab
