#include "pflab/fock_basis.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "pflab/error.hpp"

namespace pflab {

namespace {

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t pow_sat(std::uint64_t base, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e && r != kSaturated; ++i) r = mul_sat(r, base);
  return r;
}

/// C(n, k) with saturation; partial products r * (n - k + i) / i are integers.
std::uint64_t binom_sat(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) is divisible by i; cancel the common factor first.
    const std::uint64_t g = std::gcd(r, i);
    r = mul_sat(r / g, (n - k + i) / (i / g));
    if (r == kSaturated) return kSaturated;
  }
  return r;
}

void check_cutoff(const FockTruncation& t) {
  if (t.cutoff < 1) throw ConfigError("Fock cutoff must be >= 1, got " + std::to_string(t.cutoff));
  if (t.cutoff > 60000) throw ConfigError("Fock cutoff too large");
}

}  // namespace

std::string_view to_string(TruncationScheme scheme) {
  return scheme == TruncationScheme::per_mode ? "per_mode" : "total_excitation";
}

std::uint64_t fock_dimension(const FockTruncation& trunc, std::size_t n_modes) {
  check_cutoff(trunc);
  const auto c = static_cast<std::uint64_t>(trunc.cutoff);
  if (trunc.scheme == TruncationScheme::per_mode) return pow_sat(c + 1, n_modes);
  return binom_sat(n_modes + c, c);
}

std::uint64_t fock_ladder_pairs(const FockTruncation& trunc, std::size_t n_modes) {
  check_cutoff(trunc);
  if (n_modes == 0) return 0;
  const auto c = static_cast<std::uint64_t>(trunc.cutoff);
  if (trunc.scheme == TruncationScheme::per_mode) return mul_sat(c, pow_sat(c + 1, n_modes - 1));
  // Pairs are states with total <= c - 1 over all modes: C(M + c - 1, c - 1).
  return binom_sat(n_modes + c - 1, c - 1);
}

FockBasis::FockBasis(std::size_t n_modes, FockTruncation trunc) : n_modes_(n_modes), trunc_(trunc) {
  const std::uint64_t dim = fock_dimension(trunc, n_modes);
  constexpr std::uint64_t kMaxEnumerated = 50'000'000;
  if (dim > kMaxEnumerated) {
    throw CapacityError("photon basis of " + std::to_string(dim) + " states is too large to enumerate",
                        dim);
  }
  n_states_ = static_cast<std::size_t>(dim);
  occ_.reserve(n_states_ * n_modes_);

  // Lexicographic enumeration, mode 0 most significant.
  std::vector<int> cur(n_modes_, 0);
  const int c = trunc.cutoff;
  const bool total = trunc.scheme == TruncationScheme::total_excitation;
  int sum = 0;
  for (;;) {
    for (int v : cur) occ_.push_back(static_cast<std::uint16_t>(v));
    // Increment the last mode that can grow, resetting the ones after it.
    std::size_t m = n_modes_;
    while (m > 0) {
      --m;
      const bool can_grow = total ? sum < c : cur[m] < c;
      if (can_grow) {
        ++cur[m];
        ++sum;
        break;
      }
      sum -= cur[m];
      cur[m] = 0;
      if (m == 0) {
        m = n_modes_;
        break;
      }
    }
    if (n_modes_ == 0 || (m == n_modes_)) break;
  }
  if (occ_.size() != n_states_ * n_modes_ && n_modes_ > 0) {
    throw Error("internal: Fock enumeration count mismatch");
  }

  lower_.assign(n_states_ * n_modes_, npos);
  raise_.assign(n_states_ * n_modes_, npos);
  // In lexicographic order with mode 0 most significant, the state with one less
  // photon in `mode` always precedes the current one; locate it by binary search.
  auto less = [&](std::size_t a, std::span<const int> b) {
    for (std::size_t k = 0; k < n_modes_; ++k) {
      if (occ_[a * n_modes_ + k] != b[k]) return occ_[a * n_modes_ + k] < b[k];
    }
    return false;
  };
  std::vector<int> tmp(n_modes_);
  for (std::size_t s = 0; s < n_states_; ++s) {
    for (std::size_t k = 0; k < n_modes_; ++k) tmp[k] = occ_[s * n_modes_ + k];
    for (std::size_t k = 0; k < n_modes_; ++k) {
      if (tmp[k] == 0) continue;
      --tmp[k];
      std::size_t lo = 0;
      std::size_t hi = s;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (less(mid, tmp)) lo = mid + 1; else hi = mid;
      }
      ++tmp[k];
      lower_[s * n_modes_ + k] = static_cast<std::int64_t>(lo);
      raise_[lo * n_modes_ + k] = static_cast<std::int64_t>(s);
    }
  }
}

int FockBasis::total(std::size_t state) const {
  int t = 0;
  for (std::size_t k = 0; k < n_modes_; ++k) t += occ_[state * n_modes_ + k];
  return t;
}

std::int64_t FockBasis::index_of(std::span<const int> occupation) const {
  if (occupation.size() != n_modes_) return npos;
  int sum = 0;
  for (int v : occupation) {
    if (v < 0) return npos;
    if (trunc_.scheme == TruncationScheme::per_mode && v > trunc_.cutoff) return npos;
    sum += v;
  }
  if (trunc_.scheme == TruncationScheme::total_excitation && sum > trunc_.cutoff) return npos;
  std::size_t lo = 0;
  std::size_t hi = n_states_;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    bool mid_less = false;
    for (std::size_t k = 0; k < n_modes_; ++k) {
      const int a = occ_[mid * n_modes_ + k];
      if (a != occupation[k]) {
        mid_less = a < occupation[k];
        break;
      }
    }
    if (mid_less) lo = mid + 1; else hi = mid;
  }
  return static_cast<std::int64_t>(lo);
}

}  // namespace pflab
