#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

#include "lgheat/errors.hpp"

namespace lgheat {

/// Exponent vector over up to 16 slots. A polynomial in n complex variables
/// uses slots [0, n) for z-powers and [n, 2n) for conjugate-z powers.
class Monomial {
 public:
  static constexpr int kSlots = 16;
  static constexpr int kMaxVariables = kSlots / 2;

  constexpr Monomial() = default;

  constexpr unsigned operator[](int slot) const { return exps_[static_cast<std::size_t>(slot)]; }

  void set(int slot, unsigned e) {
    if (e > 255) throw Error(ErrorCode::InvalidArgument, "exponent exceeds 255");
    exps_[static_cast<std::size_t>(slot)] = static_cast<std::uint8_t>(e);
  }

  unsigned degree() const {
    unsigned d = 0;
    for (auto e : exps_) d += e;
    return d;
  }

  unsigned degree(int first, int count) const {
    unsigned d = 0;
    for (int s = first; s < first + count; ++s) d += exps_[static_cast<std::size_t>(s)];
    return d;
  }

  bool is_one() const { return degree() == 0; }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int s = 0; s < kSlots; ++s) r.set(s, a[s] + b[s]);
    return r;
  }

  friend constexpr auto operator<=>(const Monomial&, const Monomial&) = default;
  friend constexpr bool operator==(const Monomial&, const Monomial&) = default;

  std::size_t hash() const {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    for (int s = 0; s < 8; ++s) lo |= std::uint64_t(exps_[static_cast<std::size_t>(s)]) << (8 * s);
    for (int s = 8; s < 16; ++s) hi |= std::uint64_t(exps_[static_cast<std::size_t>(s)]) << (8 * (s - 8));
    return std::hash<std::uint64_t>{}(lo * 0x9E3779B97F4A7C15ULL ^ (hi + 0x632BE59BD9B4E019ULL + (lo << 6)));
  }

 private:
  std::array<std::uint8_t, kSlots> exps_{};
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

}  // namespace lgheat
