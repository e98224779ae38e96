#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "elimgame/error.hpp"

namespace elimgame {

/// Non-negative rational kept in lowest terms. Welfare ratios are quotients
/// of Borda scores, so both parts stay small; comparisons widen to 128 bits.
class Ratio {
 public:
  constexpr Ratio() = default;

  Ratio(std::int64_t num, std::int64_t den) {
    if (den <= 0 || num < 0)
      throw error(errc::out_of_domain,
                  "ratio needs num >= 0 and den > 0, got " + std::to_string(num) + "/" +
                      std::to_string(den));
    const auto g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  constexpr std::int64_t num() const noexcept { return num_; }
  constexpr std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  Ratio reciprocal() const { return Ratio(den_, num_); }

  std::string to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend bool operator==(const Ratio&, const Ratio&) = default;

  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) noexcept {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Ratio& r) {
    return os << r.to_string();
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace elimgame
