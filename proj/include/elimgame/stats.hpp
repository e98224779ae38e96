#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "elimgame/profile.hpp"
#include "elimgame/ratio.hpp"

namespace elimgame {

/// Compensated (Neumaier) summation.
class KahanSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Exact population of welfare ratios. Every ratio is a quotient of two
/// Borda scores bounded by n(m-1), so the population is stored as a count
/// per (numerator score, denominator score) cell. Merging is plain integer
/// addition, which keeps parallel results independent of scheduling.
class RatioTally {
 public:
  RatioTally() = default;
  explicit RatioTally(std::size_t max_score)
      : side_(max_score + 1), cells_(side_ * side_, 0) {}

  std::size_t max_score() const noexcept { return side_ - 1; }

  /// `index` identifies the profile (enumeration rank or sample number);
  /// among equal maxima the smallest index is kept as witness.
  void add(int num, int den, std::uint64_t index) noexcept {
    ++cells_[static_cast<std::size_t>(num) * side_ + static_cast<std::size_t>(den)];
    ++count_;
    const auto lhs = static_cast<std::int64_t>(num) * best_den_;
    const auto rhs = static_cast<std::int64_t>(best_num_) * den;
    if (count_ == 1 || lhs > rhs || (lhs == rhs && index < best_index_)) {
      best_num_ = num;
      best_den_ = den;
      best_index_ = index;
    }
  }

  void merge(const RatioTally& other) {
    if (other.count_ == 0) return;
    if (cells_.empty()) {
      *this = other;
      return;
    }
    for (std::size_t k = 0; k < cells_.size(); ++k) cells_[k] += other.cells_[k];
    const auto lhs = static_cast<std::int64_t>(other.best_num_) * best_den_;
    const auto rhs = static_cast<std::int64_t>(best_num_) * other.best_den_;
    if (count_ == 0 || lhs > rhs || (lhs == rhs && other.best_index_ < best_index_)) {
      best_num_ = other.best_num_;
      best_den_ = other.best_den_;
      best_index_ = other.best_index_;
    }
    count_ += other.count_;
  }

  std::uint64_t count() const noexcept { return count_; }
  std::uint64_t count_of(int num, int den) const noexcept {
    return cells_[static_cast<std::size_t>(num) * side_ + static_cast<std::size_t>(den)];
  }

  /// Calls fn(num_score, den_score, count) for every non-empty cell in a
  /// fixed order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t num = 0; num < side_; ++num)
      for (std::size_t den = 0; den < side_; ++den)
        if (auto c = cells_[num * side_ + den]) fn(static_cast<int>(num), static_cast<int>(den), c);
  }

  Ratio max() const { return Ratio(best_num_, best_den_); }
  std::uint64_t max_index() const noexcept { return best_index_; }

  Ratio min() const {
    std::optional<Ratio> lo;
    for_each([&](int num, int den, std::uint64_t) {
      Ratio r(num, den);
      if (!lo || r < *lo) lo = r;
    });
    return lo.value_or(Ratio(0, 1));
  }

  double mean() const {
    if (count_ == 0) return std::numeric_limits<double>::quiet_NaN();
    KahanSum s;
    for_each([&](int num, int den, std::uint64_t c) {
      s.add(static_cast<double>(c) * (static_cast<double>(num) / den));
    });
    return s.value() / static_cast<double>(count_);
  }

  /// Population standard deviation (divides by the count).
  double stddev() const {
    if (count_ == 0) return std::numeric_limits<double>::quiet_NaN();
    const double mu = mean();
    KahanSum s;
    for_each([&](int num, int den, std::uint64_t c) {
      const double d = static_cast<double>(num) / den - mu;
      s.add(static_cast<double>(c) * d * d);
    });
    return std::sqrt(s.value() / static_cast<double>(count_));
  }

 private:
  std::size_t side_ = 0;
  std::vector<std::uint64_t> cells_;
  std::uint64_t count_ = 0;
  int best_num_ = 0;
  int best_den_ = 1;
  std::uint64_t best_index_ = 0;
};

struct RatioStats {
  double mean = 0.0;
  double std = 0.0;
  Ratio max;
  std::optional<PreferenceProfile> max_witness;
  std::uint64_t count = 0;
};

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::uint64_t count = 0;
};

/// First bin is the spike at exactly 1 (left == right == 1); the rest are
/// `bins` equal-width bins over [min(1/bound, observed min), bound] that
/// hold every ratio other than 1. Without a bound the observed maximum is
/// used.
inline std::vector<HistogramBin> make_histogram(const RatioTally& tally, std::size_t bins,
                                                std::optional<Ratio> bound) {
  if (bins == 0) throw error(errc::out_of_domain, "histogram needs at least one bin");
  const Ratio hi_ratio = bound ? std::max(*bound, tally.max()) : tally.max();
  Ratio lo_ratio = tally.min();
  if (bound && bound->num() > 0) lo_ratio = std::min(lo_ratio, bound->reciprocal());
  const double lo = lo_ratio.to_double();
  const double hi = hi_ratio.to_double();
  const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;

  std::vector<HistogramBin> out;
  out.push_back({1.0, 1.0, 0});
  for (std::size_t k = 0; k < bins; ++k)
    out.push_back({lo + width * static_cast<double>(k),
                   k + 1 == bins ? hi : lo + width * static_cast<double>(k + 1), 0});
  tally.for_each([&](int num, int den, std::uint64_t c) {
    if (num == den) {
      out[0].count += c;
      return;
    }
    const double x = static_cast<double>(num) / den;
    auto k = static_cast<std::size_t>(std::max(0.0, std::floor((x - lo) / width)));
    if (k >= bins) k = bins - 1;
    out[k + 1].count += c;
  });
  return out;
}

}  // namespace elimgame
