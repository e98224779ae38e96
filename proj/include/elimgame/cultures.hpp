#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elimgame/profile.hpp"

namespace elimgame {

/// Counter-based stream: the state is derived from (master seed, stream
/// index) alone, so sample i draws the same numbers no matter which worker
/// produces it. SplitMix64 output function.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : state_(mix(master_seed ^ mix(stream_index + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform integer in [0, bound), bound > 0. Lemire's multiply-shift with rejection.
  std::uint64_t uniform(std::uint64_t bound) noexcept {
    unsigned __int128 prod = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        prod = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

  /// Uniform double in [0, 1).
  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

/// Mutable flat profile used by the enumeration and sampling loops.
class ProfileBuffer {
 public:
  ProfileBuffer(std::size_t n, std::size_t m)
      : n_(n), m_(m), rankings_(n * m), positions_(n * m) {
    for (std::size_t i = 0; i < n; ++i) set_identity(i);
  }

  std::size_t voters() const noexcept { return n_; }
  std::size_t candidates() const noexcept { return m_; }
  std::span<const Candidate> ranking(std::size_t i) const noexcept {
    return {rankings_.data() + i * m_, m_};
  }
  std::size_t position(std::size_t i, Candidate c) const noexcept { return positions_[i * m_ + c]; }

  std::span<Candidate> mutable_ranking(std::size_t i) noexcept { return {rankings_.data() + i * m_, m_}; }

  /// Must follow any write through mutable_ranking().
  void sync_positions(std::size_t i) noexcept {
    const auto r = ranking(i);
    for (std::size_t pos = 0; pos < m_; ++pos)
      positions_[i * m_ + r[pos]] = static_cast<std::uint8_t>(pos);
  }

  void set_identity(std::size_t i) noexcept {
    auto r = mutable_ranking(i);
    std::iota(r.begin(), r.end(), Candidate{0});
    sync_positions(i);
  }

  PreferenceProfile to_profile(std::vector<std::string> labels = {}) const {
    std::vector<Vote> votes;
    votes.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const auto r = ranking(i);
      votes.emplace_back(std::vector<Candidate>(r.begin(), r.end()));
    }
    return PreferenceProfile(std::move(votes), std::move(labels));
  }

 private:
  std::size_t n_, m_;
  std::vector<Candidate> rankings_;
  std::vector<std::uint8_t> positions_;
};

// ---------------------------------------------------------------------------
// Exhaustive enumeration

/// m! or nullopt when it does not fit in 64 bits.
inline std::optional<std::uint64_t> factorial(std::size_t m) {
  std::uint64_t f = 1;
  for (std::size_t k = 2; k <= m; ++k) {
    if (f > std::numeric_limits<std::uint64_t>::max() / k) return std::nullopt;
    f *= k;
  }
  return f;
}

/// Number of profiles enumerated: (m!)^(n-1) with the first voter fixed,
/// (m!)^n otherwise. nullopt on overflow.
inline std::optional<std::uint64_t> profile_count(std::size_t n, std::size_t m, bool fix_first) {
  const auto f = factorial(m);
  if (!f) return std::nullopt;
  const std::size_t free_voters = fix_first ? n - 1 : n;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < free_voters; ++i) {
    if (*f != 0 && total > std::numeric_limits<std::uint64_t>::max() / *f) return std::nullopt;
    total *= *f;
  }
  return total;
}

inline constexpr std::uint64_t default_enumeration_budget = 100'000'000;

inline std::uint64_t checked_profile_count(std::size_t n, std::size_t m, bool fix_first,
                                           std::uint64_t budget) {
  if (n == 0) throw error(errc::invalid_profile, "a profile needs at least one voter");
  const auto count = profile_count(n, m, fix_first);
  if (!count || *count > budget)
    throw error(errc::budget_exceeded,
                "enumerating n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                    " needs " + (count ? std::to_string(*count) : std::string("> 2^64")) +
                    " profiles, budget is " + std::to_string(budget));
  return *count;
}

/// Writes the permutation of lexicographic rank `index` (0-based) into out.
inline void unrank_permutation(std::uint64_t index, std::span<Candidate> out) {
  const auto m = out.size();
  std::vector<Candidate> pool(m);
  std::iota(pool.begin(), pool.end(), Candidate{0});
  for (std::size_t pos = 0; pos < m; ++pos) {
    const auto block = *factorial(m - 1 - pos);
    const auto pick = index / block;
    index %= block;
    out[pos] = pool[pick];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
}

/// Walks profiles in mixed-radix lexicographic order: the last voter's
/// ranking changes fastest, each ranking advancing by next_permutation.
/// Profile index k maps to one fixed profile, so disjoint index ranges can
/// be handed to independent workers.
class ProfileCursor {
 public:
  ProfileCursor(std::size_t n, std::size_t m, bool fix_first, std::uint64_t start = 0)
      : buffer_(n, m), first_free_(fix_first ? 1 : 0) {
    const auto f = *factorial(m);
    for (std::size_t i = n; i-- > first_free_;) {
      unrank_permutation(start % f, buffer_.mutable_ranking(i));
      buffer_.sync_positions(i);
      start /= f;
    }
  }

  const ProfileBuffer& current() const noexcept { return buffer_; }

  /// Steps to the next profile; false after wrapping past the last one.
  bool advance() noexcept {
    for (std::size_t i = buffer_.voters(); i-- > first_free_;) {
      auto r = buffer_.mutable_ranking(i);
      const bool more = std::next_permutation(r.begin(), r.end());
      buffer_.sync_positions(i);
      if (more) return true;
    }
    return false;
  }

 private:
  ProfileBuffer buffer_;
  std::size_t first_free_;
};

/// Range over every profile for (n, m); with fix_first the first voter is
/// the identity ranking. Materializes a PreferenceProfile per step, so the
/// hot loops use ProfileCursor directly.
class ProfileEnumeration {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = PreferenceProfile;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(const ProfileEnumeration* owner, std::uint64_t index)
        : owner_(owner), index_(index) {
      if (index_ < owner_->count_) cursor_.emplace(owner_->n_, owner_->m_, owner_->fix_first_, index_);
    }

    PreferenceProfile operator*() const { return cursor_->current().to_profile(); }
    iterator& operator++() {
      ++index_;
      cursor_->advance();
      return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(const iterator& o) const { return index_ == o.index_; }

   private:
    const ProfileEnumeration* owner_ = nullptr;
    std::uint64_t index_ = 0;
    std::optional<ProfileCursor> cursor_;
  };

  ProfileEnumeration(std::size_t n, std::size_t m, bool fix_first, std::uint64_t budget)
      : n_(n), m_(m), fix_first_(fix_first), count_(checked_profile_count(n, m, fix_first, budget)) {}

  std::uint64_t size() const noexcept { return count_; }
  iterator begin() const { return iterator(this, 0); }
  iterator end() const { return iterator(this, count_); }

 private:
  std::size_t n_, m_;
  bool fix_first_;
  std::uint64_t count_;
};

inline ProfileEnumeration enumerate_profiles(std::size_t n, std::size_t m, bool fix_first,
                                             std::uint64_t budget = default_enumeration_budget) {
  return ProfileEnumeration(n, m, fix_first, budget);
}

// ---------------------------------------------------------------------------
// Sampling cultures

enum class CultureKind { impartial, mallows };

struct CultureSpec {
  CultureKind kind = CultureKind::impartial;
  double phi = 1.0;
  /// Mallows centre; identity when unset.
  std::optional<Vote> reference;
  /// Draw a fresh uniform centre per profile (shared by its voters).
  bool random_reference = false;

  static CultureSpec impartial() { return {}; }
  static CultureSpec mallows(double phi) {
    CultureSpec s;
    s.kind = CultureKind::mallows;
    s.phi = phi;
    return s;
  }

  void validate(std::size_t m) const {
    if (kind != CultureKind::mallows) return;
    if (!(phi > 0.0 && phi <= 1.0))
      throw error(errc::phi_out_of_range, "Mallows dispersion must lie in (0, 1], got " + std::to_string(phi));
    if (reference && reference->size() != m)
      throw error(errc::length_mismatch, "Mallows reference ranks a different number of candidates");
  }

  std::string name() const { return kind == CultureKind::impartial ? "ic" : "mallows"; }
};

/// "ic" or "mallows:phi=0.6" (also "mallows" alone, phi then set elsewhere).
inline CultureSpec parse_culture(std::string_view text) {
  if (text == "ic" || text == "impartial") return CultureSpec::impartial();
  if (text.substr(0, 7) == "mallows") {
    auto spec = CultureSpec::mallows(1.0);
    auto rest = text.substr(7);
    if (rest.empty()) return spec;
    if (rest.substr(0, 5) != ":phi=")
      throw error(errc::parse_error, "expected mallows:phi=<value>, got '" + std::string(text) + "'");
    const std::string value(rest.substr(5));
    std::size_t used = 0;
    try {
      spec.phi = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size())
      throw error(errc::parse_error, "bad phi value '" + value + "'");
    return spec;
  }
  throw error(errc::parse_error, "unknown culture '" + std::string(text) + "'");
}

inline void shuffle_uniform(std::span<Candidate> r, RngStream& rng) noexcept {
  for (std::size_t i = r.size(); i > 1; --i) {
    const auto j = rng.uniform(i);
    std::swap(r[i - 1], r[j]);
  }
}

/// Repeated insertion: the j-th reference candidate (0-based) lands k slots
/// ahead of the end with probability phi^k / (1 + phi + ... + phi^j), which
/// makes P(v) proportional to phi^(kendall tau to the reference).
class MallowsSampler {
 public:
  MallowsSampler(std::size_t m, double phi) : m_(m), cumulative_(m * m) {
    for (std::size_t j = 0; j < m; ++j) {
      double w = 1.0, total = 0.0;
      for (std::size_t k = 0; k <= j; ++k, w *= phi) {
        total += w;
        cumulative_[j * m + k] = total;
      }
      for (std::size_t k = 0; k <= j; ++k) cumulative_[j * m + k] /= total;
    }
  }

  void sample(std::span<const Candidate> reference, std::span<Candidate> out, RngStream& rng) const {
    for (std::size_t j = 0; j < m_; ++j) {
      const double u = rng.uniform01();
      std::size_t k = 0;
      while (k < j && u >= cumulative_[j * m_ + k]) ++k;
      const std::size_t pos = j - k;
      for (std::size_t t = j; t > pos; --t) out[t] = out[t - 1];
      out[pos] = reference[j];
    }
  }

 private:
  std::size_t m_;
  std::vector<double> cumulative_;
};

inline void sample_impartial_into(ProfileBuffer& buf, RngStream& rng) {
  for (std::size_t i = 0; i < buf.voters(); ++i) {
    auto r = buf.mutable_ranking(i);
    std::iota(r.begin(), r.end(), Candidate{0});
    shuffle_uniform(r, rng);
    buf.sync_positions(i);
  }
}

inline void sample_mallows_into(ProfileBuffer& buf, const CultureSpec& spec,
                                const MallowsSampler& sampler, RngStream& rng) {
  const auto m = buf.candidates();
  std::vector<Candidate> centre(m);
  if (spec.reference) {
    const auto r = spec.reference->ranking();
    std::copy(r.begin(), r.end(), centre.begin());
  } else {
    std::iota(centre.begin(), centre.end(), Candidate{0});
  }
  if (spec.random_reference) shuffle_uniform(centre, rng);
  for (std::size_t i = 0; i < buf.voters(); ++i) {
    sampler.sample(centre, buf.mutable_ranking(i), rng);
    buf.sync_positions(i);
  }
}

/// Each vote an independent uniform permutation (Fisher-Yates).
inline PreferenceProfile sample_impartial(std::size_t n, std::size_t m, RngStream rng) {
  ProfileBuffer buf(n, m);
  sample_impartial_into(buf, rng);
  return buf.to_profile();
}

inline PreferenceProfile sample_mallows(std::size_t n, std::size_t m, const CultureSpec& spec,
                                        RngStream rng) {
  if (spec.kind != CultureKind::mallows)
    throw error(errc::out_of_domain, "sample_mallows needs a Mallows culture");
  spec.validate(m);
  ProfileBuffer buf(n, m);
  MallowsSampler sampler(m, spec.phi);
  sample_mallows_into(buf, spec, sampler, rng);
  return buf.to_profile();
}

/// Number of candidate pairs the two votes order differently.
inline std::size_t kendall_tau(const Vote& a, const Vote& b) {
  if (a.size() != b.size())
    throw error(errc::length_mismatch, "votes rank different numbers of candidates");
  std::size_t d = 0;
  const auto r = a.ranking();
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j)
      if (b.position(r[i]) > b.position(r[j])) ++d;
  return d;
}

}  // namespace elimgame
