#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elimgame/cultures.hpp"
#include "elimgame/detail/parallel.hpp"
#include "elimgame/play.hpp"
#include "elimgame/ratio.hpp"
#include "elimgame/stats.hpp"

namespace elimgame {

/// AB: best Borda score over the SPNE winner's. CB: sincere winner's over
/// the SPNE winner's.
enum class RatioMode { ab, cb };

constexpr std::string_view to_string(RatioMode mode) noexcept {
  return mode == RatioMode::ab ? "AB" : "CB";
}

inline RatioMode parse_ratio_mode(std::string_view text) {
  std::string up(text);
  for (auto& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (up == "AB" || up == "POA") return RatioMode::ab;
  if (up == "CB" || up == "SR") return RatioMode::cb;
  throw error(errc::parse_error, "mode must be AB or CB, got '" + std::string(text) + "'");
}

namespace detail {

/// Borda scores (numerator, denominator) of a ratio for one fixed sequence.
class RatioEvaluator {
 public:
  RatioEvaluator(const EliminationSequence& pi, RatioMode mode)
      : forward_(pi.begin(), pi.end()), backward_(forward_.rbegin(), forward_.rend()), mode_(mode) {}

  template <ProfileLike P>
  std::pair<int, int> scores(const P& p) const {
    const auto spne = sincere_winner(p, backward_);
    const int den = score(p, spne);
    int num = 0;
    if (mode_ == RatioMode::cb) {
      num = score(p, sincere_winner(p, forward_));
    } else {
      std::array<int, max_candidates> all{};
      borda_scores_into(p, std::span<int>(all));
      for (std::size_t c = 0; c < p.candidates(); ++c) num = std::max(num, all[c]);
    }
    if (den == 0) throw error(errc::zero_welfare, "SPNE winner has Borda score 0");
    return {num, den};
  }

 private:
  template <ProfileLike P>
  static int score(const P& p, Candidate c) {
    int s = 0;
    const auto top = static_cast<int>(p.candidates()) - 1;
    for (std::size_t i = 0; i < p.voters(); ++i) s += top - static_cast<int>(p.position(i, c));
    return s;
  }

  std::vector<VoterIndex> forward_;
  std::vector<VoterIndex> backward_;
  RatioMode mode_;
};

inline Ratio evaluate_ratio(const PreferenceProfile& v, const EliminationSequence& pi, RatioMode mode) {
  pi.validate(v.voters(), v.candidates());
  const auto [num, den] = RatioEvaluator(pi, mode).scores(v);
  return Ratio(num, den);
}

}  // namespace detail

/// S_B(a)/S_B(b): a maximizes Borda, b is the SPNE winner.
inline Ratio ratio_ab(const PreferenceProfile& v, const EliminationSequence& pi) {
  return detail::evaluate_ratio(v, pi, RatioMode::ab);
}

/// S_B(c)/S_B(b): c wins under sincere play, b is the SPNE winner.
inline Ratio ratio_cb(const PreferenceProfile& v, const EliminationSequence& pi) {
  return detail::evaluate_ratio(v, pi, RatioMode::cb);
}

inline Ratio ratio(const PreferenceProfile& v, const EliminationSequence& pi, RatioMode mode) {
  return detail::evaluate_ratio(v, pi, mode);
}

namespace detail {
inline void check_bound_domain(std::size_t n, std::size_t m, std::size_t o_max) {
  if (n < 2 || m < 2 || o_max < 1 || o_max > m - 1)
    throw error(errc::out_of_domain, "bound needs n >= 2, m >= 2 and 1 <= o_max <= m-1 (n=" +
                                         std::to_string(n) + ", m=" + std::to_string(m) +
                                         ", o_max=" + std::to_string(o_max) + ")");
}
}  // namespace detail

/// Price of anarchy: (o_max - 1 + (n-1)(m-1)) / (m-1).
inline Ratio poa_formula(std::size_t n, std::size_t m, std::size_t o_max) {
  detail::check_bound_domain(n, m, o_max);
  const auto mm = static_cast<std::int64_t>(m);
  return Ratio(static_cast<std::int64_t>(o_max) - 1 + static_cast<std::int64_t>(n - 1) * (mm - 1), mm - 1);
}

/// Upper bound on the sincerity ratio: (o_max + (n-1)(m-1)) / m.
inline Ratio sr_upper_bound(std::size_t n, std::size_t m, std::size_t o_max) {
  detail::check_bound_domain(n, m, o_max);
  const auto mm = static_cast<std::int64_t>(m);
  return Ratio(static_cast<std::int64_t>(o_max) + static_cast<std::int64_t>(n - 1) * (mm - 1), mm);
}

inline Ratio bound_for(RatioMode mode, std::size_t n, std::size_t m, std::size_t o_max) {
  return mode == RatioMode::ab ? poa_formula(n, m, o_max) : sr_upper_bound(n, m, o_max);
}

struct SweepOptions {
  std::uint64_t budget = default_enumeration_budget;
  std::size_t workers = 1;
  std::uint64_t chunk_size = 1u << 16;
};

/// Ratio over every profile for (n, m), voter 1 fixed to the identity when
/// fix_first. Tally indices are enumeration ranks (see ProfileCursor).
inline RatioTally tally_exhaustive(const EliminationSequence& pi, std::size_t n, std::size_t m,
                                   RatioMode mode, bool fix_first, const SweepOptions& opts = {}) {
  pi.validate(n, m);
  const auto total = checked_profile_count(n, m, fix_first, opts.budget);
  const auto chunk = std::max<std::uint64_t>(1, opts.chunk_size);
  const auto chunks = (total + chunk - 1) / chunk;
  const auto max_score = n * (m - 1);
  const detail::RatioEvaluator eval(pi, mode);

  const auto workers = std::max<std::size_t>(1, std::min<std::uint64_t>(opts.workers, chunks));
  std::vector<RatioTally> partial(workers, RatioTally(max_score));
  detail::run_chunks(workers, chunks, [&](std::size_t w, std::uint64_t c) {
    const auto begin = c * chunk;
    const auto end = std::min(total, begin + chunk);
    ProfileCursor cursor(n, m, fix_first, begin);
    auto& tally = partial[w];
    for (auto index = begin; index < end; ++index) {
      const auto [num, den] = eval.scores(cursor.current());
      tally.add(num, den, index);
      cursor.advance();
    }
  });
  RatioTally result(max_score);
  for (const auto& t : partial) result.merge(t);
  return result;
}

/// Profile at enumeration rank `index`.
inline PreferenceProfile profile_at(std::size_t n, std::size_t m, bool fix_first, std::uint64_t index) {
  return ProfileCursor(n, m, fix_first, index).current().to_profile();
}

struct WorstCaseResult {
  Ratio value;
  PreferenceProfile witness;
  std::uint64_t population_size = 0;
};

/// Exact max of the ratio over all profiles. Ties between maximal profiles
/// go to the lexicographically smallest witness (lowest enumeration rank).
inline WorstCaseResult exact_worst_ratio(const EliminationSequence& pi, std::size_t n, std::size_t m,
                                         RatioMode mode, bool fix_first, const SweepOptions& opts = {}) {
  const auto tally = tally_exhaustive(pi, n, m, mode, fix_first, opts);
  return {tally.max(), profile_at(n, m, fix_first, tally.max_index()), tally.count()};
}

}  // namespace elimgame
