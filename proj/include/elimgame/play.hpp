#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include "elimgame/profile.hpp"

namespace elimgame {

namespace detail {

using Mask = std::uint64_t;

constexpr Mask full_mask(std::size_t m) noexcept {
  return m >= 64 ? ~Mask{0} : ((Mask{1} << m) - 1);
}

template <ProfileLike P>
inline Candidate worst_remaining(const P& p, std::size_t voter, Mask alive) noexcept {
  const auto r = p.ranking(voter);
  std::size_t pos = r.size();
  while (pos-- > 1)
    if ((alive >> r[pos]) & 1u) return r[pos];
  return r[0];
}

/// Plays the turns sincerely starting from `alive`; returns the survivors.
template <ProfileLike P>
inline Mask run_sincere(const P& p, std::span<const VoterIndex> turns, Mask alive) noexcept {
  for (auto v : turns) alive &= ~(Mask{1} << worst_remaining(p, v, alive));
  return alive;
}

template <ProfileLike P>
inline Candidate sincere_winner(const P& p, std::span<const VoterIndex> turns) noexcept {
  return static_cast<Candidate>(std::countr_zero(run_sincere(p, turns, full_mask(p.candidates()))));
}

}  // namespace detail

enum class PlayMode { sincere, strategic, oracle, mixed };

constexpr std::string_view to_string(PlayMode mode) noexcept {
  switch (mode) {
    case PlayMode::sincere: return "sincere";
    case PlayMode::strategic: return "strategic";
    case PlayMode::oracle: return "oracle";
    case PlayMode::mixed: return "mixed";
  }
  return "?";
}

/// What the recorded steps mean; the winner is the game outcome in every mode.
constexpr std::string_view trace_semantics(PlayMode mode) noexcept {
  switch (mode) {
    case PlayMode::sincere: return "sincere play of the sequence";
    case PlayMode::strategic: return "sincere play of the reversed sequence (SPNE outcome)";
    case PlayMode::oracle: return "equilibrium path found by backward induction";
    case PlayMode::mixed: return "sincere subsequence, then reversed strategic subsequence played sincerely";
  }
  return "";
}

struct GameStep {
  VoterIndex voter = 0;
  Candidate eliminated = 0;
  /// Backward induction only: other eliminations with the same subgame outcome.
  std::vector<Candidate> indifferent;

  friend bool operator==(const GameStep&, const GameStep&) = default;
};

struct GameTrace {
  PlayMode mode = PlayMode::sincere;
  std::vector<GameStep> steps;
  Candidate winner = 0;
};

/// Voters listed here play sincerely; everyone else is strategic.
struct BehaviorAssignment {
  std::vector<VoterIndex> sincere_set;

  bool is_sincere(VoterIndex v) const {
    return std::find(sincere_set.begin(), sincere_set.end(), v) != sincere_set.end();
  }

  void validate(std::size_t n) const {
    for (auto v : sincere_set)
      if (v >= n)
        throw error(errc::invalid_voter,
                    "sincere voter " + std::to_string(v + 1) + " exceeds n = " + std::to_string(n));
  }
};

namespace detail {

inline GameTrace trace_sincere(const PreferenceProfile& v, std::span<const VoterIndex> turns,
                               PlayMode mode, Mask alive, GameTrace trace = {}) {
  trace.mode = mode;
  for (auto voter : turns) {
    const auto c = worst_remaining(v, voter, alive);
    alive &= ~(Mask{1} << c);
    trace.steps.push_back({voter, c, {}});
  }
  trace.winner = static_cast<Candidate>(std::countr_zero(alive));
  return trace;
}

}  // namespace detail

/// Every voter eliminates her least preferred remaining candidate.
inline GameTrace sincere_play(const PreferenceProfile& v, const EliminationSequence& pi) {
  pi.validate(v.voters(), v.candidates());
  return detail::trace_sincere(v, pi.turns(), PlayMode::sincere, detail::full_mask(v.candidates()));
}

/// Outcome of every subgame-perfect equilibrium: sincere play of the
/// reversed sequence. The steps are those of the reversed sincere run, not
/// an equilibrium path of the original game tree.
inline GameTrace spne_outcome(const PreferenceProfile& v, const EliminationSequence& pi) {
  pi.validate(v.voters(), v.candidates());
  const auto rev = reverse(pi);
  return detail::trace_sincere(v, rev.turns(), PlayMode::strategic,
                               detail::full_mask(v.candidates()));
}

struct BackwardInductionOptions {
  /// Among payoff-equivalent eliminations, the candidate earliest in this
  /// order is eliminated. Empty means ascending ids.
  std::vector<Candidate> tie_break;
  std::size_t max_candidates = 10;
  /// Voters in the sincere set are not optimized; they play sincerely.
  BehaviorAssignment behavior;
};

/// Largest tree the memo table is allowed to cover, whatever the options say.
inline constexpr std::size_t backward_induction_hard_limit = 26;

/// Solves the game tree exactly. Each acting voter picks the elimination
/// whose subgame winner she ranks best; subgame winners are memoized by the
/// remaining-candidate mask (the depth is implied by its popcount).
inline GameTrace backward_induction(const PreferenceProfile& v, const EliminationSequence& pi,
                                    const BackwardInductionOptions& opts = {}) {
  const auto m = v.candidates();
  if (m > opts.max_candidates || m > backward_induction_hard_limit)
    throw error(errc::tree_too_large,
                std::to_string(m) + " candidates exceeds the backward-induction guard of " +
                    std::to_string(std::min(opts.max_candidates, backward_induction_hard_limit)));
  pi.validate(v.voters(), m);
  opts.behavior.validate(v.voters());

  std::vector<Candidate> order = opts.tie_break;
  if (order.empty()) {
    order.resize(m);
    std::iota(order.begin(), order.end(), Candidate{0});
  } else {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t c = 0; c < sorted.size(); ++c)
      if (sorted.size() != m || sorted[c] != c)
        throw error(errc::candidate_unknown, "tie-break order must list every candidate once");
  }

  std::vector<bool> sincere(v.voters(), false);
  for (auto s : opts.behavior.sincere_set) sincere[s] = true;

  using detail::Mask;
  constexpr std::int8_t unknown = -1;
  std::vector<std::int8_t> memo(std::size_t{1} << m, unknown);

  // Winner reached from `alive` when everyone plays optimally afterwards.
  auto solve = [&](auto&& self, Mask alive) -> Candidate {
    if (std::has_single_bit(alive)) return static_cast<Candidate>(std::countr_zero(alive));
    auto& slot = memo[alive];
    if (slot != unknown) return static_cast<Candidate>(slot);
    const auto depth = m - static_cast<std::size_t>(std::popcount(alive));
    const auto voter = pi[depth];
    Candidate best_winner = 0;
    if (sincere[voter]) {
      const auto c = detail::worst_remaining(v, voter, alive);
      best_winner = self(self, alive & ~(Mask{1} << c));
    } else {
      std::size_t best_pos = m;
      for (auto c : order) {
        if (!((alive >> c) & 1u)) continue;
        const auto w = self(self, alive & ~(Mask{1} << c));
        const auto pos = v.position(voter, w);
        if (pos < best_pos) {
          best_pos = pos;
          best_winner = w;
        }
      }
    }
    slot = static_cast<std::int8_t>(best_winner);
    return best_winner;
  };

  GameTrace trace;
  trace.mode = PlayMode::oracle;
  Mask alive = detail::full_mask(m);
  for (std::size_t depth = 0; depth + 1 < m; ++depth) {
    const auto voter = pi[depth];
    GameStep step{voter, 0, {}};
    if (sincere[voter]) {
      step.eliminated = detail::worst_remaining(v, voter, alive);
    } else {
      std::size_t best_pos = m;
      std::vector<std::pair<Candidate, std::size_t>> options;
      for (auto c : order) {
        if (!((alive >> c) & 1u)) continue;
        const auto pos = v.position(voter, solve(solve, alive & ~(Mask{1} << c)));
        options.emplace_back(c, pos);
        if (pos < best_pos) {
          best_pos = pos;
          step.eliminated = c;
        }
      }
      for (auto [c, pos] : options)
        if (pos == best_pos && c != step.eliminated) step.indifferent.push_back(c);
    }
    alive &= ~(Mask{1} << step.eliminated);
    trace.steps.push_back(std::move(step));
  }
  trace.winner = static_cast<Candidate>(std::countr_zero(alive));
  return trace;
}

/// Sincere voters' subsequence runs first, in its original order, on the
/// full candidate set; the strategic subsequence then runs reversed and
/// sincerely on what is left.
inline GameTrace mixed_play(const PreferenceProfile& v, const EliminationSequence& pi,
                            const BehaviorAssignment& behavior) {
  pi.validate(v.voters(), v.candidates());
  behavior.validate(v.voters());
  std::vector<VoterIndex> sincere_part, strategic_part;
  for (auto voter : pi)
    (behavior.is_sincere(voter) ? sincere_part : strategic_part).push_back(voter);
  std::reverse(strategic_part.begin(), strategic_part.end());
  auto trace = detail::trace_sincere(v, sincere_part, PlayMode::mixed,
                                     detail::full_mask(v.candidates()));
  detail::Mask alive = detail::full_mask(v.candidates());
  for (const auto& s : trace.steps) alive &= ~(detail::Mask{1} << s.eliminated);
  return detail::trace_sincere(v, strategic_part, PlayMode::mixed, alive, std::move(trace));
}

}  // namespace elimgame
