#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string_view>
#include <vector>

#include "elimgame/welfare.hpp"

namespace elimgame {

enum class TightMode { poa, sr };

constexpr std::string_view to_string(TightMode mode) noexcept {
  return mode == TightMode::poa ? "POA_TIGHT" : "SR_TIGHT";
}

/// Structure behind a generated bound-attaining profile.
struct ExtremalSpec {
  TightMode mode = TightMode::poa;
  std::size_t n = 0, m = 0;
  EliminationSequence sequence;
  std::size_t o_max = 0;
  VoterIndex x = 0;  ///< most frequent voter (lowest index on ties)
  /// a (Borda optimum) in POA mode, c (sincere winner) in SR mode.
  Candidate favoured = 0;
  Candidate spne_winner = 1;  ///< b
  /// SR only: e, ranked below b by both x and the partner voter y.
  std::optional<Candidate> shared;
  std::optional<VoterIndex> partner;
  /// SR only: e is x's k-th and y's l-th least preferred candidate.
  std::size_t shared_rank_x = 0, shared_rank_y = 0;
};

struct ExtremalInstance {
  ExtremalSpec spec;
  PreferenceProfile profile;
};

struct TightnessReport {
  bool attained = false;
  Ratio achieved;
  Ratio bound;
};

/// Recomputes the relevant ratio from play and compares with the closed form.
inline TightnessReport verify_tight(const PreferenceProfile& v, const EliminationSequence& pi,
                                    TightMode mode) {
  const auto occ = occurrences(pi, v.voters());
  TightnessReport r;
  if (mode == TightMode::poa) {
    r.achieved = ratio_ab(v, pi);
    r.bound = poa_formula(v.voters(), v.candidates(), occ.o_max);
  } else {
    r.achieved = ratio_cb(v, pi);
    r.bound = sr_upper_bound(v.voters(), v.candidates(), occ.o_max);
  }
  r.attained = r.achieved == r.bound;
  return r;
}

/// Voters sorted by decreasing occurrence count, lowest index first on ties.
inline std::vector<VoterIndex> voters_by_occurrence(const OccurrenceTable& occ) {
  std::vector<VoterIndex> order(occ.counts.size());
  std::iota(order.begin(), order.end(), VoterIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](VoterIndex a, VoterIndex b) { return occ.counts[a] > occ.counts[b]; });
  return order;
}

/// Block sequence: the most frequent voter plays all her turns first, then
/// the next most frequent, and so on. counts[i] is voter i's turn count.
inline EliminationSequence block_sequence(std::span<const std::size_t> counts) {
  OccurrenceTable occ{std::vector<std::size_t>(counts.begin(), counts.end()), 0};
  std::vector<VoterIndex> turns;
  for (auto v : voters_by_occurrence(occ)) turns.insert(turns.end(), counts[v], v);
  return EliminationSequence(std::move(turns));
}

namespace detail {

inline void check_extremal_input(std::size_t n, std::size_t m, const EliminationSequence& pi) {
  pi.validate(n, m);
  if (n < 2 || m < 2)
    throw error(errc::out_of_domain, "tight instances need n >= 2 and m >= 2");
}

/// Full ranking: `top` (if any), the free candidates in id order, then
/// `pivot` followed by `tail` (best to worst).
inline Vote assemble_vote(std::size_t m, std::optional<Candidate> top, std::span<const Candidate> pivot,
                          std::span<const Candidate> tail) {
  std::vector<bool> used(m, false);
  std::vector<Candidate> ranking;
  if (top) used[*top] = true;
  for (auto c : pivot) used[c] = true;
  for (auto c : tail) used[c] = true;
  if (top) ranking.push_back(*top);
  for (std::size_t c = 0; c < m; ++c)
    if (!used[c]) ranking.push_back(static_cast<Candidate>(c));
  ranking.insert(ranking.end(), pivot.begin(), pivot.end());
  ranking.insert(ranking.end(), tail.begin(), tail.end());
  return Vote(std::move(ranking));
}

}  // namespace detail

/// Profile reaching the price of anarchy: b sits at rank m - O_i for every
/// voter i, a directly below b for the most frequent voter x and on top for
/// everyone else, and no candidate lies below b for two voters.
inline ExtremalInstance gen_poa_tight(std::size_t n, std::size_t m, const EliminationSequence& pi) {
  detail::check_extremal_input(n, m, pi);
  const auto occ = occurrences(pi, n);
  ExtremalSpec spec;
  spec.mode = TightMode::poa;
  spec.n = n;
  spec.m = m;
  spec.sequence = pi;
  spec.o_max = occ.o_max;
  spec.x = occ.most_frequent();
  spec.favoured = 0;
  spec.spne_winner = 1;
  const Candidate a = spec.favoured, b = spec.spne_winner;

  // below[i]: the O_i candidates voter i ranks under b, best first.
  std::vector<std::vector<Candidate>> below(n);
  below[spec.x].push_back(a);
  Candidate next = 2;
  for (auto v : voters_by_occurrence(occ))
    while (below[v].size() < occ.counts[v]) {
      if (next >= m) throw error(errc::unsatisfiable, "not enough candidates for the below-b slots");
      below[v].push_back(next++);
    }

  std::vector<Vote> votes;
  const std::array<Candidate, 1> pivot{b};
  for (std::size_t i = 0; i < n; ++i) {
    const bool is_x = i == spec.x;
    votes.push_back(detail::assemble_vote(m, is_x ? std::nullopt : std::optional<Candidate>(a), pivot, below[i]));
  }
  ExtremalInstance out{spec, PreferenceProfile(std::move(votes))};
  if (!verify_tight(out.profile, pi, TightMode::poa).attained)
    throw error(errc::unsatisfiable, "constructed profile misses the price-of-anarchy bound");
  return out;
}

/// Profile reaching the sincerity-ratio bound. For the most frequent voter
/// x, b sits right above c with O_max candidates below c; every other voter
/// ranks c first and b at m - O_i. Exactly one candidate e is below b for
/// both x and one partner y, placed so that x removes e first when the
/// sequence is played forwards and y removes it first when reversed.
inline ExtremalInstance gen_sr_tight(std::size_t n, std::size_t m, const EliminationSequence& pi) {
  detail::check_extremal_input(n, m, pi);
  const auto occ = occurrences(pi, n);
  const auto x = occ.most_frequent();
  const auto ox = occ.o_max;
  if (ox + 1 >= m)
    throw error(errc::structure_unsatisfiable, "the most frequent voter plays every turn");

  std::vector<std::vector<std::size_t>> turns_of(n);
  for (std::size_t t = 0; t < pi.size(); ++t) turns_of[pi[t]].push_back(t);

  // e is x's k-th worst and y's l-th worst. Forwards x's k-th turn must come
  // first; reversed, y's l-th-from-last turn must come after x's k-th-from-last.
  std::optional<std::tuple<VoterIndex, std::size_t, std::size_t>> placement;
  for (std::size_t y = 0; y < n && !placement; ++y) {
    const auto oy = occ.counts[y];
    if (y == x || oy == 0) continue;
    for (std::size_t k = 1; k <= ox && !placement; ++k)
      for (std::size_t l = 1; l <= oy && !placement; ++l) {
        const bool forward_ok = turns_of[x][k - 1] < turns_of[y][l - 1];
        const bool reversed_ok = turns_of[y][oy - l] > turns_of[x][ox - k];
        if (forward_ok && reversed_ok) placement.emplace(static_cast<VoterIndex>(y), k, l);
      }
  }
  if (!placement)
    throw error(errc::structure_unsatisfiable,
                "no voter pair can share the doubly-dominated candidate under sequence " +
                    pi.to_string());
  const auto [y, k, l] = *placement;

  ExtremalSpec spec;
  spec.mode = TightMode::sr;
  spec.n = n;
  spec.m = m;
  spec.sequence = pi;
  spec.o_max = ox;
  spec.x = x;
  spec.favoured = 0;
  spec.spne_winner = 1;
  spec.shared = 2;
  spec.partner = y;
  spec.shared_rank_x = k;
  spec.shared_rank_y = l;
  const Candidate c = spec.favoured, b = spec.spne_winner, e = *spec.shared;

  // Worst-first lists of the candidates below c (for x) or below b.
  std::vector<std::vector<Candidate>> worst_first(n);
  Candidate next = 3;
  for (auto v : voters_by_occurrence(occ)) {
    const std::size_t need = occ.counts[v] - (v == x || v == y ? 1 : 0);
    for (std::size_t s = 0; s < need; ++s) {
      if (next >= m) throw error(errc::structure_unsatisfiable, "not enough candidates for the slots");
      worst_first[v].push_back(next++);
    }
  }
  worst_first[x].insert(worst_first[x].begin() + static_cast<std::ptrdiff_t>(k - 1), e);
  worst_first[y].insert(worst_first[y].begin() + static_cast<std::ptrdiff_t>(l - 1), e);

  std::vector<Vote> votes;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Candidate> tail(worst_first[i].rbegin(), worst_first[i].rend());
    if (i == x) {
      const std::array<Candidate, 2> pivot{b, c};
      votes.push_back(detail::assemble_vote(m, std::nullopt, pivot, tail));
    } else {
      const std::array<Candidate, 1> pivot{b};
      votes.push_back(detail::assemble_vote(m, c, pivot, tail));
    }
  }
  ExtremalInstance out{spec, PreferenceProfile(std::move(votes))};
  if (!verify_tight(out.profile, pi, TightMode::sr).attained)
    throw error(errc::structure_unsatisfiable, "constructed profile misses the sincerity-ratio bound");
  return out;
}

inline ExtremalInstance gen_tight(TightMode mode, std::size_t n, std::size_t m, const EliminationSequence& pi) {
  return mode == TightMode::poa ? gen_poa_tight(n, m, pi) : gen_sr_tight(n, m, pi);
}

}  // namespace elimgame
