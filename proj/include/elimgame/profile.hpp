#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "elimgame/error.hpp"

namespace elimgame {

// Candidates and voters are 0-based everywhere inside the library; text
// formats are 1-based for voters and label-based for candidates.
using Candidate = std::uint16_t;
using VoterIndex = std::uint16_t;

/// Remaining-candidate sets are 64-bit masks.
inline constexpr std::size_t max_candidates = 64;

inline std::string default_label(Candidate c, std::size_t m) {
  if (m <= 26) return std::string(1, static_cast<char>('a' + c));
  return "c" + std::to_string(c + 1);
}

/// Anything that exposes rankings (best first) and 0-based positions.
template <class P>
concept ProfileLike = requires(const P& p, std::size_t i, Candidate c) {
  { p.voters() } -> std::convertible_to<std::size_t>;
  { p.candidates() } -> std::convertible_to<std::size_t>;
  { p.ranking(i) } -> std::convertible_to<std::span<const Candidate>>;
  { p.position(i, c) } -> std::convertible_to<std::size_t>;
};

/// A strict linear order over candidates 0..m-1, best first. Keeps the
/// inverse permutation so rank lookups are O(1).
class Vote {
 public:
  explicit Vote(std::vector<Candidate> ranking) : ranking_(std::move(ranking)) {
    if (ranking_.size() > max_candidates)
      throw error(errc::invalid_profile,
                  "at most " + std::to_string(max_candidates) + " candidates are supported");
    positions_.assign(ranking_.size(), 0xff);
    for (std::size_t pos = 0; pos < ranking_.size(); ++pos) {
      const auto c = ranking_[pos];
      if (c >= ranking_.size() || positions_[c] != 0xff)
        throw error(errc::invalid_profile, "vote is not a permutation of 0..m-1");
      positions_[c] = static_cast<std::uint8_t>(pos);
    }
  }

  static Vote identity(std::size_t m) {
    std::vector<Candidate> r(m);
    std::iota(r.begin(), r.end(), Candidate{0});
    return Vote(std::move(r));
  }

  std::size_t size() const noexcept { return ranking_.size(); }
  std::span<const Candidate> ranking() const noexcept { return ranking_; }
  Candidate at(std::size_t pos) const { return ranking_.at(pos); }

  /// 1 = best, m = worst.
  int rank(Candidate c) const {
    if (c >= positions_.size())
      throw error(errc::candidate_unknown, "candidate " + std::to_string(c) + " not in vote");
    return positions_[c] + 1;
  }

  std::size_t position(Candidate c) const noexcept { return positions_[c]; }

  bool prefers(Candidate lhs, Candidate rhs) const { return rank(lhs) < rank(rhs); }

  friend bool operator==(const Vote& a, const Vote& b) { return a.ranking_ == b.ranking_; }
  friend auto operator<=>(const Vote& a, const Vote& b) { return a.ranking_ <=> b.ranking_; }

 private:
  std::vector<Candidate> ranking_;
  std::vector<std::uint8_t> positions_;
};

inline int rank(Candidate c, const Vote& v) { return v.rank(c); }

/// n strict rankings over the same m candidates, plus display labels.
/// Immutable once built.
class PreferenceProfile {
 public:
  explicit PreferenceProfile(std::vector<Vote> votes, std::vector<std::string> labels = {})
      : votes_(std::move(votes)), labels_(std::move(labels)) {
    if (votes_.empty()) throw error(errc::invalid_profile, "a profile needs at least one voter");
    const auto m = votes_.front().size();
    for (const auto& v : votes_)
      if (v.size() != m)
        throw error(errc::invalid_profile, "all votes must rank the same candidates");
    if (!labels_.empty() && labels_.size() != m)
      throw error(errc::invalid_profile, "label count differs from candidate count");
    if (labels_.empty())
      for (std::size_t c = 0; c < m; ++c)
        labels_.push_back(default_label(static_cast<Candidate>(c), m));
  }

  /// Builds from the abridged notation "abcd": each character is a label;
  /// candidate ids follow the order of first appearance in the first vote.
  static PreferenceProfile from_compact(std::initializer_list<std::string_view> votes) {
    std::vector<std::vector<std::string>> tokens;
    for (auto v : votes) {
      auto& row = tokens.emplace_back();
      for (char ch : v) row.emplace_back(1, ch);
    }
    return from_tokens(tokens);
  }

  static PreferenceProfile from_tokens(const std::vector<std::vector<std::string>>& rows,
                                       std::span<const std::size_t> line_numbers = {}) {
    auto line_of = [&](std::size_t i) { return i < line_numbers.size() ? line_numbers[i] : 0; };
    if (rows.empty()) throw error(errc::parse_error, "profile has no votes");
    std::vector<std::string> labels = rows.front();
    std::unordered_map<std::string, Candidate> ids;
    for (std::size_t c = 0; c < labels.size(); ++c)
      if (!ids.emplace(labels[c], static_cast<Candidate>(c)).second)
        throw error(errc::parse_error, "duplicate label '" + labels[c] + "'", line_of(0));
    if (labels.size() > max_candidates)
      throw error(errc::parse_error, "too many candidates", line_of(0));
    std::vector<Vote> votes;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != labels.size())
        throw error(errc::parse_error,
                    "expected " + std::to_string(labels.size()) + " candidates, got " +
                        std::to_string(rows[i].size()),
                    line_of(i));
      std::vector<Candidate> ranking;
      for (const auto& tok : rows[i]) {
        auto it = ids.find(tok);
        if (it == ids.end())
          throw error(errc::parse_error, "unknown candidate '" + tok + "'", line_of(i));
        ranking.push_back(it->second);
      }
      try {
        votes.emplace_back(std::move(ranking));
      } catch (const error&) {
        throw error(errc::parse_error, "vote repeats a candidate", line_of(i));
      }
    }
    return PreferenceProfile(std::move(votes), std::move(labels));
  }

  std::size_t voters() const noexcept { return votes_.size(); }
  std::size_t candidates() const noexcept { return votes_.front().size(); }
  const Vote& vote(std::size_t i) const { return votes_.at(i); }
  const std::vector<Vote>& votes() const noexcept { return votes_; }
  std::span<const Candidate> ranking(std::size_t i) const noexcept { return votes_[i].ranking(); }
  std::size_t position(std::size_t i, Candidate c) const noexcept { return votes_[i].position(c); }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(Candidate c) const { return labels_.at(c); }

  /// Same votes, labels reset to the defaults.
  PreferenceProfile relabeled_default() const { return PreferenceProfile(votes_); }

  friend bool operator==(const PreferenceProfile& a, const PreferenceProfile& b) {
    return a.votes_ == b.votes_;
  }

 private:
  std::vector<Vote> votes_;
  std::vector<std::string> labels_;
};

/// Profile text: one voter per line, labels separated by spaces, best
/// first. Lines starting with '#' and blank lines are skipped.
inline PreferenceProfile parse_profile(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    auto& row = rows.emplace_back();
    for (std::string tok; ss >> tok;) row.push_back(tok);
    lines.push_back(lineno);
  }
  return PreferenceProfile::from_tokens(rows, lines);
}

inline PreferenceProfile parse_profile(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_profile(in);
}

inline std::string format_profile(const PreferenceProfile& p) {
  std::string out;
  for (const auto& v : p.votes()) {
    for (std::size_t pos = 0; pos < v.size(); ++pos) {
      if (pos) out += ' ';
      out += p.label(v.at(pos));
    }
    out += '\n';
  }
  return out;
}

inline int borda_contribution(std::size_t m, int rank) { return static_cast<int>(m) - rank; }

/// S_B(c, V) = sum over voters of (m - rank).
inline long borda_score(Candidate c, const PreferenceProfile& v) {
  const auto m = v.candidates();
  if (c >= m) throw error(errc::candidate_unknown, "candidate " + std::to_string(c) + " >= m");
  long s = 0;
  for (std::size_t i = 0; i < v.voters(); ++i) s += static_cast<long>(m - 1 - v.position(i, c));
  return s;
}

template <ProfileLike P>
void borda_scores_into(const P& p, std::span<int> out) {
  const auto m = p.candidates();
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(m), 0);
  for (std::size_t i = 0; i < p.voters(); ++i) {
    const auto r = p.ranking(i);
    for (std::size_t pos = 0; pos < m; ++pos) out[r[pos]] += static_cast<int>(m - 1 - pos);
  }
}

inline std::vector<int> borda_scores(const PreferenceProfile& p) {
  std::vector<int> out(p.candidates());
  borda_scores_into(p, std::span<int>(out));
  return out;
}

/// Voter turns pi(1..m-1), stored 0-based. Validity depends on the game,
/// so checks happen through validate().
class EliminationSequence {
 public:
  EliminationSequence() = default;
  explicit EliminationSequence(std::vector<VoterIndex> turns) : turns_(std::move(turns)) {}

  /// From 1-based voter numbers as written in tables ("1112221" -> {1,1,1,2,2,2,1}).
  static EliminationSequence from_one_based(std::initializer_list<int> voters) {
    std::vector<VoterIndex> t;
    for (int v : voters) {
      if (v < 1) throw error(errc::invalid_voter, "voter numbers start at 1");
      t.push_back(static_cast<VoterIndex>(v - 1));
    }
    return EliminationSequence(std::move(t));
  }

  std::size_t size() const noexcept { return turns_.size(); }
  bool empty() const noexcept { return turns_.empty(); }
  VoterIndex operator[](std::size_t i) const noexcept { return turns_[i]; }
  std::span<const VoterIndex> turns() const noexcept { return turns_; }
  auto begin() const noexcept { return turns_.begin(); }
  auto end() const noexcept { return turns_.end(); }

  /// Smallest voter count this sequence is valid for.
  std::size_t min_voters() const noexcept {
    return turns_.empty() ? 1 : std::size_t{*std::max_element(turns_.begin(), turns_.end())} + 1u;
  }

  void validate(std::size_t n, std::size_t m) const {
    if (m == 0 || turns_.size() != m - 1)
      throw error(errc::sequence_length_mismatch,
                  "sequence has " + std::to_string(turns_.size()) + " turns, game with " +
                      std::to_string(m) + " candidates needs " +
                      std::to_string(m == 0 ? 0 : m - 1));
    for (auto v : turns_)
      if (v >= n)
        throw error(errc::invalid_voter,
                    "voter " + std::to_string(v + 1) + " exceeds n = " + std::to_string(n));
  }

  /// "1,2,3,1"
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < turns_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(turns_[i] + 1);
    }
    return s;
  }

  /// "1231" when every voter number is a single digit, otherwise "1-2-10".
  std::string to_compact() const {
    const bool digits = std::all_of(turns_.begin(), turns_.end(), [](auto v) { return v < 9; });
    std::string s;
    for (std::size_t i = 0; i < turns_.size(); ++i) {
      if (!digits && i) s += '-';
      s += std::to_string(turns_[i] + 1);
    }
    return s;
  }

  friend bool operator==(const EliminationSequence&, const EliminationSequence&) = default;

 private:
  std::vector<VoterIndex> turns_;
};

/// Accepts "1,2,3,1" (canonical) or the table notation "1231" when the text
/// has no comma and more than one character.
inline EliminationSequence parse_sequence(std::string_view text) {
  std::vector<VoterIndex> turns;
  auto push = [&](std::string_view tok) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
      throw error(errc::parse_error, "bad voter number '" + std::string(tok) + "' in sequence");
    const long v = std::stol(std::string(tok));
    if (v < 1 || v > 65535) throw error(errc::parse_error, "voter numbers start at 1");
    turns.push_back(static_cast<VoterIndex>(v - 1));
  };
  if (text.empty()) return EliminationSequence{};
  if (text.find(',') == std::string_view::npos && text.size() > 1) {
    for (char ch : text) push(std::string_view(&ch, 1));
  } else {
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      auto tok = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
      // trailing comma marks a single multi-digit voter: "12,"
      if (!(tok.empty() && comma == std::string_view::npos && !turns.empty())) push(tok);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  return EliminationSequence(std::move(turns));
}

inline EliminationSequence reverse(const EliminationSequence& pi) {
  std::vector<VoterIndex> t(pi.begin(), pi.end());
  std::reverse(t.begin(), t.end());
  return EliminationSequence(std::move(t));
}

inline bool is_palindromic(const EliminationSequence& pi) {
  return std::equal(pi.begin(), pi.begin() + static_cast<std::ptrdiff_t>(pi.size() / 2),
                    std::make_reverse_iterator(pi.end()));
}

struct OccurrenceTable {
  std::vector<std::size_t> counts;  // indexed by voter
  std::size_t o_max = 0;

  /// Lowest-indexed voter reaching o_max.
  VoterIndex most_frequent() const {
    const auto it = std::max_element(counts.begin(), counts.end());
    return static_cast<VoterIndex>(it - counts.begin());
  }
};

inline OccurrenceTable occurrences(const EliminationSequence& pi, std::size_t n) {
  OccurrenceTable t;
  t.counts.assign(n, 0);
  for (auto v : pi) {
    if (v >= n)
      throw error(errc::invalid_voter,
                  "voter " + std::to_string(v + 1) + " exceeds n = " + std::to_string(n));
    ++t.counts[v];
  }
  t.o_max = t.counts.empty() ? 0 : *std::max_element(t.counts.begin(), t.counts.end());
  return t;
}

}  // namespace elimgame
