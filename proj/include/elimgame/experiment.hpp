#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>

#include "elimgame/cultures.hpp"
#include "elimgame/welfare.hpp"

namespace elimgame {

struct ExperimentConfig {
  std::size_t n = 0, m = 0;
  EliminationSequence sequence;
  RatioMode mode = RatioMode::ab;
  CultureSpec culture;
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::size_t histogram_bins = 50;
  bool fix_first = true;
  std::uint64_t budget = default_enumeration_budget;

  void validate() const {
    if (n == 0) throw error(errc::invalid_profile, "n must be at least 1");
    sequence.validate(n, m);
    culture.validate(m);
    if (samples < 1) throw error(errc::out_of_domain, "samples must be at least 1");
    if (workers < 1) throw error(errc::out_of_domain, "workers must be at least 1");
    if (histogram_bins < 1) throw error(errc::out_of_domain, "bins must be at least 1");
  }

  /// Closed-form worst case for the configured ratio; absent when n < 2.
  std::optional<Ratio> bound() const {
    const auto o_max = occurrences(sequence, n).o_max;
    if (n < 2 || m < 2) return std::nullopt;
    return bound_for(mode, n, m, o_max);
  }
};

/// ELIMGAME_BUDGET overrides the default enumeration budget.
inline std::uint64_t budget_from_env() {
  if (const char* env = std::getenv("ELIMGAME_BUDGET")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return default_enumeration_budget;
}

struct ExperimentResult {
  RatioStats stats;
  RatioTally tally;
  /// Enumeration rank or sample number of the witness.
  std::uint64_t witness_index = 0;
};

namespace detail {
inline RatioStats summarize(const RatioTally& tally, PreferenceProfile witness) {
  RatioStats s;
  s.mean = tally.mean();
  s.std = tally.stddev();
  s.max = tally.max();
  s.max_witness = std::move(witness);
  s.count = tally.count();
  return s;
}
}  // namespace detail

/// All profiles for (n, m) with the configured fix-first convention.
inline ExperimentResult run_exhaustive(const ExperimentConfig& cfg) {
  cfg.sequence.validate(cfg.n, cfg.m);
  SweepOptions opts;
  opts.budget = cfg.budget;
  opts.workers = cfg.workers;
  ExperimentResult r;
  r.tally = tally_exhaustive(cfg.sequence, cfg.n, cfg.m, cfg.mode, cfg.fix_first, opts);
  r.witness_index = r.tally.max_index();
  r.stats = detail::summarize(r.tally, profile_at(cfg.n, cfg.m, cfg.fix_first, r.witness_index));
  return r;
}

/// Profile number `index` of a Monte-Carlo run: a pure function of
/// (seed, index, culture), independent of which worker draws it.
inline void draw_sample(ProfileBuffer& buf, const CultureSpec& culture,
                        const std::optional<MallowsSampler>& mallows, std::uint64_t seed,
                        std::uint64_t index) {
  RngStream rng(seed, index);
  if (culture.kind == CultureKind::mallows)
    sample_mallows_into(buf, culture, *mallows, rng);
  else
    sample_impartial_into(buf, rng);
}

inline PreferenceProfile sample_at(const ExperimentConfig& cfg, std::uint64_t index) {
  ProfileBuffer buf(cfg.n, cfg.m);
  std::optional<MallowsSampler> mallows;
  if (cfg.culture.kind == CultureKind::mallows) mallows.emplace(cfg.m, cfg.culture.phi);
  draw_sample(buf, cfg.culture, mallows, cfg.seed, index);
  return buf.to_profile();
}

inline ExperimentResult run_montecarlo(const ExperimentConfig& cfg) {
  cfg.validate();
  constexpr std::uint64_t chunk = 4096;
  const auto chunks = (cfg.samples + chunk - 1) / chunk;
  const auto workers = std::max<std::size_t>(1, std::min<std::uint64_t>(cfg.workers, chunks));
  const auto max_score = cfg.n * (cfg.m - 1);
  const detail::RatioEvaluator eval(cfg.sequence, cfg.mode);
  std::optional<MallowsSampler> mallows;
  if (cfg.culture.kind == CultureKind::mallows) mallows.emplace(cfg.m, cfg.culture.phi);

  std::vector<RatioTally> partial(workers, RatioTally(max_score));
  std::vector<ProfileBuffer> buffers(workers, ProfileBuffer(cfg.n, cfg.m));
  detail::run_chunks(workers, chunks, [&](std::size_t w, std::uint64_t c) {
    const auto begin = c * chunk;
    const auto end = std::min(cfg.samples, begin + chunk);
    for (auto i = begin; i < end; ++i) {
      draw_sample(buffers[w], cfg.culture, mallows, cfg.seed, i);
      const auto [num, den] = eval.scores(buffers[w]);
      partial[w].add(num, den, i);
    }
  });
  ExperimentResult r;
  r.tally = RatioTally(max_score);
  for (const auto& t : partial) r.tally.merge(t);
  r.witness_index = r.tally.max_index();
  r.stats = detail::summarize(r.tally, sample_at(cfg, r.witness_index));
  return r;
}

}  // namespace elimgame
