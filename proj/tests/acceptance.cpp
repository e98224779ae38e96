// Acceptance run: prints one PASS/FAIL verdict per criterion, with detail
// lines indented underneath. Exits non-zero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "elimgame/elimgame.hpp"
#include "elimgame/report.hpp"

using namespace elimgame;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    details.push_back(std::string(ok ? "ok   " : "MISS ") + what);
    pass = pass && ok;
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

ExperimentConfig config(const char* seq, std::size_t n, std::size_t m, RatioMode mode) {
  ExperimentConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.sequence = parse_sequence(seq);
  cfg.mode = mode;
  cfg.workers = workers();
  return cfg;
}

class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + gen_() % (hi - lo + 1); }
  PreferenceProfile profile(std::size_t n, std::size_t m) {
    std::vector<Vote> votes;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Candidate> r(m);
      std::iota(r.begin(), r.end(), Candidate{0});
      std::shuffle(r.begin(), r.end(), gen_);
      votes.emplace_back(std::move(r));
    }
    return PreferenceProfile(std::move(votes));
  }
  std::vector<VoterIndex> turns(std::size_t n, std::size_t len) {
    std::vector<VoterIndex> t(len);
    for (auto& v : t) v = static_cast<VoterIndex>(gen_() % n);
    return t;
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------

Verdict spne_equivalence() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  Random rng(1);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 10'000; ++trial) {
    const auto n = rng.between(2, 3), m = rng.between(3, 6);
    const auto p = rng.profile(n, m);
    const EliminationSequence pi(rng.turns(n, m - 1));
    mismatches += spne_outcome(p, pi).winner != backward_induction(p, pi).winner;
  }
  v.check(mismatches == 0, fmt("10000 random instances, %zu mismatches", mismatches));

  std::size_t checked = 0;
  mismatches = 0;
  for (std::size_t m = 2; m <= 4; ++m)
    for (unsigned bits = 0; bits < (1u << (m - 1)); ++bits) {
      std::vector<VoterIndex> t;
      for (std::size_t k = 0; k + 1 < m; ++k) t.push_back(static_cast<VoterIndex>(bits >> k & 1u));
      const EliminationSequence pi(t);
      for (const auto& p : enumerate_profiles(2, m, false)) {
        ++checked;
        mismatches += spne_outcome(p, pi).winner != backward_induction(p, pi).winner;
      }
    }
  v.check(mismatches == 0, fmt("exhaustive n=2, m<=4: %zu games, %zu mismatches", checked, mismatches));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.check(secs < 60, fmt("runtime %.2f s (limit 60 s)", secs));
  return v;
}

struct ExhaustiveRow {
  const char* seq;
  std::size_t n, m;
  double mean;  // as printed, two decimals
  Ratio max;
};

Verdict optimum_table() {
  Verdict v;
  const ExhaustiveRow rows[] = {
      {"1112221", 2, 8, 1.02, Ratio(10, 7)}, {"1222111", 2, 8, 1.03, Ratio(10, 7)},
      {"1122111", 2, 8, 1.06, Ratio(11, 7)}, {"123123", 3, 7, 1.06, Ratio(13, 6)},
      {"123321", 3, 7, 1.06, Ratio(13, 6)},  {"111223", 3, 7, 1.06, Ratio(14, 6)},
      {"112233", 3, 7, 1.07, Ratio(13, 6)},
  };
  for (const auto& row : rows) {
    const auto start = std::chrono::steady_clock::now();
    const auto cfg = config(row.seq, row.n, row.m, RatioMode::ab);
    const auto r = run_exhaustive(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double limit = row.n == 2 ? 5.0 : 600.0;
    v.check(r.stats.max == row.max,
            fmt("(%zu,%zu) %s max %s, expected %s", row.n, row.m, row.seq, r.stats.max.to_string().c_str(),
                row.max.to_string().c_str()));
    v.check(std::abs(round2(r.stats.mean) - row.mean) <= 0.005,
            fmt("(%zu,%zu) %s mean %.4f +- %.4f, expected %.2f", row.n, row.m, row.seq, r.stats.mean, r.stats.std,
                row.mean));
    v.check(secs < limit, fmt("(%zu,%zu) %s runtime %.2f s (limit %.0f s)", row.n, row.m, row.seq, secs, limit));
    if (std::abs(round2(r.stats.mean) - row.mean) > 0.005) {
      auto rev = cfg;
      rev.sequence = reverse(cfg.sequence);
      const auto rr = run_exhaustive(rev);
      v.note(fmt("diagnostic: reversed sequence %s gives mean %.4f +- %.4f", rev.sequence.to_compact().c_str(),
                 rr.stats.mean, rr.stats.std));
    }
  }
  return v;
}

Verdict sincere_table() {
  Verdict v;
  const ExhaustiveRow rows[] = {
      {"1112221", 2, 8, 1.02, Ratio(11, 8)}, {"1222111", 2, 8, 0.99, Ratio(10, 8)},
      {"1122111", 2, 8, 0.99, Ratio(9, 8)},  {"123123", 3, 7, 1.01, Ratio(14, 7)},
      {"123321", 3, 7, 1.00, Ratio(1, 1)},   {"111223", 3, 7, 1.05, Ratio(15, 7)},
      {"112233", 3, 7, 1.01, Ratio(14, 7)},
  };
  for (const auto& row : rows) {
    const auto r = run_exhaustive(config(row.seq, row.n, row.m, RatioMode::cb));
    v.check(r.stats.max == row.max,
            fmt("(%zu,%zu) %s max %s, expected %s", row.n, row.m, row.seq, r.stats.max.to_string().c_str(),
                row.max.to_string().c_str()));
    v.note(fmt("mean %.4f +- %.4f (table %.2f)", r.stats.mean, r.stats.std, row.mean));
    if (std::string(row.seq) == "123321")
      v.check(r.stats.mean == 1.0 && r.stats.std == 0.0,
              fmt("palindrome mean %.17g std %.17g, expected exactly 1 and 0", r.stats.mean, r.stats.std));
  }
  return v;
}

Verdict closed_forms() {
  Verdict v;
  struct Row {
    const char* seq;
    std::size_t n, m;
    std::optional<Ratio> poa, ub;
  };
  const Row rows[] = {
      {"1112221", 2, 8, Ratio(10, 7), Ratio(11, 8)},  {"1222111", 2, 8, Ratio(10, 7), Ratio(11, 8)},
      {"1122111", 2, 8, Ratio(11, 7), Ratio(12, 8)},  {"123123", 3, 7, Ratio(13, 6), Ratio(14, 7)},
      {"123321", 3, 7, Ratio(13, 6), Ratio(14, 7)},   {"111223", 3, 7, Ratio(14, 6), Ratio(15, 7)},
      {"112233", 3, 7, Ratio(13, 6), Ratio(14, 7)},   {"112321345", 5, 10, std::nullopt, Ratio(39, 10)},
      {"123114235", 5, 10, std::nullopt, Ratio(39, 10)}, {"123451243", 5, 10, std::nullopt, Ratio(38, 10)},
      {"111222345", 5, 10, std::nullopt, Ratio(39, 10)},
  };
  for (const auto& row : rows) {
    const auto o_max = occurrences(parse_sequence(row.seq), row.n).o_max;
    if (row.poa) {
      const auto got = poa_formula(row.n, row.m, o_max);
      v.check(got == *row.poa, fmt("%s PoA %s, expected %s", row.seq, got.to_string().c_str(),
                                   row.poa->to_string().c_str()));
    }
    const auto got = sr_upper_bound(row.n, row.m, o_max);
    v.check(got == *row.ub,
            fmt("%s U.B. %s, expected %s", row.seq, got.to_string().c_str(), row.ub->to_string().c_str()));
  }
  return v;
}

Verdict sampled_tables() {
  Verdict v;
  struct Cell {
    const char* seq;
    RatioMode mode;
    double phi;  // 1 means impartial culture
    double mean, std;
  };
  const Cell cells[] = {
      {"112321345", RatioMode::ab, 1.0, 1.10, 0.16}, {"123114235", RatioMode::ab, 1.0, 1.10, 0.16},
      {"123451243", RatioMode::ab, 1.0, 1.10, 0.16}, {"111222345", RatioMode::ab, 1.0, 1.05, 0.16},
      {"112321345", RatioMode::ab, 0.6, 1.03, 0.07}, {"123114235", RatioMode::ab, 0.6, 1.03, 0.07},
      {"123451243", RatioMode::ab, 0.6, 1.03, 0.12}, {"111222345", RatioMode::ab, 0.6, 1.03, 0.07},
      {"112321345", RatioMode::cb, 1.0, 1.04, 0.19}, {"123114235", RatioMode::cb, 1.0, 1.09, 0.17},
      {"123451243", RatioMode::cb, 1.0, 1.01, 0.15}, {"111222345", RatioMode::cb, 1.0, 1.05, 0.20},
      {"112321345", RatioMode::cb, 0.6, 1.00, 0.08}, {"123114235", RatioMode::cb, 0.6, 1.00, 0.06},
      {"123451243", RatioMode::cb, 0.6, 0.98, 0.10}, {"111222345", RatioMode::cb, 0.6, 1.00, 0.08},
  };
  for (const auto& c : cells) {
    auto cfg = config(c.seq, 5, 10, c.mode);
    cfg.culture = c.phi == 1.0 ? CultureSpec::impartial() : CultureSpec::mallows(c.phi);
    cfg.samples = 1'000'000;
    cfg.seed = 2024;
    const auto start = std::chrono::steady_clock::now();
    const auto r = run_montecarlo(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto label = fmt("%s %s %s", c.seq, std::string(to_string(c.mode)).c_str(),
                           c.phi == 1.0 ? "IC" : "M0.6");
    v.check(std::abs(r.stats.mean - c.mean) <= 0.01,
            fmt("%s mean %.4f, expected %.2f +- 0.01", label.c_str(), r.stats.mean, c.mean));
    v.check(std::abs(r.stats.std - c.std) <= 0.02,
            fmt("%s std %.4f, expected %.2f +- 0.02", label.c_str(), r.stats.std, c.std));
    v.check(secs < 300, fmt("%s runtime %.2f s", label.c_str(), secs));
  }
  return v;
}

Verdict low_dispersion() {
  Verdict v;
  for (double phi : {0.1, 0.3, 0.5})
    for (auto mode : {RatioMode::ab, RatioMode::cb}) {
      auto cfg = config("112321345", 5, 10, mode);
      cfg.culture = CultureSpec::mallows(phi);
      cfg.samples = 100'000;
      cfg.seed = 7;
      const auto r = run_montecarlo(cfg);
      const auto label = fmt("phi=%.1f %s", phi, std::string(to_string(mode)).c_str());
      v.check(std::abs(r.stats.mean - 1.0) <= 0.001,
              fmt("%s mean %.5f, expected 1.000 +- 0.001", label.c_str(), r.stats.mean));
      v.check(r.stats.std <= 0.005, fmt("%s std %.5f, expected <= 0.005", label.c_str(), r.stats.std));
    }
  return v;
}

Verdict extremal() {
  Verdict v;
  const ExhaustiveRow rows[] = {
      {"1112221", 2, 8, 0, Ratio(10, 7)}, {"1222111", 2, 8, 0, Ratio(10, 7)}, {"1122111", 2, 8, 0, Ratio(11, 7)},
      {"123123", 3, 7, 0, Ratio(13, 6)},  {"123321", 3, 7, 0, Ratio(13, 6)},  {"111223", 3, 7, 0, Ratio(14, 6)},
      {"112233", 3, 7, 0, Ratio(13, 6)},
  };
  for (const auto& row : rows) {
    const auto pi = parse_sequence(row.seq);
    const auto inst = gen_poa_tight(row.n, row.m, pi);
    const auto got = ratio_ab(inst.profile, pi);
    const auto formula = poa_formula(row.n, row.m, occurrences(pi, row.n).o_max);
    const bool oracle_agrees = backward_induction(inst.profile, pi).winner == inst.spec.spne_winner;
    v.check(got == formula && got == row.max && oracle_agrees,
            fmt("POA %s generated ratio %s, formula %s", row.seq, got.to_string().c_str(),
                formula.to_string().c_str()));
  }
  const auto pi = parse_sequence("1,1,2,1,3,1");
  const auto inst = gen_sr_tight(3, 7, pi);
  const auto& p = inst.profile;
  const auto sincere = sincere_play(p, pi).winner;
  const auto oracle = backward_induction(p, pi).winner;
  const auto s_sincere = borda_score(sincere, p), s_oracle = borda_score(oracle, p);
  v.check(s_sincere == 16 && s_oracle == 7 && ratio_cb(p, pi) == Ratio(16, 7),
          fmt("SR 1,1,2,1,3,1 sincere Borda %ld, backward-induction Borda %ld, ratio %s", s_sincere, s_oracle,
              ratio_cb(p, pi).to_string().c_str()));
  return v;
}

void for_each_interleaving(const std::vector<VoterIndex>& a, const std::vector<VoterIndex>& b,
                           const std::function<void(const EliminationSequence&)>& fn) {
  std::vector<VoterIndex> out;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
    if (i == a.size() && j == b.size()) return fn(EliminationSequence(out));
    if (i < a.size()) {
      out.push_back(a[i]);
      rec(i + 1, j);
      out.pop_back();
    }
    if (j < b.size()) {
      out.push_back(b[j]);
      rec(i, j + 1);
      out.pop_back();
    }
  };
  rec(0, 0);
}

Verdict properties() {
  Verdict v;
  constexpr int instances = 100'000;
  Random rng(8);

  std::size_t bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto n = rng.between(1, 5);
    auto half = rng.turns(n, rng.between(0, 4));
    std::vector<VoterIndex> full(half);
    if (rng.between(0, 1)) full.push_back(static_cast<VoterIndex>(rng.between(0, n - 1)));
    full.insert(full.end(), half.rbegin(), half.rend());
    const EliminationSequence pi(full);
    const auto p = rng.profile(n, pi.size() + 1);
    bad += sincere_play(p, pi).winner != spne_outcome(p, pi).winner;
  }
  v.check(bad == 0, fmt("palindromic sequences elect the sincere winner: %zu violations / 1000", bad));

  std::size_t rank_bad = 0, duality_bad = 0, relabel_bad = 0, ab_bad = 0, poa_bad = 0, sr_bad = 0;
  for (int t = 0; t < instances; ++t) {
    const auto n = rng.between(2, 5), m = rng.between(2, 10);
    const auto p = rng.profile(n, m);
    const EliminationSequence pi(rng.turns(n, m - 1));
    const auto occ = occurrences(pi, n);
    const auto spne = spne_outcome(p, pi).winner, sincere = sincere_play(p, pi).winner;
    for (std::size_t i = 0; i < n; ++i)
      rank_bad += static_cast<std::size_t>(p.vote(i).rank(spne)) > m - occ.counts[i] ||
                  static_cast<std::size_t>(p.vote(i).rank(sincere)) > m - occ.counts[i];
    const auto cb = ratio_cb(p, pi), ab = ratio_ab(p, pi);
    duality_bad += cb != ratio_cb(p, reverse(pi)).reciprocal();

    std::vector<Candidate> sigma(m);
    std::iota(sigma.begin(), sigma.end(), Candidate{0});
    std::shuffle(sigma.begin(), sigma.end(), rng.engine());
    std::vector<Vote> moved;
    for (const auto& vote : p.votes()) {
      std::vector<Candidate> r;
      for (auto c : vote.ranking()) r.push_back(sigma[c]);
      moved.emplace_back(std::move(r));
    }
    const PreferenceProfile q(std::move(moved));
    relabel_bad += ratio_ab(q, pi) != ab || ratio_cb(q, pi) != cb;

    ab_bad += ab < Ratio(1, 1);
    poa_bad += ab > poa_formula(n, m, occ.o_max);
    sr_bad += cb > sr_upper_bound(n, m, occ.o_max);
  }
  v.check(rank_bad == 0, fmt("winner rank bound: %zu violations", rank_bad));
  v.check(duality_bad == 0, fmt("reversal duality: %zu violations", duality_bad));
  v.check(relabel_bad == 0, fmt("relabeling invariance: %zu violations", relabel_bad));
  v.check(ab_bad == 0, fmt("optimum ratio >= 1: %zu violations", ab_bad));
  v.check(poa_bad == 0, fmt("optimum ratio <= price of anarchy: %zu violations", poa_bad));
  v.check(sr_bad == 0, fmt("sincerity ratio <= upper bound: %zu violations", sr_bad));

  std::size_t interleave_bad = 0, sequences = 0;
  for (int t = 0; t < instances; ++t) {
    const auto n = rng.between(2, 4);
    BehaviorAssignment behavior;
    std::vector<VoterIndex> sincere_pool, strategic_pool;
    for (VoterIndex i = 0; i < n; ++i) {
      if (rng.between(0, 1)) {
        behavior.sincere_set.push_back(i);
        sincere_pool.push_back(i);
      } else {
        strategic_pool.push_back(i);
      }
    }
    auto draw = [&](const std::vector<VoterIndex>& pool) {
      std::vector<VoterIndex> out(pool.empty() ? 0 : rng.between(0, 4));
      for (auto& x : out) x = pool[rng.between(0, pool.size() - 1)];
      return out;
    };
    const auto a = draw(sincere_pool), b = draw(strategic_pool);
    const auto p = rng.profile(n, a.size() + b.size() + 1);
    std::optional<Candidate> winner;
    bool differs = false;
    for_each_interleaving(a, b, [&](const EliminationSequence& pi) {
      ++sequences;
      const auto w = mixed_play(p, pi, behavior).winner;
      if (!winner) winner = w;
      differs = differs || w != *winner;
    });
    interleave_bad += differs;
  }
  v.check(interleave_bad == 0, fmt("mixed play interleaving invariance: %zu violations over %zu sequences",
                                   interleave_bad, sequences));
  return v;
}

Verdict mallows_sampler() {
  Verdict v;
  constexpr double phi = 0.6;
  constexpr int samples = 1'000'000;
  std::vector<Candidate> perm{0, 1, 2, 3};
  std::vector<std::vector<Candidate>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<double> exact;
  double z = 0;
  for (const auto& q : perms) {
    exact.push_back(std::pow(phi, static_cast<double>(kendall_tau(Vote(q), Vote::identity(4)))));
    z += exact.back();
  }
  std::vector<int> hist(perms.size(), 0);
  const MallowsSampler sampler(4, phi);
  std::vector<Candidate> centre{0, 1, 2, 3}, out(4);
  RngStream rng(9, 0);
  for (int i = 0; i < samples; ++i) {
    sampler.sample(centre, out, rng);
    ++hist[std::find(perms.begin(), perms.end(), out) - perms.begin()];
  }
  double worst = 0;
  for (std::size_t k = 0; k < perms.size(); ++k)
    worst = std::max(worst, std::abs(static_cast<double>(hist[k]) / samples - exact[k] / z));
  v.check(worst <= 0.003, fmt("largest frequency deviation %.5f over 24 rankings (limit 0.003)", worst));
  return v;
}

Verdict determinism() {
  Verdict v;
  for (const char* culture : {"ic", "mallows:phi=0.6"}) {
    auto cfg = config("123114235", 5, 10, RatioMode::cb);
    cfg.culture = parse_culture(culture);
    cfg.samples = 200'000;
    cfg.seed = 31337;
    std::string first;
    for (std::size_t w : {1, 4, 16}) {
      cfg.workers = w;
      const auto r = run_montecarlo(cfg);
      const auto text = csv_header() + "\n" + csv_row(cfg, r.stats, false) + "\n" +
                        histogram_csv(make_histogram(r.tally, cfg.histogram_bins, cfg.bound()));
      if (w == 1) first = text;
      v.check(text == first, fmt("%s workers=%zu output %s", culture, w, text == first ? "identical" : "differs"));
    }
  }
  return v;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"SPNE outcome equals backward induction", spne_equivalence},
      {"exhaustive optimum-ratio table", optimum_table},
      {"exhaustive sincerity-ratio table", sincere_table},
      {"closed-form bounds", closed_forms},
      {"Monte-Carlo tables (IC, Mallows 0.6)", sampled_tables},
      {"Mallows low-dispersion ratios equal 1", low_dispersion},
      {"extremal profiles attain the bounds", extremal},
      {"property suites", properties},
      {"Mallows sampler distribution", mallows_sampler},
      {"Monte-Carlo determinism across workers", determinism},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& d : v.details) std::printf("    %s\n", d.c_str());
    std::printf("criterion %2d %s: %s (%.1f s)\n", index, v.pass ? "PASS" : "FAIL", name, secs);
    std::fflush(stdout);
    failed += !v.pass;
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
