#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "elimgame/elimgame.hpp"
#include "elimgame/report.hpp"

using namespace elimgame;

namespace {

enum exit_code : int { ok = 0, io_failure = 1, parse_failure = 2, shape_failure = 3, infeasible = 4, over_budget = 5 };

int exit_for(errc code) {
  switch (code) {
    case errc::parse_error: return parse_failure;
    case errc::budget_exceeded: return over_budget;
    case errc::unsatisfiable:
    case errc::structure_unsatisfiable: return infeasible;
    default: return shape_failure;
  }
}

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Shape {
  std::string sequence;
  std::size_t n = 0, m = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--sequence,-s", sequence, "Elimination sequence, e.g. 1,2,3,1 or 1231")->required();
    cmd->add_option("--n", n, "Number of voters (default: highest voter in the sequence)");
    cmd->add_option("--m", m, "Number of candidates (default: sequence length + 1)");
  }

  EliminationSequence resolve(std::size_t& out_n, std::size_t& out_m) const {
    auto pi = parse_sequence(sequence);
    out_n = n ? n : pi.min_voters();
    out_m = m ? m : pi.size() + 1;
    pi.validate(out_n, out_m);
    return pi;
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw io_error("failed writing '" + path + "'");
}

PreferenceProfile read_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::parse_error, "cannot read profile file '" + path + "'");
  return parse_profile(in);
}

std::size_t default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential elimination voting: sincere and strategic outcomes, welfare ratios and experiments"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Play one game and print its trace as JSON");
  std::string profile_path, solve_sequence, behavior = "strategic", sincere_list;
  solve->add_option("--profile,-p", profile_path, "Profile file, one ranking per line")->required();
  solve->add_option("--sequence,-s", solve_sequence, "Elimination sequence")->required();
  solve->add_option("--behavior,-b", behavior, "sincere | strategic | oracle | mixed")
      ->check(CLI::IsMember({"sincere", "strategic", "oracle", "mixed"}));
  solve->add_option("--sincere", sincere_list, "Voters playing sincerely in mixed/oracle mode, e.g. 1,3");

  // exhaustive
  auto* exhaustive = app.add_subcommand("exhaustive", "Enumerate every profile and report one statistics row");
  Shape ex_shape;
  ex_shape.add_to(exhaustive);
  std::string ex_mode = "AB", ex_json;
  bool fix_first = true, force = false;
  std::size_t ex_workers = default_workers();
  exhaustive->add_option("--mode", ex_mode, "AB (optimum vs SPNE) or CB (sincere vs SPNE)");
  exhaustive->add_flag("--fix-first,!--no-fix-first", fix_first, "Fix voter 1 to the identity ranking (default on)");
  exhaustive->add_option("--workers,-j", ex_workers, "Worker threads")->check(CLI::PositiveNumber);
  exhaustive->add_flag("--force", force, "Ignore the enumeration budget");
  exhaustive->add_option("--json", ex_json, "Also write a JSON report to this path ('-' for stdout)");

  // montecarlo
  auto* montecarlo = app.add_subcommand("montecarlo", "Sample profiles from a culture and report statistics");
  Shape mc_shape;
  mc_shape.add_to(montecarlo);
  std::string mc_mode = "AB", culture_text = "ic", reference = "identity", hist_path, mc_json;
  std::optional<double> phi;
  std::uint64_t samples = 3'628'800, seed = 0;
  std::size_t mc_workers = default_workers(), bins = 50;
  montecarlo->add_option("--mode", mc_mode, "AB or CB");
  montecarlo->add_option("--culture", culture_text, "ic | mallows | mallows:phi=<value>");
  montecarlo->add_option("--phi", phi, "Mallows dispersion in (0, 1]");
  montecarlo->add_option("--reference", reference, "Mallows centre: identity | random")
      ->check(CLI::IsMember({"identity", "random"}));
  montecarlo->add_option("--samples", samples, "Number of sampled profiles")->check(CLI::PositiveNumber);
  montecarlo->add_option("--seed", seed, "Random seed");
  montecarlo->add_option("--workers,-j", mc_workers, "Worker threads")->check(CLI::PositiveNumber);
  montecarlo->add_option("--bins", bins, "Histogram bins besides the spike at 1")->check(CLI::PositiveNumber);
  montecarlo->add_option("--out,-o", hist_path, "Histogram CSV path");
  montecarlo->add_option("--json", mc_json, "Also write a JSON report to this path ('-' for stdout)");

  // extremal
  auto* extremal = app.add_subcommand("extremal", "Build a profile attaining a worst-case bound");
  Shape x_shape;
  x_shape.add_to(extremal);
  std::string x_mode = "POA", x_out;
  extremal->add_option("--mode", x_mode, "POA (price of anarchy) or SR (sincerity ratio)");
  extremal->add_option("--out,-o", x_out, "Write the witness profile to this file");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Print the closed-form worst-case ratios for a sequence");
  Shape b_shape;
  b_shape.add_to(bounds);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : parse_failure;
  }

  try {
    if (*solve) {
      const auto v = read_profile(profile_path);
      const auto pi = parse_sequence(solve_sequence);
      BehaviorAssignment b;
      if (!sincere_list.empty())
        for (auto voter : parse_sequence(sincere_list)) b.sincere_set.push_back(voter);
      GameTrace trace;
      if (behavior == "sincere") {
        trace = sincere_play(v, pi);
      } else if (behavior == "strategic") {
        trace = spne_outcome(v, pi);
      } else if (behavior == "oracle") {
        BackwardInductionOptions opts;
        opts.behavior = b;
        trace = backward_induction(v, pi, opts);
      } else {
        trace = mixed_play(v, pi, b);
      }
      std::cout << to_json(trace, v).dump(2) << "\n";
      return ok;
    }

    if (*exhaustive) {
      ExperimentConfig cfg;
      cfg.sequence = ex_shape.resolve(cfg.n, cfg.m);
      cfg.mode = parse_ratio_mode(ex_mode);
      cfg.fix_first = fix_first;
      cfg.workers = ex_workers;
      cfg.budget = force ? std::numeric_limits<std::uint64_t>::max() : budget_from_env();
      ExperimentResult r;
      try {
        r = run_exhaustive(cfg);
      } catch (const error& e) {
        if (e.code() == errc::budget_exceeded)
          std::cerr << "hint: raise ELIMGAME_BUDGET or pass --force\n";
        throw;
      }
      std::cout << csv_header() << "\n" << csv_row(cfg, r.stats, true) << "\n";
      if (!ex_json.empty()) write_text(ex_json, to_json(cfg, r, true).dump(2) + "\n");
      return ok;
    }

    if (*montecarlo) {
      ExperimentConfig cfg;
      cfg.sequence = mc_shape.resolve(cfg.n, cfg.m);
      cfg.mode = parse_ratio_mode(mc_mode);
      cfg.culture = parse_culture(culture_text);
      if (phi) {
        if (cfg.culture.kind != CultureKind::mallows)
          throw error(errc::parse_error, "--phi needs --culture mallows");
        cfg.culture.phi = *phi;
      }
      cfg.culture.random_reference = reference == "random";
      cfg.samples = samples;
      cfg.seed = seed;
      cfg.workers = mc_workers;
      cfg.histogram_bins = bins;
      const auto r = run_montecarlo(cfg);
      std::cout << csv_header() << "\n" << csv_row(cfg, r.stats, false) << "\n";
      if (!hist_path.empty())
        write_text(hist_path, histogram_csv(make_histogram(r.tally, cfg.histogram_bins, cfg.bound())));
      if (!mc_json.empty()) write_text(mc_json, to_json(cfg, r, false).dump(2) + "\n");
      return ok;
    }

    if (*extremal) {
      std::size_t n = 0, m = 0;
      const auto pi = x_shape.resolve(n, m);
      std::string up = x_mode;
      std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
      TightMode mode;
      if (up == "POA" || up == "POA_TIGHT" || up == "AB")
        mode = TightMode::poa;
      else if (up == "SR" || up == "SR_TIGHT" || up == "CB")
        mode = TightMode::sr;
      else
        throw error(errc::parse_error, "mode must be POA or SR, got '" + x_mode + "'");
      const auto inst = gen_tight(mode, n, m, pi);
      const auto report = verify_tight(inst.profile, pi, mode);
      if (!x_out.empty()) write_text(x_out, format_profile(inst.profile));
      std::cout << to_json(inst, report).dump(2) << "\n";
      return ok;
    }

    if (*bounds) {
      std::size_t n = 0, m = 0;
      const auto pi = b_shape.resolve(n, m);
      const auto o_max = occurrences(pi, n).o_max;
      const auto poa = poa_formula(n, m, o_max);
      const auto sr = sr_upper_bound(n, m, o_max);
      nlohmann::json j{{"sequence", pi.to_string()}, {"n", n},           {"m", m},
                       {"o_max", o_max},             {"poa", to_json(poa)}, {"sr_upper_bound", to_json(sr)}};
      std::cout << j.dump(2) << "\n";
      return ok;
    }
  } catch (const error& e) {
    std::cerr << "elimgame: " << e.what();
    if (e.line()) std::cerr << " (line " << e.line() << ")";
    std::cerr << "\n";
    return exit_for(e.code());
  } catch (const io_error& e) {
    std::cerr << "elimgame: " << e.what() << "\n";
    return io_failure;
  }
  return ok;
}
