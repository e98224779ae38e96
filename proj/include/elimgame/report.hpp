#pragma once

#include <charconv>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "elimgame/experiment.hpp"
#include "elimgame/extremal.hpp"
#include "elimgame/play.hpp"

namespace elimgame {

/// Shortest text that reads back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline nlohmann::json to_json(const Ratio& r) {
  return {{"num", r.num()}, {"den", r.den()}, {"float", r.to_double()}};
}

inline nlohmann::json to_json(const GameTrace& t, const PreferenceProfile& v) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : t.steps) {
    nlohmann::json step{{"voter", s.voter + 1}, {"eliminated", v.label(s.eliminated)}};
    if (!s.indifferent.empty()) {
      auto& alt = step["indifferent"] = nlohmann::json::array();
      for (auto c : s.indifferent) alt.push_back(v.label(c));
    }
    steps.push_back(std::move(step));
  }
  return {{"mode", std::string(to_string(t.mode))},
          {"semantics", std::string(trace_semantics(t.mode))},
          {"steps", std::move(steps)},
          {"winner", v.label(t.winner)}};
}

inline nlohmann::json to_json(const WorstCaseResult& r) {
  return {{"value", to_json(r.value)},
          {"witness", format_profile(r.witness)},
          {"population_size", r.population_size}};
}

inline nlohmann::json to_json(const TightnessReport& r) {
  return {{"attained", r.attained}, {"achieved", to_json(r.achieved)}, {"bound", to_json(r.bound)}};
}

inline nlohmann::json to_json(const ExtremalInstance& inst, const TightnessReport& report) {
  const auto& s = inst.spec;
  const auto& p = inst.profile;
  nlohmann::json j{{"mode", std::string(to_string(s.mode))},
                   {"n", s.n},
                   {"m", s.m},
                   {"sequence", s.sequence.to_string()},
                   {"o_max", s.o_max},
                   {"x", s.x + 1},
                   {s.mode == TightMode::poa ? "a" : "c", p.label(s.favoured)},
                   {"b", p.label(s.spne_winner)},
                   {"profile", format_profile(p)},
                   {"verification", to_json(report)}};
  if (s.shared) j["e"] = p.label(*s.shared);
  if (s.partner) j["y"] = *s.partner + 1;
  return j;
}

// ---------------------------------------------------------------------------
// Experiment rows

inline std::string culture_label(const ExperimentConfig& cfg, bool exhaustive) {
  return exhaustive ? "exhaustive" : cfg.culture.name();
}

inline std::string csv_header() {
  return "sequence,n,m,mode,culture,phi,count,mean,std,max_num,max_den";
}

inline std::string csv_row(const ExperimentConfig& cfg, const RatioStats& s, bool exhaustive) {
  const double phi = exhaustive || cfg.culture.kind == CultureKind::impartial ? 1.0 : cfg.culture.phi;
  std::string row = cfg.sequence.to_compact();
  for (const auto& field :
       {std::to_string(cfg.n), std::to_string(cfg.m), std::string(to_string(cfg.mode)),
        culture_label(cfg, exhaustive), format_double(phi), std::to_string(s.count),
        format_double(s.mean), format_double(s.std), std::to_string(s.max.num()),
        std::to_string(s.max.den())})
    row += "," + field;
  return row;
}

inline nlohmann::json to_json(const ExperimentConfig& cfg, const ExperimentResult& r, bool exhaustive) {
  const auto& s = r.stats;
  nlohmann::json j{{"sequence", cfg.sequence.to_string()},
                   {"n", cfg.n},
                   {"m", cfg.m},
                   {"mode", std::string(to_string(cfg.mode))},
                   {"culture", culture_label(cfg, exhaustive)},
                   {"phi", exhaustive || cfg.culture.kind == CultureKind::impartial ? 1.0 : cfg.culture.phi},
                   {"count", s.count},
                   {"mean", s.mean},
                   {"std", s.std},
                   {"max", to_json(s.max)},
                   {"witness_index", r.witness_index}};
  if (!exhaustive) j["seed"] = cfg.seed;
  if (exhaustive) j["fix_first"] = cfg.fix_first;
  if (auto b = cfg.bound()) j["bound"] = to_json(*b);
  if (s.max_witness) j["witness"] = format_profile(*s.max_witness);
  return j;
}

inline std::string histogram_csv(const std::vector<HistogramBin>& bins) {
  std::string out = "bin_left,bin_right,count\n";
  for (const auto& b : bins)
    out += format_double(b.left) + "," + format_double(b.right) + "," + std::to_string(b.count) + "\n";
  return out;
}

}  // namespace elimgame
