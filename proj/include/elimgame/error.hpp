#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace elimgame {

enum class errc {
  candidate_unknown,
  sequence_length_mismatch,
  invalid_voter,
  invalid_profile,
  length_mismatch,
  tree_too_large,
  zero_welfare,
  out_of_domain,
  budget_exceeded,
  phi_out_of_range,
  unsatisfiable,
  structure_unsatisfiable,
  parse_error,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::candidate_unknown: return "CANDIDATE_UNKNOWN";
    case errc::sequence_length_mismatch: return "SEQUENCE_LENGTH_MISMATCH";
    case errc::invalid_voter: return "INVALID_VOTER";
    case errc::invalid_profile: return "INVALID_PROFILE";
    case errc::length_mismatch: return "LENGTH_MISMATCH";
    case errc::tree_too_large: return "TREE_TOO_LARGE";
    case errc::zero_welfare: return "ZERO_WELFARE";
    case errc::out_of_domain: return "OUT_OF_DOMAIN";
    case errc::budget_exceeded: return "BUDGET_EXCEEDED";
    case errc::phi_out_of_range: return "PHI_OUT_OF_RANGE";
    case errc::unsatisfiable: return "UNSATISFIABLE";
    case errc::structure_unsatisfiable: return "STRUCTURE_UNSATISFIABLE";
    case errc::parse_error: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

/// Every failure raised by the library carries one of the codes above.
/// Parse errors also carry the 1-based input line (0 when not line-bound).
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what, std::size_t line = 0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        line_(line) {}

  errc code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  errc code_;
  std::size_t line_;
};

}  // namespace elimgame
