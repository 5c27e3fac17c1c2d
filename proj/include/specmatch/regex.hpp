#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "specmatch/dfa.hpp"

namespace specmatch {

class RegexError : public std::runtime_error {
 public:
  RegexError(std::size_t position, const std::string& what)
      : std::runtime_error("regex error at offset " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct RegexOptions {
  /// Alphabet of the resulting DFA. When unset, the alphabet is the set of
  /// bytes the pattern can consume.
  std::optional<std::vector<std::uint8_t>> alphabet;
  /// Universe for '.' and negated classes when no alphabet is given:
  /// printable ASCII.
  std::uint8_t universe_lo = 0x20;
  std::uint8_t universe_hi = 0x7e;
  bool minimize = true;
  /// Upper bound on NFA size after expanding bounded repetition.
  std::size_t max_nfa_states = 1u << 20;
};

/// Compiles a regular expression to a complete DFA (Thompson construction,
/// subset construction, then minimization unless disabled).
///
/// Supported syntax: literals, escapes (\. \d \w \s \n \t \xHH), '.', classes
/// [a-z] and [^...], grouping, '|', '*', '+', '?', {m}, {m,}, {m,n}.
/// Membership is whole-string: the DFA accepts exactly the pattern's language.
Dfa compile_regex(std::string_view pattern, const RegexOptions& options = {});

}  // namespace specmatch
