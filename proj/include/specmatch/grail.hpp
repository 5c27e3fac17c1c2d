#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "specmatch/dfa.hpp"

namespace specmatch {

/// Syntax or semantic error in Grail+ text; line() is 1-based.
class GrailError : public std::runtime_error {
 public:
  GrailError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads one DFA in Grail+ format:
///
///     (START) |- 0
///     0 a 1
///     3 -| (FINAL)
///
/// State numbers are renumbered densely in ascending numeric order. Labels
/// must be single bytes. Missing transitions are completed to a synthesized
/// sink state appended after the explicit ones.
Dfa parse_grail(std::string_view text);

/// Writes `dfa` in Grail+ format. Transitions into or out of the sink are
/// omitted, so parse_grail(emit_grail(d)) re-synthesizes it.
std::string emit_grail(const Dfa& dfa);

}  // namespace specmatch
