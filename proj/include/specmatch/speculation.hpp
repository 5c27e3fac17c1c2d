#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "specmatch/dfa.hpp"

namespace specmatch {

class LookaheadCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default bound on |alphabet|^r, the number of suffix entries in a table.
inline constexpr std::size_t kDefaultLookaheadCap = std::size_t{1} << 20;

/// Candidate initial-state sets for every length-r reverse lookahead.
///
/// The entry for suffix s1..sr (s1 read first) holds every state reachable
/// from some state by reading s1..sr, minus the sink. A chunk whose preceding
/// r input symbols are s1..sr can only start in one of those states (or in
/// the sink, which absorbs and needs no matching).
///
/// Sets are bitsets keyed by the radix-|alphabet| suffix index with s1 most
/// significant.
class LookaheadTable {
 public:
  std::size_t depth() const { return depth_; }
  std::size_t state_count() const { return state_count_; }
  std::size_t alphabet_size() const { return alphabet_size_; }
  std::size_t entry_count() const { return entry_count_; }
  std::optional<StateId> sink() const { return sink_; }

  /// Largest set size, clamped to at least 1 so it is usable as a
  /// partitioning budget.
  std::size_t i_max() const { return i_max_; }

  std::size_t suffix_index(std::span<const std::uint8_t> suffix) const;
  std::size_t set_size(std::size_t index) const;
  bool contains(std::size_t index, StateId s) const {
    return (bits_[index * words_ + s / 64] >> (s % 64)) & 1u;
  }
  std::vector<StateId> states(std::size_t index) const;

  /// Candidate states for the last r symbols before a chunk. Empty when
  /// every path over the suffix ends in the sink.
  std::vector<StateId> candidates(std::span<const std::uint8_t> suffix) const {
    return states(suffix_index(suffix));
  }

  /// Size histogram: histogram()[k] = number of suffixes whose set has k states.
  std::vector<std::size_t> histogram() const;
  double mean_set_size() const;

  friend bool operator==(const LookaheadTable&, const LookaheadTable&) = default;

 private:
  friend LookaheadTable initial_state_sets(const Dfa&, std::size_t, std::size_t);
  friend LookaheadTable load_lookahead(const std::filesystem::path&, const Dfa&, std::size_t);

  std::size_t depth_ = 0;
  std::size_t state_count_ = 0;
  std::size_t alphabet_size_ = 0;
  std::size_t entry_count_ = 0;
  std::size_t words_ = 0;
  std::size_t i_max_ = 1;
  std::optional<StateId> sink_;
  std::vector<std::uint64_t> bits_;
};

/// Builds the table for depth r >= 1 in O(|alphabet|^r * |Q|). Throws
/// LookaheadCapExceeded when |alphabet|^r exceeds `cap`.
LookaheadTable initial_state_sets(const Dfa& dfa, std::size_t r,
                                  std::size_t cap = kDefaultLookaheadCap);

inline std::size_t max_initial_states(const LookaheadTable& table) { return table.i_max(); }

inline std::vector<StateId> candidate_set_for(const LookaheadTable& table,
                                              std::span<const std::uint8_t> suffix) {
  return table.candidates(suffix);
}

/// gamma = I_max,r / |Q| with |Q| counting live (non-sink) states.
struct Gamma {
  std::size_t numerator = 0;
  std::size_t denominator = 1;
  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

Gamma gamma(const LookaheadTable& table, const Dfa& dfa);
Gamma gamma(const Dfa& dfa, std::size_t r, std::size_t cap = kDefaultLookaheadCap);

/// Persists a table to a text sidecar keyed by the DFA content hash and r.
void save_lookahead(const std::filesystem::path& path, const LookaheadTable& table,
                    const Dfa& dfa);
/// Loads a sidecar written by save_lookahead. Throws std::runtime_error when
/// the file is malformed or was written for a different DFA or depth.
LookaheadTable load_lookahead(const std::filesystem::path& path, const Dfa& dfa, std::size_t r);

}  // namespace specmatch
