#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace specmatch {

using StateId = std::uint32_t;
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();

/// Raised when a DFA is structurally invalid (out-of-range target, bad start, ...).
class InvalidDfa : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A complete deterministic automaton over a dense byte alphabet.
///
/// Symbols are re-indexed 0..|alphabet|-1 in ascending byte order. The
/// transition table is row-major: next(s, c) = transitions[s * |alphabet| + c].
/// The sink, when present, is the lowest-indexed non-final state whose every
/// transition loops back to itself.
class Dfa {
 public:
  Dfa(std::vector<std::uint8_t> alphabet, std::size_t state_count,
      std::vector<StateId> transitions, StateId start,
      std::vector<StateId> finals);

  std::size_t state_count() const { return state_count_; }
  std::size_t alphabet_size() const { return alphabet_.size(); }
  const std::vector<std::uint8_t>& alphabet() const { return alphabet_; }
  std::span<const StateId> transitions() const { return transitions_; }

  StateId next(StateId state, std::size_t symbol) const {
    return transitions_[state * alphabet_.size() + symbol];
  }

  StateId start() const { return start_; }
  bool is_final(StateId state) const { return is_final_[state]; }
  /// Final states in ascending order.
  const std::vector<StateId>& finals() const { return finals_; }
  std::optional<StateId> sink() const { return sink_; }

  /// States other than the sink. This is the speculation budget |Q| used by
  /// the planner: the sink never needs to be matched because it absorbs.
  std::size_t live_state_count() const {
    return state_count_ - (sink_ ? 1 : 0);
  }
  /// All non-sink states in ascending order.
  std::vector<StateId> live_states() const;

  /// Dense symbol index for a raw byte, or nullopt if the byte is not in the
  /// alphabet.
  std::optional<std::size_t> symbol_index(std::uint8_t byte) const {
    const int idx = symbol_of_byte_[byte];
    if (idx < 0) return std::nullopt;
    return static_cast<std::size_t>(idx);
  }

  /// Extended transition function over symbol indices.
  StateId run(StateId from, std::span<const std::uint8_t> symbols) const;

  /// Whole-string membership over raw bytes. Bytes outside the alphabet
  /// reject.
  bool accepts(std::string_view bytes) const;

  /// 64-bit FNV-1a over a canonical serialization; keys on-disk caches.
  std::uint64_t content_hash() const;

  friend bool operator==(const Dfa& a, const Dfa& b) {
    return a.alphabet_ == b.alphabet_ && a.state_count_ == b.state_count_ &&
           a.transitions_ == b.transitions_ && a.start_ == b.start_ &&
           a.finals_ == b.finals_;
  }

 private:
  std::vector<std::uint8_t> alphabet_;
  std::size_t state_count_ = 0;
  std::vector<StateId> transitions_;
  StateId start_ = 0;
  std::vector<StateId> finals_;
  std::vector<bool> is_final_;
  std::optional<StateId> sink_;
  int symbol_of_byte_[256];
};

/// Lowest-indexed non-final state all of whose transitions self-loop.
std::optional<StateId> detect_sink(const Dfa& dfa);

/// Language-equivalent minimal DFA with unreachable states removed. States
/// are renumbered breadth-first from the start state in symbol order, so two
/// DFAs for the same language over the same alphabet compare equal.
Dfa minimize(const Dfa& dfa);

/// Breadth-first renumbering of the reachable part (no merging).
Dfa canonical_order(const Dfa& dfa);

/// Adds the bytes in `extra` to the alphabet; every new symbol leads to the
/// sink, which is appended when the DFA has none. Grail+ text cannot express
/// a symbol whose every transition enters the sink, so this restores it.
Dfa extend_alphabet(const Dfa& dfa, std::span<const std::uint8_t> extra);

}  // namespace specmatch
