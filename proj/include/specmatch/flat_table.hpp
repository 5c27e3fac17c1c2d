#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "specmatch/dfa.hpp"

namespace specmatch {

/// Offset of a state's row in the flat transition table (state * stride).
using RowOffset = std::uint32_t;

/// One-dimensional transition table whose entries are target row offsets,
/// so the matching loop is a single add and load per symbol:
///
///     row = sbase[row + symbol];
///
/// stride() equals the alphabet size (1 for an empty alphabet, whose single
/// padding column is never read).
class FlatTable {
 public:
  explicit FlatTable(const Dfa& dfa);

  std::span<const RowOffset> sbase() const { return sbase_; }
  std::size_t stride() const { return stride_; }
  std::size_t alphabet_size() const { return alphabet_size_; }
  std::size_t state_count() const { return state_count_; }

  RowOffset row_of(StateId s) const { return static_cast<RowOffset>(s * stride_); }
  StateId state_of(RowOffset row) const { return static_cast<StateId>(row / stride_); }

  RowOffset start_row() const { return start_row_; }
  std::optional<RowOffset> sink_row() const { return sink_row_; }
  std::optional<StateId> sink() const {
    if (!sink_row_) return std::nullopt;
    return state_of(*sink_row_);
  }
  const std::vector<RowOffset>& final_rows() const { return final_rows_; }
  bool is_final_state(StateId s) const { return is_final_[s]; }

  /// Dense symbol for a raw byte; -1 marks a byte outside the alphabet.
  const std::array<std::int16_t, 256>& symbol_map() const { return symbol_map_; }

  RowOffset advance(RowOffset row, std::span<const std::uint8_t> symbols) const {
    const RowOffset* table = sbase_.data();
    for (const std::uint8_t c : symbols) row = table[row + c];
    return row;
  }

  /// Like advance() but stops early once the sink row is reached. Checks the
  /// sink every `kSinkCheckBlock` symbols to keep the inner loop branch-free.
  /// Adds the number of symbols actually consumed to `consumed`.
  RowOffset advance_until_sink(RowOffset row, std::span<const std::uint8_t> symbols,
                               std::size_t& consumed) const;

  static constexpr std::size_t kSinkCheckBlock = 256;

 private:
  std::vector<RowOffset> sbase_;
  std::size_t stride_ = 1;
  std::size_t alphabet_size_ = 0;
  std::size_t state_count_ = 0;
  RowOffset start_row_ = 0;
  std::optional<RowOffset> sink_row_;
  std::vector<RowOffset> final_rows_;
  std::vector<bool> is_final_;
  std::array<std::int16_t, 256> symbol_map_{};
};

/// Encoded input: one dense symbol index per input byte.
struct SymbolBuffer {
  std::vector<std::uint8_t> symbols;

  std::size_t size() const { return symbols.size(); }
  std::span<const std::uint8_t> span() const { return symbols; }
};

enum class ForeignBytePolicy {
  /// A byte outside the alphabet makes the input a definitive non-match.
  kRejectInput,
  /// A byte outside the alphabet raises ForeignByteError.
  kStrict,
};

class ForeignByteError : public std::runtime_error {
 public:
  ForeignByteError(std::size_t offset, std::uint8_t byte)
      : std::runtime_error("byte " + std::to_string(byte) + " at offset " +
                           std::to_string(offset) + " is not in the DFA alphabet"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct EncodedInput {
  SymbolBuffer buffer;
  /// Offset of the first foreign byte (kRejectInput only). When set, the
  /// buffer is empty and the input is rejected without matching.
  std::optional<std::size_t> foreign_at;
};

EncodedInput encode_input(std::span<const std::uint8_t> bytes, const FlatTable& table,
                          ForeignBytePolicy policy = ForeignBytePolicy::kRejectInput);

/// Convenience: builds the table for `dfa`.
inline FlatTable flatten(const Dfa& dfa) { return FlatTable(dfa); }

}  // namespace specmatch
