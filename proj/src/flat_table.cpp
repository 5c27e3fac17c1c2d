#include "specmatch/flat_table.hpp"

#include <algorithm>
#include <limits>

namespace specmatch {

FlatTable::FlatTable(const Dfa& dfa)
    : stride_(std::max<std::size_t>(1, dfa.alphabet_size())),
      alphabet_size_(dfa.alphabet_size()),
      state_count_(dfa.state_count()),
      is_final_(dfa.state_count(), false) {
  if (state_count_ * stride_ > std::numeric_limits<RowOffset>::max()) {
    throw InvalidDfa("transition table exceeds 32-bit row offsets");
  }
  sbase_.assign(state_count_ * stride_, 0);
  for (StateId s = 0; s < state_count_; ++s) {
    for (std::size_t c = 0; c < alphabet_size_; ++c) {
      sbase_[s * stride_ + c] = row_of(dfa.next(s, c));
    }
    if (alphabet_size_ == 0) sbase_[s] = row_of(s);
  }
  start_row_ = row_of(dfa.start());
  if (dfa.sink()) sink_row_ = row_of(*dfa.sink());
  for (StateId f : dfa.finals()) {
    final_rows_.push_back(row_of(f));
    is_final_[f] = true;
  }
  symbol_map_.fill(-1);
  for (std::size_t i = 0; i < dfa.alphabet_size(); ++i) {
    symbol_map_[dfa.alphabet()[i]] = static_cast<std::int16_t>(i);
  }
}

RowOffset FlatTable::advance_until_sink(RowOffset row, std::span<const std::uint8_t> symbols,
                                        std::size_t& consumed) const {
  if (!sink_row_) {
    consumed += symbols.size();
    return advance(row, symbols);
  }
  const RowOffset sink = *sink_row_;
  std::size_t pos = 0;
  while (pos < symbols.size()) {
    if (row == sink) break;
    const std::size_t len = std::min(kSinkCheckBlock, symbols.size() - pos);
    row = advance(row, symbols.subspan(pos, len));
    pos += len;
  }
  consumed += pos;
  return row;
}

EncodedInput encode_input(std::span<const std::uint8_t> bytes, const FlatTable& table,
                          ForeignBytePolicy policy) {
  EncodedInput out;
  const auto& map = table.symbol_map();
  out.buffer.symbols.resize(bytes.size());
  std::uint8_t* dst = out.buffer.symbols.data();
  // Any negative entry leaves its sign bit in `bad`; checked once per block.
  constexpr std::size_t kBlock = 4096;
  for (std::size_t base = 0; base < bytes.size(); base += kBlock) {
    const std::size_t end = std::min(bytes.size(), base + kBlock);
    std::int16_t bad = 0;
    for (std::size_t i = base; i < end; ++i) {
      const std::int16_t v = map[bytes[i]];
      bad |= v;
      dst[i] = static_cast<std::uint8_t>(v);
    }
    if (bad < 0) {
      for (std::size_t i = base; i < end; ++i) {
        if (map[bytes[i]] < 0) {
          if (policy == ForeignBytePolicy::kStrict) throw ForeignByteError(i, bytes[i]);
          out.buffer.symbols.clear();
          out.foreign_at = i;
          return out;
        }
      }
    }
  }
  return out;
}

}  // namespace specmatch
