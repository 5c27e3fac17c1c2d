#include "specmatch/speculation.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <numeric>
#include <sstream>

namespace specmatch {

std::size_t LookaheadTable::suffix_index(std::span<const std::uint8_t> suffix) const {
  if (suffix.size() != depth_) {
    throw std::invalid_argument("lookahead suffix has length " + std::to_string(suffix.size()) +
                                ", table depth is " + std::to_string(depth_));
  }
  std::size_t idx = 0;
  for (const std::uint8_t c : suffix) {
    if (c >= alphabet_size_) throw std::out_of_range("lookahead symbol outside the alphabet");
    idx = idx * alphabet_size_ + c;
  }
  return idx;
}

std::size_t LookaheadTable::set_size(std::size_t index) const {
  std::size_t n = 0;
  for (std::size_t w = 0; w < words_; ++w) n += std::popcount(bits_[index * words_ + w]);
  return n;
}

std::vector<StateId> LookaheadTable::states(std::size_t index) const {
  std::vector<StateId> out;
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t word = bits_[index * words_ + w];
    while (word) {
      const int bit = std::countr_zero(word);
      out.push_back(static_cast<StateId>(w * 64 + static_cast<std::size_t>(bit)));
      word &= word - 1;
    }
  }
  return out;
}

std::vector<std::size_t> LookaheadTable::histogram() const {
  std::vector<std::size_t> h(state_count_ + 1, 0);
  for (std::size_t i = 0; i < entry_count_; ++i) ++h[set_size(i)];
  return h;
}

double LookaheadTable::mean_set_size() const {
  if (entry_count_ == 0) return 0.0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < entry_count_; ++i) total += set_size(i);
  return static_cast<double>(total) / static_cast<double>(entry_count_);
}

LookaheadTable initial_state_sets(const Dfa& dfa, std::size_t r, std::size_t cap) {
  if (r == 0) throw std::invalid_argument("lookahead depth must be at least 1");
  const std::size_t k = dfa.alphabet_size();
  const std::size_t n = dfa.state_count();

  std::size_t entries = 1;
  for (std::size_t i = 0; i < r; ++i) {
    if (k != 0 && entries > cap / k) {
      throw LookaheadCapExceeded("|alphabet|^r = " + std::to_string(k) + "^" +
                                 std::to_string(r) + " exceeds the table cap of " +
                                 std::to_string(cap) + " entries; lower r");
    }
    entries *= k;
  }
  if (entries > cap) {
    throw LookaheadCapExceeded("lookahead table exceeds the cap of " + std::to_string(cap) +
                               " entries; lower r");
  }

  LookaheadTable t;
  t.depth_ = r;
  t.state_count_ = n;
  t.alphabet_size_ = k;
  t.entry_count_ = entries;
  t.words_ = (n + 63) / 64;
  t.sink_ = dfa.sink();
  const std::size_t words = t.words_;
  if (entries * words > (std::size_t{1} << 28)) {
    throw LookaheadCapExceeded("lookahead bitsets would need more than 2 GiB; lower r");
  }

  auto clear_sink = [&](std::uint64_t* set) {
    if (t.sink_) set[*t.sink_ / 64] &= ~(std::uint64_t{1} << (*t.sink_ % 64));
  };

  // Level 1: targets of each symbol's transitions.
  std::vector<std::uint64_t> level(k * words, 0);
  for (std::size_t c = 0; c < k; ++c) {
    std::uint64_t* set = &level[c * words];
    for (StateId x = 0; x < n; ++x) {
      const StateId y = dfa.next(x, c);
      set[y / 64] |= std::uint64_t{1} << (y % 64);
    }
    clear_sink(set);
  }
  std::size_t level_entries = k;
  // Level L+1 entry (w, c) is the image of level-L set w under c.
  for (std::size_t depth = 2; depth <= r; ++depth) {
    std::vector<std::uint64_t> next(level_entries * k * words, 0);
    for (std::size_t w = 0; w < level_entries; ++w) {
      const std::uint64_t* src = &level[w * words];
      for (std::size_t wi = 0; wi < words; ++wi) {
        std::uint64_t word = src[wi];
        while (word) {
          const auto x = static_cast<StateId>(wi * 64 + static_cast<std::size_t>(std::countr_zero(word)));
          word &= word - 1;
          for (std::size_t c = 0; c < k; ++c) {
            const StateId y = dfa.next(x, c);
            next[(w * k + c) * words + y / 64] |= std::uint64_t{1} << (y % 64);
          }
        }
      }
    }
    level_entries *= k;
    for (std::size_t e = 0; e < level_entries; ++e) clear_sink(&next[e * words]);
    level = std::move(next);
  }
  t.bits_ = std::move(level);

  std::size_t best = 0;
  for (std::size_t i = 0; i < entries; ++i) best = std::max(best, t.set_size(i));
  t.i_max_ = std::max<std::size_t>(1, best);
  return t;
}

Gamma gamma(const LookaheadTable& table, const Dfa& dfa) {
  const std::size_t num = table.i_max();
  const std::size_t den = std::max<std::size_t>(1, dfa.live_state_count());
  const std::size_t g = std::gcd(num, den);
  return {num / g, den / g};
}

Gamma gamma(const Dfa& dfa, std::size_t r, std::size_t cap) {
  return gamma(initial_state_sets(dfa, r, cap), dfa);
}

namespace {
constexpr const char* kSidecarMagic = "specmatch-lookahead";
constexpr int kSidecarVersion = 1;
}  // namespace

void save_lookahead(const std::filesystem::path& path, const LookaheadTable& table,
                    const Dfa& dfa) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kSidecarMagic << ' ' << kSidecarVersion << '\n'
      << "dfa-hash " << std::hex << dfa.content_hash() << std::dec << '\n'
      << "depth " << table.depth() << '\n'
      << "states " << table.state_count() << '\n'
      << "alphabet " << table.alphabet_size() << '\n'
      << "sink " << (table.sink() ? std::to_string(*table.sink()) : std::string("-")) << '\n'
      << "imax " << table.i_max() << '\n';
  const std::size_t words = (table.state_count() + 63) / 64;
  for (std::size_t i = 0; i < table.entry_count(); ++i) {
    if (table.set_size(i) == 0) continue;
    out << i;
    std::vector<std::uint64_t> row(words, 0);
    for (StateId s : table.states(i)) row[s / 64] |= std::uint64_t{1} << (s % 64);
    out << std::hex;
    for (auto w : row) out << ' ' << w;
    out << std::dec << '\n';
  }
  if (!out) throw std::runtime_error("error writing " + path.string());
}

LookaheadTable load_lookahead(const std::filesystem::path& path, const Dfa& dfa, std::size_t r) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  auto fail = [&](const std::string& why) {
    throw std::runtime_error(path.string() + ": " + why);
  };
  std::string magic, key, sink;
  int version = 0;
  std::uint64_t hash = 0;
  LookaheadTable t;
  in >> magic >> version;
  if (magic != kSidecarMagic || version != kSidecarVersion) fail("not a lookahead sidecar");
  in >> key >> std::hex >> hash >> std::dec;
  if (key != "dfa-hash") fail("missing dfa-hash");
  if (hash != dfa.content_hash()) fail("sidecar was written for a different DFA");
  auto field = [&](const char* name) {
    std::size_t v = 0;
    in >> key >> v;
    if (!in || key != name) fail(std::string("missing ") + name);
    return v;
  };
  t.depth_ = field("depth");
  t.state_count_ = field("states");
  t.alphabet_size_ = field("alphabet");
  in >> key >> sink;
  if (key != "sink") fail("missing sink");
  t.i_max_ = field("imax");
  if (t.depth_ != r) fail("sidecar depth " + std::to_string(t.depth_) + " != " + std::to_string(r));
  if (t.state_count_ != dfa.state_count() || t.alphabet_size_ != dfa.alphabet_size()) {
    fail("sidecar shape does not match the DFA");
  }
  t.sink_ = dfa.sink();
  t.words_ = (t.state_count_ + 63) / 64;
  t.entry_count_ = 1;
  for (std::size_t i = 0; i < r; ++i) t.entry_count_ *= t.alphabet_size_;
  t.bits_.assign(t.entry_count_ * t.words_, 0);

  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t idx = 0;
    if (!(ls >> idx) || idx >= t.entry_count_) fail("bad entry index");
    ls >> std::hex;
    for (std::size_t w = 0; w < t.words_; ++w) {
      if (!(ls >> t.bits_[idx * t.words_ + w])) fail("truncated entry");
    }
  }
  return t;
}

}  // namespace specmatch
