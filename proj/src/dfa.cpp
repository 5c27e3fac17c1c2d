#include "specmatch/dfa.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace specmatch {

Dfa::Dfa(std::vector<std::uint8_t> alphabet, std::size_t state_count,
         std::vector<StateId> transitions, StateId start,
         std::vector<StateId> finals)
    : alphabet_(std::move(alphabet)),
      state_count_(state_count),
      transitions_(std::move(transitions)),
      start_(start),
      finals_(std::move(finals)) {
  if (state_count_ == 0) throw InvalidDfa("DFA needs at least one state");
  if (state_count_ >= kNoState) throw InvalidDfa("too many states");
  if (!std::is_sorted(alphabet_.begin(), alphabet_.end()) ||
      std::adjacent_find(alphabet_.begin(), alphabet_.end()) != alphabet_.end()) {
    throw InvalidDfa("alphabet must be strictly ascending");
  }
  if (transitions_.size() != state_count_ * alphabet_.size()) {
    throw InvalidDfa("transition table has " + std::to_string(transitions_.size()) +
                     " entries, expected " +
                     std::to_string(state_count_ * alphabet_.size()));
  }
  for (StateId t : transitions_) {
    if (t >= state_count_) throw InvalidDfa("transition target out of range");
  }
  if (start_ >= state_count_) throw InvalidDfa("start state out of range");

  std::sort(finals_.begin(), finals_.end());
  finals_.erase(std::unique(finals_.begin(), finals_.end()), finals_.end());
  is_final_.assign(state_count_, false);
  for (StateId f : finals_) {
    if (f >= state_count_) throw InvalidDfa("final state out of range");
    is_final_[f] = true;
  }

  std::fill(std::begin(symbol_of_byte_), std::end(symbol_of_byte_), -1);
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    symbol_of_byte_[alphabet_[i]] = static_cast<int>(i);
  }
  sink_ = detect_sink(*this);
}

std::vector<StateId> Dfa::live_states() const {
  std::vector<StateId> out;
  out.reserve(live_state_count());
  for (StateId s = 0; s < state_count_; ++s) {
    if (!sink_ || s != *sink_) out.push_back(s);
  }
  return out;
}

StateId Dfa::run(StateId from, std::span<const std::uint8_t> symbols) const {
  StateId s = from;
  for (std::uint8_t c : symbols) s = next(s, c);
  return s;
}

bool Dfa::accepts(std::string_view bytes) const {
  StateId s = start_;
  for (char ch : bytes) {
    const auto sym = symbol_index(static_cast<std::uint8_t>(ch));
    if (!sym) return false;
    s = next(s, *sym);
  }
  return is_final(s);
}

std::uint64_t Dfa::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(state_count_);
  mix(alphabet_.size());
  for (auto b : alphabet_) mix(b);
  for (auto t : transitions_) mix(t);
  mix(start_);
  mix(finals_.size());
  for (auto f : finals_) mix(f);
  return h;
}

std::optional<StateId> detect_sink(const Dfa& dfa) {
  for (StateId s = 0; s < dfa.state_count(); ++s) {
    if (dfa.is_final(s)) continue;
    bool absorbing = true;
    for (std::size_t c = 0; c < dfa.alphabet_size() && absorbing; ++c) {
      absorbing = dfa.next(s, c) == s;
    }
    if (absorbing) return s;
  }
  return std::nullopt;
}

namespace {

// Renumbers `keep`-selected states breadth-first from `start_class`, where
// `class_of` maps each original state to its class id (identity for plain
// reordering). Returns the rebuilt DFA.
Dfa rebuild_bfs(const Dfa& dfa, const std::vector<StateId>& class_of,
                std::size_t class_count) {
  const std::size_t k = dfa.alphabet_size();
  // Representative original state per class.
  std::vector<StateId> rep(class_count, kNoState);
  for (StateId s = 0; s < dfa.state_count(); ++s) {
    if (class_of[s] != kNoState && rep[class_of[s]] == kNoState) rep[class_of[s]] = s;
  }
  std::vector<StateId> order_of(class_count, kNoState);
  std::vector<StateId> order;
  std::deque<StateId> queue;
  const StateId start_class = class_of[dfa.start()];
  order_of[start_class] = 0;
  order.push_back(start_class);
  queue.push_back(start_class);
  while (!queue.empty()) {
    const StateId cls = queue.front();
    queue.pop_front();
    for (std::size_t c = 0; c < k; ++c) {
      const StateId t = class_of[dfa.next(rep[cls], c)];
      if (order_of[t] == kNoState) {
        order_of[t] = static_cast<StateId>(order.size());
        order.push_back(t);
        queue.push_back(t);
      }
    }
  }
  std::vector<StateId> delta(order.size() * k);
  std::vector<StateId> finals;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const StateId r = rep[order[i]];
    for (std::size_t c = 0; c < k; ++c) {
      delta[i * k + c] = order_of[class_of[dfa.next(r, c)]];
    }
    if (dfa.is_final(r)) finals.push_back(static_cast<StateId>(i));
  }
  return Dfa(dfa.alphabet(), order.size(), std::move(delta), 0, std::move(finals));
}

std::vector<bool> reachable_states(const Dfa& dfa) {
  std::vector<bool> seen(dfa.state_count(), false);
  std::vector<StateId> stack{dfa.start()};
  seen[dfa.start()] = true;
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (std::size_t c = 0; c < dfa.alphabet_size(); ++c) {
      const StateId t = dfa.next(s, c);
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return seen;
}

// Refinable partition over [0, n) as used by Hopcroft's algorithm.
class Partition {
 public:
  explicit Partition(std::size_t n) : elems_(n), loc_(n), block_of_(n, 0) {
    std::iota(elems_.begin(), elems_.end(), 0);
    std::iota(loc_.begin(), loc_.end(), 0);
    if (n > 0) blocks_.push_back({0, n, 0});
  }

  std::size_t block_count() const { return blocks_.size(); }
  std::size_t block_of(StateId s) const { return block_of_[s]; }
  std::size_t size(std::size_t b) const { return blocks_[b].end - blocks_[b].begin; }
  std::span<const StateId> members(std::size_t b) const {
    return {elems_.data() + blocks_[b].begin, size(b)};
  }

  void mark(StateId s) {
    Block& b = blocks_[block_of_[s]];
    const std::size_t pos = loc_[s];
    const std::size_t dst = b.begin + b.marked;
    if (pos < dst) return;  // already marked
    std::swap(elems_[pos], elems_[dst]);
    loc_[elems_[pos]] = pos;
    loc_[elems_[dst]] = dst;
    if (b.marked == 0) touched_.push_back(block_of_[s]);
    ++b.marked;
  }

  // Splits every touched block into (marked, unmarked). Invokes
  // on_split(old_block, new_block) when both halves are nonempty; the new
  // block receives the marked half.
  template <typename F>
  void split_marked(F&& on_split) {
    for (std::size_t b : touched_) {
      Block& blk = blocks_[b];
      const std::size_t marked = blk.marked;
      blk.marked = 0;
      if (marked == blk.end - blk.begin) continue;
      const std::size_t nb = blocks_.size();
      const std::size_t mid = blk.begin + marked;
      blocks_.push_back({blk.begin, mid, 0});
      blocks_[b].begin = mid;
      for (std::size_t i = blocks_[nb].begin; i < blocks_[nb].end; ++i) {
        block_of_[elems_[i]] = nb;
      }
      on_split(b, nb);
    }
    touched_.clear();
  }

 private:
  struct Block {
    std::size_t begin, end, marked;
  };
  std::vector<StateId> elems_;
  std::vector<std::size_t> loc_;
  std::vector<std::size_t> block_of_;
  std::vector<Block> blocks_;
  std::vector<std::size_t> touched_;
};

}  // namespace

Dfa canonical_order(const Dfa& dfa) {
  const auto seen = reachable_states(dfa);
  std::vector<StateId> class_of(dfa.state_count(), kNoState);
  StateId next_id = 0;
  for (StateId s = 0; s < dfa.state_count(); ++s) {
    if (seen[s]) class_of[s] = next_id++;
  }
  return rebuild_bfs(dfa, class_of, next_id);
}

Dfa minimize(const Dfa& input) {
  const Dfa dfa = canonical_order(input);
  const std::size_t n = dfa.state_count();
  const std::size_t k = dfa.alphabet_size();

  // Reverse transitions, bucketed by (symbol, target).
  std::vector<std::size_t> rev_start(k * n + 1, 0);
  for (StateId s = 0; s < n; ++s) {
    for (std::size_t c = 0; c < k; ++c) ++rev_start[c * n + dfa.next(s, c) + 1];
  }
  std::partial_sum(rev_start.begin(), rev_start.end(), rev_start.begin());
  std::vector<StateId> rev(n * k);
  {
    std::vector<std::size_t> fill(rev_start.begin(), rev_start.end() - 1);
    for (StateId s = 0; s < n; ++s) {
      for (std::size_t c = 0; c < k; ++c) rev[fill[c * n + dfa.next(s, c)]++] = s;
    }
  }

  Partition part(n);
  std::vector<std::vector<bool>> in_work(k);
  std::deque<std::pair<std::size_t, std::size_t>> work;  // (block, symbol)
  auto push = [&](std::size_t b, std::size_t c) {
    if (in_work[c].size() <= b) in_work[c].resize(part.block_count() + 1, false);
    if (!in_work[c][b]) {
      in_work[c][b] = true;
      work.emplace_back(b, c);
    }
  };

  for (StateId f : dfa.finals()) part.mark(f);
  part.split_marked([&](std::size_t old_b, std::size_t new_b) {
    const std::size_t smaller = part.size(new_b) <= part.size(old_b) ? new_b : old_b;
    for (std::size_t c = 0; c < k; ++c) push(smaller, c);
  });
  if (part.block_count() == 1) {
    for (std::size_t c = 0; c < k; ++c) push(0, c);
  }

  std::vector<StateId> splitter;
  while (!work.empty()) {
    const auto [b, c] = work.front();
    work.pop_front();
    in_work[c][b] = false;
    splitter.assign(part.members(b).begin(), part.members(b).end());
    for (StateId t : splitter) {
      for (std::size_t i = rev_start[c * n + t]; i < rev_start[c * n + t + 1]; ++i) {
        part.mark(rev[i]);
      }
    }
    part.split_marked([&](std::size_t old_b, std::size_t new_b) {
      for (std::size_t a = 0; a < k; ++a) {
        if (in_work[a].size() > old_b && in_work[a][old_b]) {
          push(new_b, a);
        } else {
          push(part.size(new_b) <= part.size(old_b) ? new_b : old_b, a);
        }
      }
    });
  }

  std::vector<StateId> class_of(n);
  for (StateId s = 0; s < n; ++s) class_of[s] = static_cast<StateId>(part.block_of(s));
  return rebuild_bfs(dfa, class_of, part.block_count());
}

Dfa extend_alphabet(const Dfa& dfa, std::span<const std::uint8_t> extra) {
  std::vector<std::uint8_t> sigma = dfa.alphabet();
  for (auto b : extra) {
    if (!dfa.symbol_index(b) && std::find(sigma.begin(), sigma.end(), b) == sigma.end()) {
      sigma.push_back(b);
    }
  }
  if (sigma.size() == dfa.alphabet_size()) return dfa;
  std::sort(sigma.begin(), sigma.end());

  const std::size_t n = dfa.state_count() + (dfa.sink() ? 0 : 1);
  const StateId sink = dfa.sink().value_or(static_cast<StateId>(dfa.state_count()));
  const std::size_t k = sigma.size();
  std::vector<StateId> delta(n * k, sink);
  for (std::size_t c = 0; c < k; ++c) {
    const auto old = dfa.symbol_index(sigma[c]);
    if (!old) continue;
    for (StateId s = 0; s < dfa.state_count(); ++s) delta[s * k + c] = dfa.next(s, *old);
  }
  return Dfa(std::move(sigma), n, std::move(delta), dfa.start(), dfa.finals());
}

}  // namespace specmatch
