#pragma once

// Brute-force reference implementations used only by tests. They share no
// code with the library beyond the Dfa container itself.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "specmatch/dfa.hpp"

namespace oracle {

using specmatch::Dfa;
using specmatch::StateId;

// a*bc* with states s0=0, s1=1, E=2.
inline Dfa abc_dfa() {
  // symbols a, b, c
  return Dfa({'a', 'b', 'c'}, 3,
             {0, 1, 2,  //
              2, 2, 1,  //
              2, 2, 2},
             0, {1});
}
inline const std::string kAbcInput = "aaaaaaabcccc";

// Four live states s0..s3 plus the error state 4.
inline Dfa running_dfa() {
  return Dfa({'a', 'b'}, 5,
             {1, 2,  //
              4, 3,  //
              1, 3,  //
              3, 4,  //
              4, 4},
             0, {3});
}
inline const std::string kRunningInput = "bababbababbababbaaabbababbbaabbaaaba";

inline const std::string kRunningGrail =
    "(START) |- 0\n"
    "0 a 1\n"
    "0 b 2\n"
    "1 b 3\n"
    "2 a 1\n"
    "2 b 3\n"
    "3 a 3\n"
    "3 -| (FINAL)\n";
inline const std::string kRunningShortInput = "bababbababbababababa";

inline std::vector<std::uint8_t> bytes(const std::string& s) { return {s.begin(), s.end()}; }

// Transition lookup through an ordered map keyed by (state, raw byte).
class Interpreter {
 public:
  explicit Interpreter(const Dfa& d) : start_(d.start()) {
    for (StateId s = 0; s < d.state_count(); ++s) {
      for (std::size_t c = 0; c < d.alphabet_size(); ++c) {
        delta_[{s, d.alphabet()[c]}] = d.next(s, c);
      }
      if (d.is_final(s)) finals_.insert(s);
    }
  }

  // nullopt when a byte has no transition.
  std::optional<StateId> run(StateId from, const std::string& text) const {
    StateId s = from;
    for (unsigned char b : text) {
      auto it = delta_.find({s, b});
      if (it == delta_.end()) return std::nullopt;
      s = it->second;
    }
    return s;
  }
  std::optional<StateId> run(const std::string& text) const { return run(start_, text); }
  bool accepts(const std::string& text) const {
    auto s = run(text);
    return s && finals_.count(*s);
  }

 private:
  StateId start_;
  std::map<std::pair<StateId, unsigned char>, StateId> delta_;
  std::set<StateId> finals_;
};

inline StateId run_symbols(const Dfa& d, StateId s, const std::vector<std::uint8_t>& symbols) {
  for (auto c : symbols) s = d.next(s, c);
  return s;
}

// Every non-final state whose row is all self-loops.
inline std::vector<StateId> absorbing_rejects(const Dfa& d) {
  std::vector<StateId> out;
  for (StateId s = 0; s < d.state_count(); ++s) {
    if (d.is_final(s)) continue;
    bool loops = true;
    for (std::size_t c = 0; c < d.alphabet_size(); ++c) loops = loops && d.next(s, c) == s;
    if (loops) out.push_back(s);
  }
  return out;
}

// All symbol strings of length r over k symbols, s1 first.
inline std::vector<std::vector<std::uint8_t>> all_words(std::size_t k, std::size_t r) {
  std::vector<std::vector<std::uint8_t>> out{{}};
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<std::vector<std::uint8_t>> next;
    for (const auto& w : out) {
      for (std::size_t c = 0; c < k; ++c) {
        auto v = w;
        v.push_back(static_cast<std::uint8_t>(c));
        next.push_back(v);
      }
    }
    out = std::move(next);
  }
  return out;
}

// { run(x, w) : x in Q } minus the sink.
inline std::set<StateId> image_of_word(const Dfa& d, const std::vector<std::uint8_t>& w) {
  std::set<StateId> out;
  for (StateId x = 0; x < d.state_count(); ++x) {
    const StateId y = run_symbols(d, x, w);
    if (!d.sink() || y != *d.sink()) out.insert(y);
  }
  return out;
}

inline std::size_t brute_imax(const Dfa& d, std::size_t r) {
  std::size_t best = 0;
  for (const auto& w : all_words(d.alphabet_size(), r)) best = std::max(best, image_of_word(d, w).size());
  return best;
}

// Pairwise table filling: true when some pair of distinct reachable states is
// equivalent.
inline bool has_equivalent_pair(const Dfa& d) {
  const std::size_t n = d.state_count();
  std::vector<std::vector<bool>> dist(n, std::vector<bool>(n, false));
  for (StateId p = 0; p < n; ++p)
    for (StateId q = 0; q < n; ++q) dist[p][q] = d.is_final(p) != d.is_final(q);
  bool changed = true;
  while (changed) {
    changed = false;
    for (StateId p = 0; p < n; ++p)
      for (StateId q = 0; q < n; ++q) {
        if (dist[p][q]) continue;
        for (std::size_t c = 0; c < d.alphabet_size(); ++c) {
          if (dist[d.next(p, c)][d.next(q, c)]) {
            dist[p][q] = true;
            changed = true;
            break;
          }
        }
      }
  }
  for (StateId p = 0; p < n; ++p)
    for (StateId q = p + 1; q < n; ++q)
      if (!dist[p][q]) return true;
  return false;
}

// Backtracking search for a state bijection that preserves start, finals
// and every transition (alphabets must agree).
inline bool isomorphic(const Dfa& a, const Dfa& b) {
  if (a.state_count() != b.state_count() || a.alphabet() != b.alphabet()) return false;
  const std::size_t n = a.state_count();
  const std::size_t k = a.alphabet_size();
  std::vector<StateId> fwd(n, specmatch::kNoState), back(n, specmatch::kNoState);
  auto consistent = [&](auto&& self, StateId x, StateId y) -> bool {
    if (fwd[x] != specmatch::kNoState) return fwd[x] == y;
    if (back[y] != specmatch::kNoState) return false;
    if (a.is_final(x) != b.is_final(y)) return false;
    fwd[x] = y;
    back[y] = x;
    for (std::size_t c = 0; c < k; ++c) {
      if (!self(self, a.next(x, c), b.next(y, c))) {
        return false;
      }
    }
    return true;
  };
  if (!consistent(consistent, a.start(), b.start())) return false;
  // States unreachable from the start must still pair up: try them greedily
  // with backtracking over candidates.
  for (StateId x = 0; x < n; ++x) {
    if (fwd[x] != specmatch::kNoState) continue;
    bool placed = false;
    for (StateId y = 0; y < n && !placed; ++y) {
      if (back[y] != specmatch::kNoState) continue;
      auto f = fwd;
      auto bk = back;
      if (consistent(consistent, x, y)) {
        placed = true;
      } else {
        fwd = f;
        back = bk;
      }
    }
    if (!placed) return false;
  }
  return true;
}

// Infinite language iff a state both reachable and co-reachable lies on a
// cycle of such states.
inline bool infinite_language(const Dfa& d) {
  const std::size_t n = d.state_count();
  auto closure = [&](std::vector<bool> seen, bool forward) {
    for (bool grew = true; grew;) {
      grew = false;
      for (StateId s = 0; s < n; ++s)
        for (std::size_t c = 0; c < d.alphabet_size(); ++c) {
          const StateId t = d.next(s, c);
          if (forward && seen[s] && !seen[t]) seen[t] = grew = true;
          if (!forward && seen[t] && !seen[s]) seen[s] = grew = true;
        }
    }
    return seen;
  };
  std::vector<bool> start(n, false), fin(n, false);
  start[d.start()] = true;
  for (StateId f : d.finals()) fin[f] = true;
  const auto reach = closure(start, true);
  const auto coreach = closure(fin, false);
  for (StateId s = 0; s < n; ++s) {
    if (!reach[s] || !coreach[s]) continue;
    std::vector<bool> from(n, false);
    for (std::size_t c = 0; c < d.alphabet_size(); ++c) {
      const StateId t = d.next(s, c);
      if (reach[t] && coreach[t]) from[t] = true;
    }
    for (bool grew = true; grew;) {
      grew = false;
      for (StateId u = 0; u < n; ++u)
        for (std::size_t c = 0; c < d.alphabet_size() && from[u]; ++c) {
          const StateId t = d.next(u, c);
          if (reach[t] && coreach[t] && !from[t]) from[t] = grew = true;
        }
    }
    if (from[s]) return true;
  }
  return false;
}

// Every string of length <= max_len over the given bytes.
inline std::vector<std::string> all_strings(const std::string& sigma, std::size_t max_len) {
  std::vector<std::string> out{""};
  std::vector<std::string> layer{""};
  for (std::size_t l = 0; l < max_len; ++l) {
    std::vector<std::string> next;
    for (const auto& s : layer)
      for (char c : sigma) next.push_back(s + c);
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Chunk start offsets for integer capacities, straight from the definitions
// with everything multiplied out:
//   start_k = floor(n * (m*c0 + sum_{1<=i<k} c_i) / (m*c0 + sum_{i>=1} c_i)).
inline std::vector<std::size_t> integer_starts(std::size_t n, std::size_t m,
                                               const std::vector<std::uint64_t>& caps) {
  using i128 = __int128;
  i128 tail = 0;
  for (std::size_t i = 1; i < caps.size(); ++i) tail += caps[i];
  const i128 den = static_cast<i128>(m) * caps[0] + tail;
  std::vector<std::size_t> starts{0};
  i128 acc = static_cast<i128>(m) * caps[0];
  for (std::size_t k = 1; k < caps.size(); ++k) {
    starts.push_back(static_cast<std::size_t>(static_cast<i128>(n) * acc / den));
    acc += caps[k];
  }
  return starts;
}

}  // namespace oracle
