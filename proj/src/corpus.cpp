#include "specmatch/corpus.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

#include "specmatch/regex.hpp"

namespace specmatch {
namespace {

constexpr std::string_view kPrintable =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

constexpr std::string_view kAmino = "ACDEFGHIKLMNPQRSTVWY";

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

char amino(std::mt19937_64& rng) { return kAmino[pick(rng, kAmino.size())]; }

std::string amino_set(std::mt19937_64& rng) {
  std::string s;
  const std::size_t k = 2 + pick(rng, 3);
  while (s.size() < k) {
    const char c = amino(rng);
    if (s.find(c) == std::string::npos) s += c;
  }
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

std::vector<std::uint8_t> alphabet_bytes(std::size_t size) {
  if (size > kPrintable.size()) {
    throw std::invalid_argument("at most " + std::to_string(kPrintable.size()) +
                                " printable symbols are available");
  }
  std::vector<std::uint8_t> out(kPrintable.begin(), kPrintable.begin() + size);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint8_t> protein_alphabet() { return {kAmino.begin(), kAmino.end()}; }

Dfa random_dfa(const RandomDfaOptions& options, std::mt19937_64& rng) {
  const std::size_t live = options.live_states;
  const std::size_t k = options.alphabet_size;
  if (live == 0 || k == 0) throw std::invalid_argument("random DFA needs states and symbols");
  const std::size_t total = live + (options.with_sink ? 1 : 0);
  std::vector<StateId> delta(total * k, kNoState);

  // Spanning tree: state i hangs off a free (state, symbol) slot of an
  // earlier state, so everything is reachable from state 0.
  std::vector<std::size_t> free_slots;
  for (std::size_t c = 0; c < k; ++c) free_slots.push_back(c);
  for (std::size_t i = 1; i < live; ++i) {
    if (free_slots.empty()) throw std::logic_error("spanning tree ran out of slots");
    const std::size_t j = pick(rng, free_slots.size());
    delta[free_slots[j]] = static_cast<StateId>(i);
    free_slots[j] = free_slots.back();
    free_slots.pop_back();
    for (std::size_t c = 0; c < k; ++c) free_slots.push_back(i * k + c);
  }

  std::bernoulli_distribution to_sink(options.with_sink ? options.sink_density : 0.0);
  const auto sink = static_cast<StateId>(live);
  for (std::size_t slot = 0; slot < live * k; ++slot) {
    if (delta[slot] != kNoState) continue;
    delta[slot] = to_sink(rng) ? sink : static_cast<StateId>(pick(rng, live));
  }
  if (options.with_sink) std::fill(delta.begin() + live * k, delta.end(), sink);

  std::bernoulli_distribution is_final(options.final_density);
  std::vector<StateId> finals;
  for (std::size_t s = 0; s < live; ++s) {
    if (is_final(rng)) finals.push_back(static_cast<StateId>(s));
  }
  if (finals.empty()) finals.push_back(static_cast<StateId>(pick(rng, live)));
  return Dfa(alphabet_bytes(k), total, std::move(delta), 0, std::move(finals));
}

Dfa random_dfa_near(std::size_t target, std::size_t alphabet_size, double tolerance,
                    std::mt19937_64& rng, std::size_t attempts) {
  const double lo = static_cast<double>(target) * (1.0 - tolerance);
  const double hi = static_cast<double>(target) * (1.0 + tolerance);
  RandomDfaOptions opt;
  opt.alphabet_size = alphabet_size;
  opt.live_states = target;
  for (std::size_t a = 0; a < attempts; ++a) {
    Dfa d = minimize(random_dfa(opt, rng));
    const auto got = static_cast<double>(d.live_state_count());
    if (got >= lo && got <= hi) return d;
    // Minimization merged too much; aim higher next time.
    if (got < lo) opt.live_states += std::max<std::size_t>(1, target / 10);
    if (got > hi && opt.live_states > 1) --opt.live_states;
  }
  throw std::runtime_error("could not generate a DFA with about " + std::to_string(target) +
                           " states");
}

std::string prosite_like_pattern(std::mt19937_64& rng, std::size_t elements) {
  std::string out;
  for (std::size_t i = 0; i < elements; ++i) {
    if (i > 0) out += '-';
    switch (pick(rng, 4)) {
      case 0:
        out += amino(rng);
        break;
      case 1:
        out += '[' + amino_set(rng) + ']';
        break;
      case 2:
        out += '{' + amino_set(rng) + '}';
        break;
      default:
        out += 'x';
        break;
    }
    if (pick(rng, 4) == 0) {
      const std::size_t lo = 1 + pick(rng, 3);
      const std::size_t hi = lo + pick(rng, 3);
      out += '(' + std::to_string(lo);
      if (hi != lo) out += ',' + std::to_string(hi);
      out += ')';
    }
  }
  return out;
}

std::string prosite_to_regex(const std::string& motif) {
  std::string re = ".*";
  std::size_t i = 0;
  while (i < motif.size()) {
    const char c = motif[i];
    if (c == '-') {
      ++i;
      continue;
    }
    if (c == 'x') {
      re += '.';
      ++i;
    } else if (c == '[' || c == '{') {
      const char close = c == '[' ? ']' : '}';
      const auto end = motif.find(close, i);
      if (end == std::string::npos) throw std::invalid_argument("unterminated set in motif");
      re += c == '[' ? "[" : "[^";
      re += motif.substr(i + 1, end - i - 1);
      re += ']';
      i = end + 1;
    } else if (kAmino.find(c) != std::string_view::npos) {
      re += c;
      ++i;
    } else {
      throw std::invalid_argument(std::string("unexpected motif character '") + c + "'");
    }
    if (i < motif.size() && motif[i] == '(') {
      const auto end = motif.find(')', i);
      if (end == std::string::npos) throw std::invalid_argument("unterminated repeat in motif");
      re += '{' + motif.substr(i + 1, end - i - 1) + '}';
      i = end + 1;
    }
  }
  return re + ".*";
}

Dfa compile_prosite(const std::string& motif) {
  RegexOptions opt;
  opt.alphabet = protein_alphabet();
  return compile_regex(prosite_to_regex(motif), opt);
}

std::vector<std::uint8_t> uniform_input(const Dfa& dfa, std::size_t n, std::mt19937_64& rng) {
  const auto& sigma = dfa.alphabet();
  if (sigma.empty() && n > 0) throw std::invalid_argument("DFA has an empty alphabet");
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = sigma[pick(rng, sigma.size())];
  return out;
}

std::vector<std::uint8_t> planted_input(const Dfa& dfa, std::size_t n, std::mt19937_64& rng) {
  const std::size_t q = dfa.state_count();
  const std::size_t k = dfa.alphabet_size();
  constexpr std::size_t kFar = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<StateId>> preds(q);
  for (StateId s = 0; s < q; ++s) {
    for (std::size_t c = 0; c < k; ++c) preds[dfa.next(s, c)].push_back(s);
  }
  std::vector<std::size_t> dist(q, kFar);
  std::deque<StateId> todo;
  for (StateId f : dfa.finals()) {
    dist[f] = 0;
    todo.push_back(f);
  }
  while (!todo.empty()) {
    const StateId s = todo.front();
    todo.pop_front();
    for (StateId p : preds[s]) {
      if (dist[p] == kFar) {
        dist[p] = dist[s] + 1;
        todo.push_back(p);
      }
    }
  }
  if (dist[dfa.start()] == kFar) throw std::runtime_error("the DFA accepts no input");
  std::size_t reach = 0;
  for (auto d : dist) {
    if (d != kFar) reach = std::max(reach, d);
  }

  // States that can take another step and still reach a final state: prune
  // co-reachable states without such a successor until nothing changes.
  std::vector<bool> endless(q);
  for (StateId s = 0; s < q; ++s) endless[s] = dist[s] != kFar;
  for (bool changed = true; changed;) {
    changed = false;
    for (StateId s = 0; s < q; ++s) {
      if (!endless[s]) continue;
      bool step = false;
      for (std::size_t c = 0; c < k && !step; ++c) step = endless[dfa.next(s, c)];
      if (!step) {
        endless[s] = false;
        changed = true;
      }
    }
  }

  std::vector<std::uint8_t> out;
  out.reserve(n);
  StateId s = dfa.start();
  std::vector<std::size_t> ok;
  const std::size_t walk = endless[s] && n > reach ? n - reach : 0;
  for (std::size_t i = 0; i < walk; ++i) {
    ok.clear();
    for (std::size_t c = 0; c < k; ++c) {
      if (endless[dfa.next(s, c)]) ok.push_back(c);
    }
    const std::size_t c = ok[pick(rng, ok.size())];
    out.push_back(dfa.alphabet()[c]);
    s = dfa.next(s, c);
  }
  while (dist[s] > 0) {
    ok.clear();
    for (std::size_t c = 0; c < k; ++c) {
      if (dist[dfa.next(s, c)] + 1 == dist[s]) ok.push_back(c);
    }
    const std::size_t c = ok[pick(rng, ok.size())];
    out.push_back(dfa.alphabet()[c]);
    s = dfa.next(s, c);
  }
  return out;
}

}  // namespace specmatch
