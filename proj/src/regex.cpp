#include "specmatch/regex.hpp"

#include <algorithm>
#include <bitset>
#include <map>
#include <memory>

namespace specmatch {
namespace {

using ByteSet = std::bitset<256>;

struct Node {
  enum class Kind { kEmpty, kSet, kConcat, kAlt, kRepeat };
  Kind kind = Kind::kEmpty;
  ByteSet set;
  std::vector<std::unique_ptr<Node>> children;
  std::size_t min = 0;
  std::size_t max = 0;  // kUnbounded for '*' / '+' / {m,}
};
constexpr std::size_t kUnbounded = static_cast<std::size_t>(-1);

class Parser {
 public:
  Parser(std::string_view pattern, ByteSet universe) : p_(pattern), universe_(universe) {}

  std::unique_ptr<Node> parse() {
    auto node = alternation();
    if (pos_ != p_.size()) {
      if (p_[pos_] == ')') throw RegexError(pos_, "unmatched ')'");
      throw RegexError(pos_, "unexpected character");
    }
    return node;
  }

 private:
  bool at_end() const { return pos_ >= p_.size(); }
  char peek() const { return p_[pos_]; }

  std::unique_ptr<Node> alternation() {
    auto first = concatenation();
    if (at_end() || peek() != '|') return first;
    auto alt = std::make_unique<Node>();
    alt->kind = Node::Kind::kAlt;
    alt->children.push_back(std::move(first));
    while (!at_end() && peek() == '|') {
      ++pos_;
      alt->children.push_back(concatenation());
    }
    return alt;
  }

  std::unique_ptr<Node> concatenation() {
    auto cat = std::make_unique<Node>();
    cat->kind = Node::Kind::kConcat;
    while (!at_end() && peek() != '|' && peek() != ')') {
      cat->children.push_back(repetition());
    }
    if (cat->children.empty()) {
      cat->kind = Node::Kind::kEmpty;
    } else if (cat->children.size() == 1) {
      return std::move(cat->children.front());
    }
    return cat;
  }

  std::unique_ptr<Node> repetition() {
    auto node = atom();
    while (!at_end()) {
      const char c = peek();
      std::size_t lo = 0, hi = 0;
      if (c == '*') {
        lo = 0, hi = kUnbounded;
        ++pos_;
      } else if (c == '+') {
        lo = 1, hi = kUnbounded;
        ++pos_;
      } else if (c == '?') {
        lo = 0, hi = 1;
        ++pos_;
      } else if (c == '{') {
        std::tie(lo, hi) = bounds();
      } else {
        break;
      }
      auto rep = std::make_unique<Node>();
      rep->kind = Node::Kind::kRepeat;
      rep->min = lo;
      rep->max = hi;
      rep->children.push_back(std::move(node));
      node = std::move(rep);
    }
    return node;
  }

  std::size_t number() {
    const std::size_t begin = pos_;
    std::size_t v = 0;
    while (!at_end() && peek() >= '0' && peek() <= '9') {
      v = v * 10 + static_cast<std::size_t>(peek() - '0');
      if (v > 100000) throw RegexError(begin, "repetition count too large");
      ++pos_;
    }
    if (pos_ == begin) throw RegexError(pos_, "expected a number");
    return v;
  }

  std::pair<std::size_t, std::size_t> bounds() {
    const std::size_t open = pos_++;
    const std::size_t lo = number();
    std::size_t hi = lo;
    if (!at_end() && peek() == ',') {
      ++pos_;
      hi = (!at_end() && peek() == '}') ? kUnbounded : number();
    }
    if (at_end() || peek() != '}') throw RegexError(pos_, "expected '}'");
    ++pos_;
    if (hi < lo) throw RegexError(open, "repetition bounds out of order");
    return {lo, hi};
  }

  std::unique_ptr<Node> atom() {
    const std::size_t at = pos_;
    const char c = peek();
    switch (c) {
      case '(': {
        ++pos_;
        auto inner = alternation();
        if (at_end() || peek() != ')') throw RegexError(at, "unmatched '('");
        ++pos_;
        return inner;
      }
      case '[':
        return set_node(bracket());
      case '.':
        ++pos_;
        return set_node(universe_);
      case '\\':
        return set_node(escape());
      case '*':
      case '+':
      case '?':
      case '{':
        throw RegexError(at, std::string("nothing to repeat before '") + c + "'");
      case ']':
      case '}':
        throw RegexError(at, std::string("unexpected '") + c + "'");
      default: {
        ++pos_;
        ByteSet s;
        s.set(static_cast<unsigned char>(c));
        return set_node(s);
      }
    }
  }

  static std::unique_ptr<Node> set_node(const ByteSet& s) {
    auto n = std::make_unique<Node>();
    n->kind = Node::Kind::kSet;
    n->set = s;
    return n;
  }

  static int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  }

  ByteSet escape() {
    const std::size_t at = pos_++;
    if (at_end()) throw RegexError(at, "dangling escape");
    const char c = p_[pos_++];
    ByteSet s;
    auto range = [&s](int lo, int hi) {
      for (int b = lo; b <= hi; ++b) s.set(static_cast<std::size_t>(b));
    };
    switch (c) {
      case 'd': range('0', '9'); break;
      case 'w': range('0', '9'); range('A', 'Z'); range('a', 'z'); s.set('_'); break;
      case 's': for (char w : {' ', '\t', '\n', '\r', '\f', '\v'}) s.set(static_cast<unsigned char>(w)); break;
      case 'n': s.set('\n'); break;
      case 't': s.set('\t'); break;
      case 'r': s.set('\r'); break;
      case 'x': {
        if (pos_ + 2 > p_.size()) throw RegexError(at, "\\x needs two hex digits");
        const int hi = hex_digit(p_[pos_]), lo = hex_digit(p_[pos_ + 1]);
        if (hi < 0 || lo < 0) throw RegexError(at, "\\x needs two hex digits");
        pos_ += 2;
        s.set(static_cast<std::size_t>(hi * 16 + lo));
        break;
      }
      default:
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) {
          throw RegexError(at, std::string("unknown escape '\\") + c + "'");
        }
        s.set(static_cast<unsigned char>(c));
    }
    return s;
  }

  ByteSet bracket() {
    const std::size_t open = pos_++;
    bool negate = false;
    if (!at_end() && peek() == '^') {
      negate = true;
      ++pos_;
    }
    ByteSet s;
    bool first = true;
    for (;;) {
      if (at_end()) throw RegexError(open, "unterminated character class");
      if (peek() == ']' && !first) {
        ++pos_;
        break;
      }
      first = false;
      ByteSet item;
      int lo = -1;
      if (peek() == '\\') {
        item = escape();
        if (item.count() == 1) {
          for (int b = 0; b < 256; ++b) {
            if (item.test(static_cast<std::size_t>(b))) lo = b;
          }
        }
      } else {
        lo = static_cast<unsigned char>(p_[pos_++]);
        item.set(static_cast<std::size_t>(lo));
      }
      if (lo >= 0 && pos_ + 1 < p_.size() && peek() == '-' && p_[pos_ + 1] != ']') {
        const std::size_t dash = pos_++;
        int hi;
        if (peek() == '\\') {
          const ByteSet e = escape();
          if (e.count() != 1) throw RegexError(dash, "class escape cannot end a range");
          hi = 0;
          while (!e.test(static_cast<std::size_t>(hi))) ++hi;
        } else {
          hi = static_cast<unsigned char>(p_[pos_++]);
        }
        if (hi < lo) throw RegexError(dash, "character range out of order");
        for (int b = lo; b <= hi; ++b) item.set(static_cast<std::size_t>(b));
      }
      s |= item;
    }
    if (negate) s = universe_ & ~s;
    return s;
  }

  std::string_view p_;
  ByteSet universe_;
  std::size_t pos_ = 0;
};

// Thompson NFA: every state has epsilon edges and at most one byte-set edge.
struct Nfa {
  struct State {
    std::vector<std::uint32_t> eps;
    ByteSet set;
    std::uint32_t target = 0;
    bool has_edge = false;
  };
  std::vector<State> states;
  std::size_t limit = 0;

  std::uint32_t add() {
    if (states.size() >= limit) throw RegexError(0, "pattern expands beyond the NFA size limit");
    states.emplace_back();
    return static_cast<std::uint32_t>(states.size() - 1);
  }
};

struct Fragment {
  std::uint32_t in, out;
};

Fragment build(Nfa& nfa, const Node& node) {
  switch (node.kind) {
    case Node::Kind::kEmpty: {
      const auto s = nfa.add();
      return {s, s};
    }
    case Node::Kind::kSet: {
      const auto a = nfa.add();
      const auto b = nfa.add();
      nfa.states[a].set = node.set;
      nfa.states[a].target = b;
      nfa.states[a].has_edge = true;
      return {a, b};
    }
    case Node::Kind::kConcat: {
      Fragment f = build(nfa, *node.children.front());
      for (std::size_t i = 1; i < node.children.size(); ++i) {
        const Fragment g = build(nfa, *node.children[i]);
        nfa.states[f.out].eps.push_back(g.in);
        f.out = g.out;
      }
      return f;
    }
    case Node::Kind::kAlt: {
      const auto in = nfa.add();
      const auto out = nfa.add();
      for (const auto& child : node.children) {
        const Fragment g = build(nfa, *child);
        nfa.states[in].eps.push_back(g.in);
        nfa.states[g.out].eps.push_back(out);
      }
      return {in, out};
    }
    case Node::Kind::kRepeat: {
      const Node& body = *node.children.front();
      const auto in = nfa.add();
      std::uint32_t cur = in;
      for (std::size_t i = 0; i < node.min; ++i) {
        const Fragment g = build(nfa, body);
        nfa.states[cur].eps.push_back(g.in);
        cur = g.out;
      }
      if (node.max == kUnbounded) {
        const auto hub = nfa.add();
        nfa.states[cur].eps.push_back(hub);
        const Fragment g = build(nfa, body);
        nfa.states[hub].eps.push_back(g.in);
        nfa.states[g.out].eps.push_back(hub);
        return {in, hub};
      }
      const auto out = nfa.add();
      nfa.states[cur].eps.push_back(out);
      for (std::size_t i = node.min; i < node.max; ++i) {
        const Fragment g = build(nfa, body);
        nfa.states[cur].eps.push_back(g.in);
        nfa.states[g.out].eps.push_back(out);
        cur = g.out;
      }
      return {in, out};
    }
  }
  return {0, 0};
}

void collect_bytes(const Node& node, ByteSet& acc) {
  if (node.kind == Node::Kind::kSet) acc |= node.set;
  for (const auto& c : node.children) collect_bytes(*c, acc);
}

void closure(const Nfa& nfa, std::vector<std::uint32_t>& set, std::vector<char>& seen) {
  std::vector<std::uint32_t> stack(set.begin(), set.end());
  for (auto s : set) seen[s] = 1;
  while (!stack.empty()) {
    const auto s = stack.back();
    stack.pop_back();
    for (auto t : nfa.states[s].eps) {
      if (!seen[t]) {
        seen[t] = 1;
        set.push_back(t);
        stack.push_back(t);
      }
    }
  }
  for (auto s : set) seen[s] = 0;
  std::sort(set.begin(), set.end());
}

}  // namespace

Dfa compile_regex(std::string_view pattern, const RegexOptions& options) {
  ByteSet universe;
  if (options.alphabet) {
    for (auto b : *options.alphabet) universe.set(b);
  } else {
    for (int b = options.universe_lo; b <= options.universe_hi; ++b) {
      universe.set(static_cast<std::size_t>(b));
    }
  }
  const auto ast = Parser(pattern, universe).parse();

  Nfa nfa;
  nfa.limit = options.max_nfa_states;
  const Fragment frag = build(nfa, *ast);

  std::vector<std::uint8_t> alphabet;
  if (options.alphabet) {
    alphabet = *options.alphabet;
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  } else {
    ByteSet used;
    collect_bytes(*ast, used);
    for (int b = 0; b < 256; ++b) {
      if (used.test(static_cast<std::size_t>(b))) alphabet.push_back(static_cast<std::uint8_t>(b));
    }
  }
  const std::size_t k = alphabet.size();

  std::map<std::vector<std::uint32_t>, StateId> ids;
  std::vector<std::vector<std::uint32_t>> subsets;
  std::vector<StateId> delta;
  std::vector<StateId> finals;
  std::vector<char> seen(nfa.states.size(), 0);

  auto intern = [&](std::vector<std::uint32_t> set) {
    const auto [it, inserted] = ids.emplace(set, static_cast<StateId>(subsets.size()));
    if (inserted) subsets.push_back(std::move(set));
    return it->second;
  };

  std::vector<std::uint32_t> init{frag.in};
  closure(nfa, init, seen);
  intern(std::move(init));
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    const auto current = subsets[i];
    if (std::binary_search(current.begin(), current.end(), frag.out)) {
      finals.push_back(static_cast<StateId>(i));
    }
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<std::uint32_t> move;
      for (auto s : current) {
        const auto& st = nfa.states[s];
        if (st.has_edge && st.set.test(alphabet[c]) && !seen[st.target]) {
          seen[st.target] = 1;
          move.push_back(st.target);
        }
      }
      for (auto t : move) seen[t] = 0;
      closure(nfa, move, seen);
      delta.push_back(intern(std::move(move)));
    }
  }
  Dfa dfa(std::move(alphabet), subsets.size(), std::move(delta), 0, std::move(finals));
  return options.minimize ? minimize(dfa) : dfa;
}

}  // namespace specmatch
