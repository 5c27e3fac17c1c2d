#include "specmatch/grail.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace specmatch {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t b = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > b) out.push_back(line.substr(b, i - b));
  }
  return out;
}

std::uint64_t parse_state(std::string_view tok, std::size_t lineno) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw GrailError(lineno, "expected a state number, got '" + std::string(tok) + "'");
  }
  if (v >= kNoState - 1) throw GrailError(lineno, "state number too large");
  return v;
}

}  // namespace

Dfa parse_grail(std::string_view text) {
  std::optional<std::uint64_t> start;
  std::set<std::uint64_t> states;
  std::set<std::uint64_t> finals;
  std::map<std::pair<std::uint64_t, std::uint8_t>, std::uint64_t> edges;
  std::set<std::uint8_t> labels;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 3) {
      throw GrailError(lineno, "expected 3 fields, got " + std::to_string(tok.size()));
    }
    if (tok[0] == "(START)") {
      if (tok[1] != "|-") throw GrailError(lineno, "expected '|-' after (START)");
      const auto s = parse_state(tok[2], lineno);
      if (start && *start != s) throw GrailError(lineno, "multiple start states");
      start = s;
      states.insert(s);
    } else if (tok[2] == "(FINAL)") {
      if (tok[1] != "-|") throw GrailError(lineno, "expected '-|' before (FINAL)");
      const auto s = parse_state(tok[0], lineno);
      finals.insert(s);
      states.insert(s);
    } else {
      const auto src = parse_state(tok[0], lineno);
      const auto dst = parse_state(tok[2], lineno);
      if (tok[1].size() != 1) {
        throw GrailError(lineno, "label '" + std::string(tok[1]) +
                                     "' is not a single byte");
      }
      const auto label = static_cast<std::uint8_t>(tok[1][0]);
      const auto [it, inserted] = edges.emplace(std::make_pair(src, label), dst);
      if (!inserted && it->second != dst) {
        throw GrailError(lineno, "nondeterministic transition on '" +
                                     std::string(tok[1]) + "' from state " +
                                     std::to_string(src));
      }
      states.insert(src);
      states.insert(dst);
      labels.insert(label);
    }
  }
  if (!start) throw GrailError(lineno, "no (START) line");

  std::map<std::uint64_t, StateId> dense;
  for (auto s : states) dense.emplace(s, static_cast<StateId>(dense.size()));
  const std::vector<std::uint8_t> alphabet(labels.begin(), labels.end());
  std::array<int, 256> sym{};
  sym.fill(-1);
  for (std::size_t i = 0; i < alphabet.size(); ++i) sym[alphabet[i]] = static_cast<int>(i);

  const std::size_t explicit_count = dense.size();
  const std::size_t k = alphabet.size();
  const bool total = edges.size() == explicit_count * k;
  const std::size_t count = explicit_count + (total ? 0 : 1);
  const auto sink = static_cast<StateId>(explicit_count);
  std::vector<StateId> delta(count * k, sink);
  for (const auto& [key, dst] : edges) {
    delta[dense.at(key.first) * k + static_cast<std::size_t>(sym[key.second])] = dense.at(dst);
  }
  std::vector<StateId> fin;
  for (auto f : finals) fin.push_back(dense.at(f));
  return Dfa(alphabet, count, std::move(delta), dense.at(*start), std::move(fin));
}

std::string emit_grail(const Dfa& dfa) {
  for (auto b : dfa.alphabet()) {
    if (b == ' ' || b == '\t' || b == '\n' || b == '\r' || b == '\v' || b == '\f') {
      throw std::invalid_argument("whitespace byte " + std::to_string(b) +
                                  " cannot be written as a Grail+ label");
    }
  }
  std::ostringstream out;
  const auto sink = dfa.sink();
  out << "(START) |- " << dfa.start() << '\n';
  for (StateId s = 0; s < dfa.state_count(); ++s) {
    if (sink && s == *sink) continue;
    for (std::size_t c = 0; c < dfa.alphabet_size(); ++c) {
      const StateId t = dfa.next(s, c);
      if (sink && t == *sink) continue;
      out << s << ' ' << static_cast<char>(dfa.alphabet()[c]) << ' ' << t << '\n';
    }
  }
  for (StateId f : dfa.finals()) out << f << " -| (FINAL)\n";
  return out.str();
}

}  // namespace specmatch
