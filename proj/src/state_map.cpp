#include "specmatch/state_map.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace specmatch {

StateMap::StateMap(std::vector<StateId> from, std::vector<StateId> to)
    : from_(std::move(from)), to_(std::move(to)) {
  if (from_.size() != to_.size()) throw std::invalid_argument("state map domain/image size mismatch");
  if (!std::is_sorted(from_.begin(), from_.end())) {
    std::vector<std::size_t> order(from_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return from_[a] < from_[b]; });
    std::vector<StateId> f, t;
    for (auto i : order) {
      f.push_back(from_[i]);
      t.push_back(to_[i]);
    }
    from_ = std::move(f);
    to_ = std::move(t);
  }
  if (std::adjacent_find(from_.begin(), from_.end()) != from_.end()) {
    throw std::invalid_argument("state map domain has duplicates");
  }
}

StateMap StateMap::identity(std::span<const StateId> domain) {
  std::vector<StateId> d(domain.begin(), domain.end());
  return StateMap(d, d);
}

std::optional<StateId> StateMap::find(StateId q) const {
  const auto it = std::lower_bound(from_.begin(), from_.end(), q);
  if (it == from_.end() || *it != q) return std::nullopt;
  return to_[static_cast<std::size_t>(it - from_.begin())];
}

StateId StateMap::at(StateId q) const {
  if (auto v = find(q)) return *v;
  throw SoundnessError("state " + std::to_string(q) + " is not in the chunk's candidate set");
}

StateMap compose_maps(const StateMap& first, const StateMap& second,
                      std::optional<StateId> sink) {
  std::vector<StateId> from;
  std::vector<StateId> to;
  from.reserve(first.size());
  to.reserve(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    const StateId mid = first.image()[i];
    std::optional<StateId> end = (sink && mid == *sink) ? std::optional<StateId>(mid) : second.find(mid);
    if (!end) continue;
    from.push_back(first.domain()[i]);
    to.push_back(*end);
  }
  return StateMap(std::move(from), std::move(to));
}

StateId merge_sequential(std::span<const StateMap> maps, StateId start,
                         std::optional<StateId> sink) {
  StateId s = start;
  for (const StateMap& m : maps) {
    if (sink && s == *sink) return s;
    s = m.at(s);
  }
  return s;
}

StateMap reduce_binary(std::span<const StateMap> maps, std::optional<StateId> sink) {
  if (maps.empty()) throw std::invalid_argument("reduce_binary needs at least one map");
  std::vector<StateMap> level(maps.begin(), maps.end());
  while (level.size() > 1) {
    std::vector<StateMap> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      next.push_back(compose_maps(level[i], level[i + 1], sink));
    }
    if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
    level = std::move(next);
  }
  return std::move(level.front());
}

StateId merge_two_tier(std::span<const StateMap> maps, std::span<const std::size_t> groups,
                       StateId start, std::optional<StateId> sink) {
  std::vector<StateMap> tops;
  std::size_t first = 0;
  for (std::size_t g : groups) {
    if (g == 0) continue;
    if (first + g > maps.size()) throw std::invalid_argument("groups cover more maps than given");
    StateMap composed = maps[first];
    for (std::size_t k = first + 1; k < first + g; ++k) composed = compose_maps(composed, maps[k], sink);
    tops.push_back(std::move(composed));
    first += g;
  }
  if (first != maps.size()) throw std::invalid_argument("groups do not cover every map");
  return merge_sequential(tops, start, sink);
}

}  // namespace specmatch
