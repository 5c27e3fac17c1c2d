#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "specmatch/dfa.hpp"

namespace specmatch {

/// Raised when a merge finds a boundary state that the next chunk was not
/// matched for. Under sound candidate sets this cannot happen.
class SoundnessError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Per-chunk map from candidate initial state to the state reached after the
/// chunk. The domain is the chunk's candidate set, kept sorted.
class StateMap {
 public:
  StateMap() = default;
  StateMap(std::vector<StateId> from, std::vector<StateId> to);

  static StateMap identity(std::span<const StateId> domain);

  std::size_t size() const { return from_.size(); }
  bool empty() const { return from_.empty(); }
  const std::vector<StateId>& domain() const { return from_; }
  const std::vector<StateId>& image() const { return to_; }

  /// Target for `q`, or nullopt when q is outside the domain.
  std::optional<StateId> find(StateId q) const;
  /// Target for `q`; throws SoundnessError when q is outside the domain.
  StateId at(StateId q) const;

  friend bool operator==(const StateMap&, const StateMap&) = default;

 private:
  std::vector<StateId> from_;
  std::vector<StateId> to_;
};

/// (first then second): result[q] = second[first[q]] for q in first's
/// domain. A value equal to `sink` passes through unchanged. Entries whose
/// intermediate state second was not matched for are dropped: such a path
/// cannot be the real one when both candidate sets are sound (it arises when
/// a chunk is shorter than the lookahead), and a later at() on the dropped
/// state still raises SoundnessError.
StateMap compose_maps(const StateMap& first, const StateMap& second,
                      std::optional<StateId> sink);

/// Left fold from `start`: s <- maps[i][s], stopping at the sink.
StateId merge_sequential(std::span<const StateMap> maps, StateId start,
                         std::optional<StateId> sink);

/// Balanced-tree fold of compose_maps; equals the left fold by associativity.
StateMap reduce_binary(std::span<const StateMap> maps, std::optional<StateId> sink);

/// Two-level merge: each run of `groups[j]` adjacent maps is composed into
/// one (a node leader's job), then the group results are folded from
/// `start` (the master's job). Empty groups are skipped; the sizes must add
/// up to maps.size().
StateId merge_two_tier(std::span<const StateMap> maps, std::span<const std::size_t> groups,
                       StateId start, std::optional<StateId> sink);

}  // namespace specmatch
