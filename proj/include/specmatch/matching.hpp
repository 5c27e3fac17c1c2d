#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "specmatch/flat_table.hpp"
#include "specmatch/partition.hpp"
#include "specmatch/speculation.hpp"
#include "specmatch/state_map.hpp"
#include "specmatch/worker_pool.hpp"

namespace specmatch {

inline constexpr std::size_t kDefaultLaneWidth = 8;

struct WorkerStats {
  /// Symbols consumed by the transition loop, summed over candidate states.
  std::size_t symbols = 0;
  /// Reverse lookahead symbols read before matching.
  std::size_t lookahead_reads = 0;
  std::size_t candidates = 0;
  double match_us = 0.0;

  std::size_t total_symbols() const { return symbols + lookahead_reads; }
};

struct PhaseTimes {
  double plan_us = 0.0;
  double match_us = 0.0;
  double merge_us = 0.0;
  double total_us = 0.0;
};

struct MatchOutcome {
  bool accepted = false;
  /// Last active state; the sink (or kNoState for a sink-less DFA) when the
  /// input contained a byte outside the alphabet.
  StateId last_state = kNoState;
  bool foreign_input = false;
  std::vector<WorkerStats> workers;
  PhaseTimes phases;

  std::size_t total_symbols() const {
    std::size_t n = 0;
    for (const auto& w : workers) n += w.total_symbols();
    return n;
  }
};

struct ChunkOptions {
  /// Stop a row once it reaches the sink.
  bool sink_short_circuit = true;
  /// Rows matched in lockstep by match_lanes; 0 selects the scalar loop.
  std::size_t lane_width = 0;
};

/// Matches the whole input from the start state in one pass.
MatchOutcome match_sequential(const FlatTable& table, std::span<const std::uint8_t> input);

/// Matches input[range.begin, range.end) once per candidate state.
StateMap match_chunk(const FlatTable& table, std::span<const std::uint8_t> input,
                     const Chunk& range, std::span<const StateId> candidates,
                     const ChunkOptions& options = {}, WorkerStats* stats = nullptr);

/// One lane of a lockstep batch: where to read input and which row to start in.
struct LaneDescriptor {
  std::size_t input_offset = 0;
  RowOffset row = 0;
};

/// Advances every lane `steps` symbols. Lanes are processed in groups of
/// `lane_width`; within a group each step gathers one symbol per lane, adds it
/// to the lane's row offset and gathers the next row offset. Partial groups
/// are padded by repeating the last lane.
std::vector<RowOffset> match_lanes(const FlatTable& table, std::span<const std::uint8_t> input,
                                   std::span<const LaneDescriptor> lanes, std::size_t steps,
                                   std::size_t lane_width = kDefaultLaneWidth);

struct SpeculativeRun {
  std::vector<StateMap> maps;
  std::vector<WorkerStats> workers;
};

/// Chunk 0 from the start state, every later chunk for all live states.
SpeculativeRun match_speculative_basic(const FlatTable& table, std::span<const std::uint8_t> input,
                                       const ChunkPlan& plan, WorkerPool& pool,
                                       const ChunkOptions& options = {});

/// Chunk 0 from the start state; chunk k >= 1 reads the r symbols before it
/// and is matched only for that suffix's candidate set. A chunk starting
/// before offset r has its whole prefix available and is matched for the
/// single state the prefix leads to.
SpeculativeRun match_speculative_lookahead(const FlatTable& table,
                                           std::span<const std::uint8_t> input,
                                           const LookaheadTable& lookahead,
                                           const ChunkPlan& plan, WorkerPool& pool,
                                           const ChunkOptions& options = {});

/// Upper bound on total symbols processed by a speculative run, from the plan:
/// chunk 0 once, each later chunk at most `budget` times, plus lookahead.
std::size_t planned_work_bound(const ChunkPlan& plan);

}  // namespace specmatch
