#include "specmatch/matching.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <functional>
#include <stdexcept>

namespace specmatch {
namespace {

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
}

template <std::size_t W>
void lane_group(const RowOffset* sbase, const std::uint8_t* input, const LaneDescriptor* lanes,
                std::size_t count, std::size_t steps, RowOffset* out) {
  std::array<std::size_t, W> pos;
  std::array<RowOffset, W> row;
  for (std::size_t l = 0; l < W; ++l) {
    const LaneDescriptor& d = lanes[std::min(l, count - 1)];
    pos[l] = d.input_offset;
    row[l] = d.row;
  }
  for (std::size_t i = steps; i > 0; --i) {
    for (std::size_t l = 0; l < W; ++l) {
      row[l] = sbase[row[l] + input[pos[l]]];
      ++pos[l];
    }
  }
  for (std::size_t l = 0; l < count; ++l) out[l] = row[l];
}

void lane_group_dynamic(const RowOffset* sbase, const std::uint8_t* input,
                        const LaneDescriptor* lanes, std::size_t count, std::size_t width,
                        std::size_t steps, RowOffset* out) {
  std::vector<std::size_t> pos(width);
  std::vector<RowOffset> row(width);
  for (std::size_t l = 0; l < width; ++l) {
    const LaneDescriptor& d = lanes[std::min(l, count - 1)];
    pos[l] = d.input_offset;
    row[l] = d.row;
  }
  for (std::size_t i = steps; i > 0; --i) {
    for (std::size_t l = 0; l < width; ++l) {
      row[l] = sbase[row[l] + input[pos[l]]];
      ++pos[l];
    }
  }
  for (std::size_t l = 0; l < count; ++l) out[l] = row[l];
}

SpeculativeRun run_chunks(const FlatTable& table, std::span<const std::uint8_t> input,
                          const ChunkPlan& plan, WorkerPool& pool, const ChunkOptions& options,
                          const std::function<std::vector<StateId>(std::size_t, WorkerStats&)>&
                              candidates_for) {
  SpeculativeRun run;
  run.maps.resize(plan.workers());
  run.workers.resize(plan.workers());
  pool.run(plan.workers(), [&](std::size_t k) {
    const auto t0 = Clock::now();
    WorkerStats& stats = run.workers[k];
    const std::vector<StateId> cands = candidates_for(k, stats);
    run.maps[k] = match_chunk(table, input, plan.chunks[k], cands, options, &stats);
    stats.match_us = micros_since(t0);
  });
  return run;
}

}  // namespace

MatchOutcome match_sequential(const FlatTable& table, std::span<const std::uint8_t> input) {
  const auto t0 = Clock::now();
  MatchOutcome out;
  const RowOffset row = table.advance(table.start_row(), input);
  out.last_state = table.state_of(row);
  out.accepted = table.is_final_state(out.last_state);
  WorkerStats w;
  w.symbols = input.size();
  w.candidates = 1;
  w.match_us = micros_since(t0);
  out.workers.push_back(w);
  out.phases.match_us = w.match_us;
  out.phases.total_us = w.match_us;
  return out;
}

StateMap match_chunk(const FlatTable& table, std::span<const std::uint8_t> input,
                     const Chunk& range, std::span<const StateId> candidates,
                     const ChunkOptions& options, WorkerStats* stats) {
  const auto text = input.subspan(range.begin, range.length());
  std::vector<StateId> from(candidates.begin(), candidates.end());
  std::vector<StateId> to(from.size());
  std::size_t consumed = 0;
  if (options.lane_width > 0 && !text.empty() && !from.empty()) {
    std::vector<LaneDescriptor> lanes;
    lanes.reserve(from.size());
    for (StateId q : from) lanes.push_back({range.begin, table.row_of(q)});
    const auto rows = match_lanes(table, input, lanes, text.size(), options.lane_width);
    for (std::size_t i = 0; i < rows.size(); ++i) to[i] = table.state_of(rows[i]);
    consumed = text.size() * from.size();
  } else {
    for (std::size_t i = 0; i < from.size(); ++i) {
      RowOffset row = table.row_of(from[i]);
      if (options.sink_short_circuit) {
        row = table.advance_until_sink(row, text, consumed);
      } else {
        row = table.advance(row, text);
        consumed += text.size();
      }
      to[i] = table.state_of(row);
    }
  }
  if (stats) {
    stats->symbols += consumed;
    stats->candidates = from.size();
  }
  return StateMap(std::move(from), std::move(to));
}

std::vector<RowOffset> match_lanes(const FlatTable& table, std::span<const std::uint8_t> input,
                                   std::span<const LaneDescriptor> lanes, std::size_t steps,
                                   std::size_t lane_width) {
  if (lane_width == 0) throw std::invalid_argument("lane width must be positive");
  for (const auto& d : lanes) {
    if (d.input_offset + steps > input.size()) {
      throw std::out_of_range("lane reads past the end of the input");
    }
  }
  std::vector<RowOffset> out(lanes.size());
  const RowOffset* sbase = table.sbase().data();
  for (std::size_t g = 0; g < lanes.size(); g += lane_width) {
    const std::size_t count = std::min(lane_width, lanes.size() - g);
    if (lane_width == kDefaultLaneWidth) {
      lane_group<kDefaultLaneWidth>(sbase, input.data(), lanes.data() + g, count, steps,
                                    out.data() + g);
    } else {
      lane_group_dynamic(sbase, input.data(), lanes.data() + g, count, lane_width, steps,
                         out.data() + g);
    }
  }
  return out;
}

SpeculativeRun match_speculative_basic(const FlatTable& table, std::span<const std::uint8_t> input,
                                       const ChunkPlan& plan, WorkerPool& pool,
                                       const ChunkOptions& options) {
  std::vector<StateId> live;
  const auto sink = table.sink();
  for (StateId s = 0; s < table.state_count(); ++s) {
    if (!sink || s != *sink) live.push_back(s);
  }
  const StateId start = table.state_of(table.start_row());
  return run_chunks(table, input, plan, pool, options,
                    [&](std::size_t k, WorkerStats&) {
                      return k == 0 ? std::vector<StateId>{start} : live;
                    });
}

SpeculativeRun match_speculative_lookahead(const FlatTable& table,
                                           std::span<const std::uint8_t> input,
                                           const LookaheadTable& lookahead,
                                           const ChunkPlan& plan, WorkerPool& pool,
                                           const ChunkOptions& options) {
  if (lookahead.depth() != plan.r) {
    throw std::invalid_argument("lookahead table depth differs from the plan's r");
  }
  const StateId start = table.state_of(table.start_row());
  return run_chunks(table, input, plan, pool, options, [&](std::size_t k, WorkerStats& stats) {
    const Chunk& c = plan.chunks[k];
    if (k == 0) return std::vector<StateId>{start};
    const auto window = input.subspan(c.lookahead_begin, c.lookahead_length());
    stats.lookahead_reads = window.size();
    if (window.size() < lookahead.depth()) {
      // The entire prefix is visible: the boundary state is known exactly.
      return std::vector<StateId>{table.state_of(table.advance(table.start_row(), window))};
    }
    return lookahead.candidates(window);
  });
}

std::size_t planned_work_bound(const ChunkPlan& plan) {
  std::size_t total = 0;
  for (std::size_t k = 0; k < plan.chunks.size(); ++k) {
    const Chunk& c = plan.chunks[k];
    total += c.length() * c.budget + c.lookahead_length();
  }
  return total;
}

}  // namespace specmatch
