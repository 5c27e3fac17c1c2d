#include "specmatch/runtime.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace specmatch {
namespace {

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
}

// Below this a single timed run is dominated by clock granularity and
// scheduling noise.
constexpr double kMinTimedMicros = 50.0;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<std::uint8_t> profiling_sample(const FlatTable& table, std::size_t n) {
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(table.alphabet_size()) - 1);
  std::vector<std::uint8_t> out(n);
  for (auto& c : out) c = static_cast<std::uint8_t>(pick(rng));
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (mode == Mode::kLookahead && r < 1) {
    throw std::invalid_argument("lookahead mode needs r >= 1");
  }
  if (parallelism < 1) throw std::invalid_argument("parallelism must be at least 1");
  if (weights == WeightSource::kExplicit && capacities.size() != parallelism) {
    throw std::invalid_argument("explicit weights need one capacity per worker");
  }
  if (weights == WeightSource::kProfiled && profile_reps % 2 == 0) {
    throw std::invalid_argument("profiling repetitions must be odd");
  }
}

std::vector<double> ThreadTimer::time_run(const FlatTable& table,
                                          std::span<const std::uint8_t> sample) {
  std::vector<double> us(pool_.size());
  std::vector<RowOffset> sinkhole(pool_.size());
  pool_.run(pool_.size(), [&](std::size_t k) {
    const auto t0 = Clock::now();
    sinkhole[k] = table.advance(table.start_row(), sample);
    us[k] = micros_since(t0);
  });
  // Keeps the timed loop observable.
  volatile RowOffset keep = sinkhole.empty() ? 0 : sinkhole[0];
  (void)keep;
  return us;
}

SimulatedTimer::SimulatedTimer(std::vector<double> capacities, double jitter, std::uint64_t seed)
    : capacities_(std::move(capacities)), jitter_(jitter), state_(seed) {
  for (double c : capacities_) {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("capacity must be positive");
  }
  if (jitter_ < 0.0) throw std::invalid_argument("jitter must be non-negative");
}

std::vector<double> SimulatedTimer::time_run(const FlatTable&,
                                             std::span<const std::uint8_t> sample) {
  std::mt19937_64 rng(state_++);
  std::normal_distribution<double> noise(1.0, jitter_ > 0.0 ? jitter_ : 1.0);
  std::vector<double> us(capacities_.size());
  for (std::size_t k = 0; k < us.size(); ++k) {
    double f = jitter_ > 0.0 ? std::max(0.01, noise(rng)) : 1.0;
    us[k] = static_cast<double>(sample.size()) / (capacities_[k] * f);
  }
  return us;
}

std::vector<double> profile_workers(const FlatTable& table, std::span<const std::uint8_t> sample,
                                    std::size_t reps, MatchTimer& timer) {
  if (sample.size() < kMinProfileSample) {
    throw ProfilingError("profiling sample has " + std::to_string(sample.size()) +
                         " symbols; at least " + std::to_string(kMinProfileSample) +
                         " are needed");
  }
  if (reps == 0 || reps % 2 == 0) throw std::invalid_argument("repetitions must be odd");
  std::vector<std::vector<double>> runs(timer.workers());
  for (std::size_t i = 0; i < reps; ++i) {
    const auto us = timer.time_run(table, sample);
    for (std::size_t k = 0; k < us.size(); ++k) runs[k].push_back(us[k]);
  }
  std::vector<double> caps;
  caps.reserve(runs.size());
  for (auto& r : runs) {
    const double med = median(r);
    if (med < kMinTimedMicros) {
      throw ProfilingError("timed run took " + std::to_string(med) +
                           " us, too short to measure; enlarge the sample");
    }
    caps.push_back(static_cast<double>(sample.size()) / med);
  }
  return caps;
}

ParallelMatcher::ParallelMatcher(const Dfa& dfa, RunConfig config)
    : dfa_(dfa),
      config_(std::move(config)),
      table_(dfa),
      profile_(WorkerProfile::uniform(std::max<std::size_t>(config_.parallelism, 1))) {
  config_.validate();
  pool_ = std::make_unique<WorkerPool>(config_.parallelism);
  switch (config_.weights) {
    case WeightSource::kUniform:
      break;
    case WeightSource::kExplicit:
      profile_ = WorkerProfile(config_.capacities);
      break;
    case WeightSource::kProfiled:
      if (table_.alphabet_size() > 0) {
        const auto sample = profiling_sample(table_, config_.profile_sample);
        ThreadTimer timer(*pool_);
        profile_ = WorkerProfile(profile_workers(table_, sample, config_.profile_reps, timer));
      }
      break;
  }
}

void ParallelMatcher::use_lookahead(LookaheadTable table) {
  if (table.depth() != config_.r || table.state_count() != dfa_.state_count() ||
      table.alphabet_size() != dfa_.alphabet_size()) {
    throw std::invalid_argument("lookahead table does not fit this DFA and depth");
  }
  offline_ = std::move(table);
}

Speculation speculate(const Dfa& dfa, const FlatTable& table, std::span<const std::uint8_t> symbols,
                      const WorkerProfile& profile, const RunConfig& config, WorkerPool& pool,
                      const LookaheadTable* lookahead) {
  if (config.mode == Mode::kSequential) {
    throw std::invalid_argument("speculation needs basic or lookahead mode");
  }
  const auto t0 = Clock::now();
  const ChunkOptions options{config.sink_short_circuit, config.lane_width};
  std::optional<LookaheadTable> online;
  std::size_t m = std::max<std::size_t>(dfa.live_state_count(), 1);
  std::size_t r = 0;
  if (config.mode == Mode::kLookahead) {
    if (!lookahead) {
      online = initial_state_sets(dfa, config.r, config.lookahead_cap);
      lookahead = &*online;
    }
    m = lookahead->i_max();
    r = config.r;
  } else {
    lookahead = nullptr;
  }
  Speculation out;
  out.plan = plan_chunks(symbols.size(), m, profile, r);
  out.plan_us = micros_since(t0);
  const auto t1 = Clock::now();
  out.run = lookahead
                ? match_speculative_lookahead(table, symbols, *lookahead, out.plan, pool, options)
                : match_speculative_basic(table, symbols, out.plan, pool, options);
  out.match_us = micros_since(t1);
  return out;
}

MatchOutcome ParallelMatcher::match(std::span<const std::uint8_t> symbols) {
  if (config_.mode == Mode::kSequential) {
    last_plan_.reset();
    return match_sequential(table_, symbols);
  }
  Speculation spec = speculate(dfa_, table_, symbols, profile_, config_, *pool_,
                               offline_ ? &*offline_ : nullptr);
  MatchOutcome out;
  out.phases.plan_us = spec.plan_us;
  out.phases.match_us = spec.match_us;
  const auto t2 = Clock::now();
  last_plan_ = std::move(spec.plan);
  const SpeculativeRun& run = spec.run;
  out.last_state = merge_sequential(run.maps, dfa_.start(), dfa_.sink());
  out.accepted = dfa_.is_final(out.last_state);
  out.phases.merge_us = micros_since(t2);
  out.phases.total_us = out.phases.plan_us + out.phases.match_us + out.phases.merge_us;
  out.workers = run.workers;

  if (config_.verify) {
    const MatchOutcome seq = match_sequential(table_, symbols);
    if (seq.last_state != out.last_state) {
      throw std::logic_error("parallel result differs from sequential matching");
    }
  }
  return out;
}

MatchOutcome ParallelMatcher::match_bytes(std::span<const std::uint8_t> bytes) {
  EncodedInput enc = encode_input(bytes, table_, config_.foreign);
  if (enc.foreign_at) {
    MatchOutcome out;
    out.foreign_input = true;
    out.last_state = dfa_.sink().value_or(kNoState);
    return out;
  }
  return match(enc.buffer.span());
}

MatchOutcome run_parallel(const Dfa& dfa, std::span<const std::uint8_t> bytes,
                          const RunConfig& config) {
  ParallelMatcher matcher(dfa, config);
  return matcher.match_bytes(bytes);
}

double relative_stddev(std::span<const double> times) {
  if (times.empty()) return 0.0;
  const double n = static_cast<double>(times.size());
  const double mean = std::accumulate(times.begin(), times.end(), 0.0) / n;
  if (mean <= 0.0) return 0.0;
  double ss = 0.0;
  for (double t : times) ss += (t - mean) * (t - mean);
  return std::sqrt(ss / n) / mean;
}

double relative_stddev(const MatchOutcome& outcome) {
  std::vector<double> t;
  t.reserve(outcome.workers.size());
  for (const auto& w : outcome.workers) t.push_back(w.match_us);
  return relative_stddev(t);
}

BalanceStats balance_report(std::span<const MatchOutcome> outcomes) {
  BalanceStats s;
  if (outcomes.empty()) return s;
  s.min = std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    const double v = relative_stddev(o);
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
    s.avg += v;
  }
  s.avg /= static_cast<double>(outcomes.size());
  return s;
}

}  // namespace specmatch
