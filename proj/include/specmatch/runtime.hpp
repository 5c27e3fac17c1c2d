#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "specmatch/dfa.hpp"
#include "specmatch/flat_table.hpp"
#include "specmatch/matching.hpp"
#include "specmatch/partition.hpp"
#include "specmatch/speculation.hpp"
#include "specmatch/worker_pool.hpp"

namespace specmatch {

enum class Mode { kSequential, kBasic, kLookahead };
enum class WeightSource { kUniform, kProfiled, kExplicit };

#ifdef NDEBUG
inline constexpr bool kVerifyByDefault = false;
#else
inline constexpr bool kVerifyByDefault = true;
#endif

struct RunConfig {
  Mode mode = Mode::kLookahead;
  std::size_t r = 1;
  std::size_t parallelism = 1;
  WeightSource weights = WeightSource::kUniform;
  /// Symbols per microsecond per worker, for WeightSource::kExplicit.
  std::vector<double> capacities;
  bool sink_short_circuit = true;
  /// 0 selects the scalar kernel.
  std::size_t lane_width = 0;
  ForeignBytePolicy foreign = ForeignBytePolicy::kRejectInput;
  /// Cross-check every parallel result against match_sequential.
  bool verify = kVerifyByDefault;
  std::size_t profile_reps = 5;
  std::size_t profile_sample = 1'000'000;
  std::size_t lookahead_cap = kDefaultLookaheadCap;

  /// Throws std::invalid_argument for inconsistent settings.
  void validate() const;
};

/// Times one sequential matching run per worker. Implementations either run
/// on real threads or model workers with fixed capacities.
class MatchTimer {
 public:
  virtual ~MatchTimer() = default;
  virtual std::size_t workers() const = 0;
  /// Elapsed microseconds for each worker matching `sample` once from the
  /// start state.
  virtual std::vector<double> time_run(const FlatTable& table,
                                       std::span<const std::uint8_t> sample) = 0;
};

/// Runs the timing on every thread of a pool concurrently.
class ThreadTimer final : public MatchTimer {
 public:
  explicit ThreadTimer(WorkerPool& pool) : pool_(pool) {}
  std::size_t workers() const override { return pool_.size(); }
  std::vector<double> time_run(const FlatTable& table,
                               std::span<const std::uint8_t> sample) override;

 private:
  WorkerPool& pool_;
};

/// Workers with fixed capacities (symbols/us) and optional multiplicative
/// normal jitter on each timing, reproducible from `seed`.
class SimulatedTimer final : public MatchTimer {
 public:
  SimulatedTimer(std::vector<double> capacities, double jitter = 0.0, std::uint64_t seed = 1);
  std::size_t workers() const override { return capacities_.size(); }
  std::vector<double> time_run(const FlatTable& table,
                               std::span<const std::uint8_t> sample) override;

 private:
  std::vector<double> capacities_;
  double jitter_;
  std::uint64_t state_;
};

inline constexpr std::size_t kMinProfileSample = 100'000;

class ProfilingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Median symbols-per-microsecond of `reps` sequential runs over `sample`,
/// per worker. Throws ProfilingError when the sample is too short to time.
std::vector<double> profile_workers(const FlatTable& table, std::span<const std::uint8_t> sample,
                                    std::size_t reps, MatchTimer& timer);

struct Speculation {
  ChunkPlan plan;
  SpeculativeRun run;
  /// Wall time spent building the lookahead table and planning.
  double plan_us = 0.0;
  double match_us = 0.0;
};

/// Plans and runs the concurrent matching step for config.mode (basic or
/// lookahead) without merging. `lookahead` overrides the online table build.
Speculation speculate(const Dfa& dfa, const FlatTable& table, std::span<const std::uint8_t> symbols,
                      const WorkerProfile& profile, const RunConfig& config, WorkerPool& pool,
                      const LookaheadTable* lookahead = nullptr);

/// Reusable parallel matcher: owns the flat table, the worker pool and the
/// profiled weights, so repeated matches pay only plan/match/merge.
class ParallelMatcher {
 public:
  ParallelMatcher(const Dfa& dfa, RunConfig config);

  const RunConfig& config() const { return config_; }
  const FlatTable& table() const { return table_; }
  const WorkerProfile& profile() const { return profile_; }

  /// Matches pre-encoded symbols. The lookahead table is rebuilt on every
  /// call unless one was supplied with use_lookahead().
  MatchOutcome match(std::span<const std::uint8_t> symbols);
  /// Encodes and matches raw bytes.
  MatchOutcome match_bytes(std::span<const std::uint8_t> bytes);

  /// Supplies a precomputed lookahead table (offline mode).
  void use_lookahead(LookaheadTable table);

  /// Plan used by the most recent match().
  const std::optional<ChunkPlan>& last_plan() const { return last_plan_; }

 private:
  Dfa dfa_;
  RunConfig config_;
  FlatTable table_;
  std::unique_ptr<WorkerPool> pool_;
  WorkerProfile profile_;
  std::optional<LookaheadTable> offline_;
  std::optional<ChunkPlan> last_plan_;
};

/// Encode, weight, speculate, plan, match concurrently and merge.
MatchOutcome run_parallel(const Dfa& dfa, std::span<const std::uint8_t> bytes,
                          const RunConfig& config);

struct BalanceStats {
  double min = 0.0;
  double avg = 0.0;
  double max = 0.0;
};

/// Population standard deviation of per-worker matching times divided by
/// their mean.
double relative_stddev(std::span<const double> times);
double relative_stddev(const MatchOutcome& outcome);

/// Min/avg/max of the per-run relative standard deviations.
BalanceStats balance_report(std::span<const MatchOutcome> outcomes);

}  // namespace specmatch
