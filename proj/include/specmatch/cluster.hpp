#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "specmatch/dfa.hpp"
#include "specmatch/matching.hpp"
#include "specmatch/runtime.hpp"

namespace specmatch {

enum class DelayFamily { kNormal, kFixed, kUniform };

/// Per-message latency in microseconds. Samples are truncated at 0.
struct DelayModel {
  DelayFamily family = DelayFamily::kNormal;
  double mean_us = 0.0;
  double stddev_us = 0.0;

  double sample(std::mt19937_64& rng) const;
};

struct NodeSpec {
  std::size_t cores = 2;
  /// At most cores - 1: one core per node is left to the hypervisor.
  std::size_t allocated = 1;
  /// Matching capacity of each allocated core, symbols per microsecond.
  double capacity = 1.0;
};

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nodes in chunk order: node j's workers own adjacent chunks, and the first
/// allocated core of each node is its leader. The master is node 0's leader.
struct ClusterTopology {
  std::vector<NodeSpec> nodes;
  DelayModel intra;
  DelayModel inter;
  std::uint64_t seed = 1;
  /// Relative stddev of a multiplicative per-worker speed factor.
  double jitter = 0.0;
  /// Simulated cost of one compose_maps call at a leader or the master.
  double compose_us = 0.0;

  std::size_t worker_count() const;
  std::vector<double> worker_capacities() const;
  /// Node index of each worker.
  std::vector<std::size_t> worker_nodes() const;
  void validate() const;
};

/// Delay figures measured between EC2 instances: 2.68 us (sd 0.14%) within
/// a node and 362 us (sd 3.6%) between nodes.
DelayModel default_intra_delay();
DelayModel default_inter_delay();

/// Line-oriented `key = value` text. Recognized keys: seed, jitter,
/// compose_us, intra_family, intra_mean, intra_stddev, inter_family,
/// inter_mean, inter_stddev. Node lines read
/// `node cores=16 allocated=15 capacity=400 [count=2]`. '#' starts a comment.
ClusterTopology parse_topology(std::istream& in);
ClusterTopology load_topology(const std::filesystem::path& path);

struct PhaseRecord {
  std::string phase;
  std::size_t worker = 0;
  std::size_t node = 0;
  double start_us = 0.0;
  double end_us = 0.0;
};

struct ClusterReport {
  /// Verdict and last state; per-worker match_us holds simulated times.
  MatchOutcome outcome;
  std::vector<PhaseRecord> phases;
  double match_end_us = 0.0;
  double total_us = 0.0;
  /// total_us - match_end_us.
  double merge_latency_us = 0.0;
  /// Merge latency of a pairwise binary reduction over all workers on the
  /// same simulated matching times, for comparison.
  double binary_merge_latency_us = 0.0;
  /// Share of the run spent after the last worker finished matching.
  double comm_fraction = 0.0;
};

/// Runs the matching for real (single-threaded) and replays it on a
/// simulated clock with two-tier merging. config.parallelism is ignored;
/// the worker count comes from the topology. Profiled weights are measured
/// with a SimulatedTimer on the topology's capacities.
ClusterReport simulate_cluster(const Dfa& dfa, std::span<const std::uint8_t> bytes,
                               const ClusterTopology& topology, const RunConfig& config);

/// CSV with header `phase,worker,node,start_us,end_us`.
void write_phase_csv(std::ostream& out, std::span<const PhaseRecord> phases);

/// Recomputes the communication fraction from phase records alone.
double comm_fraction_from_phases(std::span<const PhaseRecord> phases);

}  // namespace specmatch
