#include "specmatch/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "specmatch/flat_table.hpp"
#include "specmatch/state_map.hpp"

namespace specmatch {
namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, std::size_t line) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || !std::isfinite(d)) {
    throw TopologyError("line " + std::to_string(line) + ": bad number '" + v + "'");
  }
  return d;
}

std::size_t to_count(const std::string& v, std::size_t line) {
  const double d = to_double(v, line);
  if (d < 0 || d != std::floor(d)) {
    throw TopologyError("line " + std::to_string(line) + ": expected a count, got '" + v + "'");
  }
  return static_cast<std::size_t>(d);
}

DelayFamily to_family(const std::string& v, std::size_t line) {
  if (v == "normal") return DelayFamily::kNormal;
  if (v == "fixed") return DelayFamily::kFixed;
  if (v == "uniform") return DelayFamily::kUniform;
  throw TopologyError("line " + std::to_string(line) + ": unknown delay family '" + v + "'");
}

double jitter_factor(std::mt19937_64& rng, double jitter) {
  if (jitter <= 0.0) return 1.0;
  std::normal_distribution<double> d(1.0, jitter);
  return std::max(0.01, d(rng));
}

}  // namespace

double DelayModel::sample(std::mt19937_64& rng) const {
  double v = mean_us;
  switch (family) {
    case DelayFamily::kFixed:
      break;
    case DelayFamily::kNormal:
      if (stddev_us > 0.0) v = std::normal_distribution<double>(mean_us, stddev_us)(rng);
      break;
    case DelayFamily::kUniform: {
      const double half = std::sqrt(3.0) * stddev_us;
      if (half > 0.0) v = std::uniform_real_distribution<double>(mean_us - half, mean_us + half)(rng);
      break;
    }
  }
  return std::max(0.0, v);
}

DelayModel default_intra_delay() { return {DelayFamily::kNormal, 2.68, 2.68 * 0.0014}; }
DelayModel default_inter_delay() { return {DelayFamily::kNormal, 362.0, 362.0 * 0.036}; }

std::size_t ClusterTopology::worker_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes) n += node.allocated;
  return n;
}

std::vector<double> ClusterTopology::worker_capacities() const {
  std::vector<double> caps;
  for (const auto& node : nodes) caps.insert(caps.end(), node.allocated, node.capacity);
  return caps;
}

std::vector<std::size_t> ClusterTopology::worker_nodes() const {
  std::vector<std::size_t> ids;
  for (std::size_t j = 0; j < nodes.size(); ++j) ids.insert(ids.end(), nodes[j].allocated, j);
  return ids;
}

void ClusterTopology::validate() const {
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const auto& node = nodes[j];
    if (node.cores == 0 || node.allocated + 1 > node.cores) {
      throw TopologyError("node " + std::to_string(j) + ": allocated cores must be at most cores - 1");
    }
    if (!(node.capacity > 0.0) || !std::isfinite(node.capacity)) {
      throw TopologyError("node " + std::to_string(j) + ": capacity must be positive");
    }
  }
  if (worker_count() == 0) throw TopologyError("topology has no allocated cores");
  for (const DelayModel* d : {&intra, &inter}) {
    if (d->mean_us < 0.0 || d->stddev_us < 0.0) throw TopologyError("delays must be non-negative");
  }
  if (jitter < 0.0 || compose_us < 0.0) throw TopologyError("jitter and compose_us must be non-negative");
}

ClusterTopology parse_topology(std::istream& in) {
  ClusterTopology t;
  t.intra = default_intra_delay();
  t.inter = default_inter_delay();
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (text.rfind("node", 0) == 0 && (text.size() == 4 || text[4] == ' ' || text[4] == '\t')) {
      NodeSpec node;
      std::size_t count = 1;
      std::istringstream fields(text.substr(4));
      std::string kv;
      while (fields >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
          throw TopologyError("line " + std::to_string(line) + ": expected key=value, got '" + kv + "'");
        }
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        if (key == "cores") node.cores = to_count(value, line);
        else if (key == "allocated") node.allocated = to_count(value, line);
        else if (key == "capacity") node.capacity = to_double(value, line);
        else if (key == "count") count = to_count(value, line);
        else throw TopologyError("line " + std::to_string(line) + ": unknown node field '" + key + "'");
      }
      t.nodes.insert(t.nodes.end(), count, node);
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw TopologyError("line " + std::to_string(line) + ": expected key = value");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key == "seed") t.seed = to_count(value, line);
    else if (key == "jitter") t.jitter = to_double(value, line);
    else if (key == "compose_us") t.compose_us = to_double(value, line);
    else if (key == "intra_family") t.intra.family = to_family(value, line);
    else if (key == "intra_mean") t.intra.mean_us = to_double(value, line);
    else if (key == "intra_stddev") t.intra.stddev_us = to_double(value, line);
    else if (key == "inter_family") t.inter.family = to_family(value, line);
    else if (key == "inter_mean") t.inter.mean_us = to_double(value, line);
    else if (key == "inter_stddev") t.inter.stddev_us = to_double(value, line);
    else throw TopologyError("line " + std::to_string(line) + ": unknown key '" + key + "'");
  }
  t.validate();
  return t;
}

ClusterTopology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open " + path.string());
  return parse_topology(in);
}

ClusterReport simulate_cluster(const Dfa& dfa, std::span<const std::uint8_t> bytes,
                               const ClusterTopology& topology, const RunConfig& config) {
  topology.validate();
  const std::size_t workers = topology.worker_count();
  const auto caps = topology.worker_capacities();
  const auto node_of = topology.worker_nodes();

  RunConfig cfg = config;
  cfg.parallelism = workers;
  if (cfg.mode == Mode::kSequential) cfg.mode = Mode::kBasic;
  cfg.validate();
  const FlatTable table(dfa);
  WorkerProfile profile = WorkerProfile::uniform(workers);
  if (cfg.weights == WeightSource::kExplicit) {
    profile = WorkerProfile(cfg.capacities);
  } else if (cfg.weights == WeightSource::kProfiled) {
    // The simulated timer only looks at the sample length.
    SimulatedTimer timer(caps, topology.jitter, topology.seed ^ 0x9e3779b97f4a7c15ull);
    const std::vector<std::uint8_t> sample(kMinProfileSample, 0);
    profile = WorkerProfile(profile_workers(table, sample, cfg.profile_reps, timer));
  }

  ClusterReport rep;
  EncodedInput enc = encode_input(bytes, table, cfg.foreign);
  if (enc.foreign_at) {
    rep.outcome.foreign_input = true;
    rep.outcome.last_state = dfa.sink().value_or(kNoState);
    return rep;
  }
  WorkerPool pool(1);
  const Speculation spec = speculate(dfa, table, enc.buffer.span(), profile, cfg, pool);
  const auto& maps = spec.run.maps;

  std::mt19937_64 rng(topology.seed);
  std::vector<double> done(workers);
  rep.outcome.workers = spec.run.workers;
  for (std::size_t k = 0; k < workers; ++k) {
    const double speed = caps[k] * jitter_factor(rng, topology.jitter);
    done[k] = static_cast<double>(spec.run.workers[k].total_symbols()) / speed;
    rep.outcome.workers[k].match_us = done[k];
    rep.phases.push_back({"match", k, node_of[k], 0.0, done[k]});
  }
  rep.match_end_us = *std::max_element(done.begin(), done.end());

  // Tier 1: every worker sends its map to its node's leader, which composes
  // the node's adjacent maps in chunk order.
  std::vector<double> leader_ready;
  std::vector<std::size_t> leaders;
  std::vector<std::size_t> groups;
  std::size_t first = 0;
  for (std::size_t j = 0; j < topology.nodes.size(); ++j) {
    const std::size_t count = topology.nodes[j].allocated;
    groups.push_back(count);
    if (count == 0) continue;
    const std::size_t leader = first;
    double ready = done[leader];
    for (std::size_t k = leader + 1; k < leader + count; ++k) {
      const double arrive = done[k] + topology.intra.sample(rng);
      rep.phases.push_back({"send_intra", k, j, done[k], arrive});
      ready = std::max(ready, arrive);
    }
    const double compose_end = ready + static_cast<double>(count - 1) * topology.compose_us;
    rep.phases.push_back({"compose_leader", leader, j, ready, compose_end});
    leaders.push_back(leader);
    leader_ready.push_back(compose_end);
    first += count;
  }

  // Tier 2: leaders send to the master (node 0's leader), which folds the
  // leader maps from the start state.
  const std::size_t master = leaders.front();
  double master_ready = leader_ready.front();
  for (std::size_t i = 1; i < leaders.size(); ++i) {
    const double arrive = leader_ready[i] + topology.inter.sample(rng);
    rep.phases.push_back({"send_inter", leaders[i], node_of[leaders[i]], leader_ready[i], arrive});
    master_ready = std::max(master_ready, arrive);
  }
  rep.total_us = master_ready + static_cast<double>(leaders.size() - 1) * topology.compose_us;
  rep.phases.push_back({"merge_master", master, node_of[master], master_ready, rep.total_us});
  rep.outcome.last_state = merge_two_tier(maps, groups, dfa.start(), dfa.sink());
  rep.outcome.accepted = dfa.is_final(rep.outcome.last_state);

  rep.merge_latency_us = rep.total_us - rep.match_end_us;
  rep.comm_fraction = rep.total_us > 0.0 ? rep.merge_latency_us / rep.total_us : 0.0;
  rep.outcome.phases.plan_us = 0.0;
  rep.outcome.phases.match_us = rep.match_end_us;
  rep.outcome.phases.merge_us = rep.merge_latency_us;
  rep.outcome.phases.total_us = rep.total_us;

  // Pairwise reduction over the network on the same matching times.
  std::vector<double> ready = done;
  for (std::size_t stride = 1; stride < workers; stride *= 2) {
    for (std::size_t i = 0; i + stride < workers; i += 2 * stride) {
      const std::size_t j = i + stride;
      const DelayModel& d = node_of[i] == node_of[j] ? topology.intra : topology.inter;
      ready[i] = std::max(ready[i], ready[j] + d.sample(rng)) + topology.compose_us;
    }
  }
  rep.binary_merge_latency_us = ready[0] - rep.match_end_us;
  return rep;
}

void write_phase_csv(std::ostream& out, std::span<const PhaseRecord> phases) {
  out << "phase,worker,node,start_us,end_us\n";
  const auto old = out.precision(17);
  for (const auto& p : phases) {
    out << p.phase << ',' << p.worker << ',' << p.node << ',' << p.start_us << ',' << p.end_us
        << '\n';
  }
  out.precision(old);
}

double comm_fraction_from_phases(std::span<const PhaseRecord> phases) {
  double match_end = 0.0;
  double total = 0.0;
  for (const auto& p : phases) {
    if (p.phase == "match") match_end = std::max(match_end, p.end_us);
    total = std::max(total, p.end_us);
  }
  return total > 0.0 ? (total - match_end) / total : 0.0;
}

}  // namespace specmatch
