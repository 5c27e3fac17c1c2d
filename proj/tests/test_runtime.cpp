#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "specmatch/cluster.hpp"
#include "specmatch/corpus.hpp"
#include "specmatch/runtime.hpp"

using namespace specmatch;

namespace {

RunConfig config(Mode mode, std::size_t p, std::size_t r = 1) {
  RunConfig c;
  c.mode = mode;
  c.parallelism = p;
  c.r = r;
  c.verify = true;
  return c;
}

ClusterTopology flat_topology(std::vector<NodeSpec> nodes, double intra = 0, double inter = 0) {
  ClusterTopology t;
  t.nodes = std::move(nodes);
  t.intra = {DelayFamily::kFixed, intra, 0};
  t.inter = {DelayFamily::kFixed, inter, 0};
  return t;
}

}  // namespace

TEST_CASE("simulated profiling recovers capacities") {
  const FlatTable t(oracle::running_dfa());
  const std::vector<std::uint8_t> sample(kMinProfileSample, 0);
  SimulatedTimer exact({50, 25, 25});
  const auto caps = profile_workers(t, sample, 5, exact);
  CHECK(WorkerProfile(caps).weights_as_double() == std::vector<double>{1.5, 0.75, 0.75});

  SimulatedTimer noisy({1.0, 1.41, 1.0, 1.41}, 0.02, 7);
  const auto got = profile_workers(t, sample, 5, noisy);
  CHECK(got[1] / got[0] == doctest::Approx(1.41).epsilon(0.05));
  CHECK(got[3] / got[2] == doctest::Approx(1.41).epsilon(0.05));
}

TEST_CASE("profiling refuses samples it cannot time") {
  const FlatTable t(oracle::running_dfa());
  SimulatedTimer timer({1.0});
  CHECK_THROWS_AS(profile_workers(t, std::vector<std::uint8_t>(1000, 0), 5, timer), ProfilingError);
  SimulatedTimer fast({1e9});
  CHECK_THROWS_AS(profile_workers(t, std::vector<std::uint8_t>(kMinProfileSample, 0), 5, fast),
                  ProfilingError);
  CHECK_THROWS_AS(profile_workers(t, std::vector<std::uint8_t>(kMinProfileSample, 0), 4, timer),
                  std::invalid_argument);
}

TEST_CASE("threaded profiling on identical workers gives weights near one") {
  const FlatTable t(oracle::running_dfa());
  std::mt19937_64 rng(3);
  std::vector<std::uint8_t> sample(2'000'000);
  for (auto& c : sample) c = static_cast<std::uint8_t>(rng() % 2);
  WorkerPool pool(2);
  ThreadTimer timer(pool);
  const auto w = WorkerProfile(profile_workers(t, sample, 5, timer)).weights_as_double();
  for (double x : w) CHECK(x == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("parallel run of the motivating example") {
  const auto out = run_parallel(oracle::abc_dfa(), oracle::bytes(oracle::kAbcInput),
                                config(Mode::kLookahead, 3, 1));
  CHECK(out.accepted);
  CHECK(out.last_state == 1);
  REQUIRE(out.workers.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(out.workers[k].symbols == 4);
    CHECK(out.workers[k].lookahead_reads == (k == 0 ? 0u : 1u));
  }
}

TEST_CASE("one worker behaves like sequential matching in every mode") {
  const auto input = oracle::bytes(oracle::kRunningInput);
  for (Mode m : {Mode::kSequential, Mode::kBasic, Mode::kLookahead}) {
    const auto out = run_parallel(oracle::running_dfa(), input, config(m, 1, 1));
    const auto seq = match_sequential(FlatTable(oracle::running_dfa()),
                                      encode_input(input, FlatTable(oracle::running_dfa())).buffer.span());
    CHECK(out.last_state == seq.last_state);
    CHECK(out.total_symbols() == input.size());
  }
}

TEST_CASE("randomized configurations agree with sequential matching") {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 300; ++i) {
    RandomDfaOptions opt;
    opt.live_states = 1 + rng() % 32;
    opt.alphabet_size = 1 + rng() % 8;
    opt.sink_density = 0.02;
    const Dfa d = random_dfa(opt, rng);
    std::vector<std::uint8_t> input =
        rng() % 2 ? uniform_input(d, rng() % 20000, rng) : planted_input(d, rng() % 20000, rng);
    RunConfig c = config(rng() % 3 == 0 ? Mode::kBasic : Mode::kLookahead, 1 + rng() % 8, 1 + rng() % 2);
    c.weights = WeightSource::kExplicit;
    for (std::size_t k = 0; k < c.parallelism; ++k) c.capacities.push_back(0.5 + (rng() % 100) / 20.0);
    c.sink_short_circuit = rng() % 2;
    c.lane_width = rng() % 3 == 0 ? 8 : 0;
    const auto out = run_parallel(d, input, c);
    std::string text(input.begin(), input.end());
    CHECK(out.last_state == oracle::Interpreter(d).run(text));
    CHECK(out.accepted == d.accepts(text));
  }
}

TEST_CASE("foreign bytes reject without matching") {
  const auto out = run_parallel(oracle::abc_dfa(), oracle::bytes("aabz"), config(Mode::kBasic, 2));
  CHECK(out.foreign_input);
  CHECK_FALSE(out.accepted);
  CHECK(out.last_state == 2);
  RunConfig strict = config(Mode::kBasic, 2);
  strict.foreign = ForeignBytePolicy::kStrict;
  CHECK_THROWS_AS(run_parallel(oracle::abc_dfa(), oracle::bytes("aabz"), strict), ForeignByteError);
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(config(Mode::kLookahead, 2, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(Mode::kBasic, 0).validate(), std::invalid_argument);
  RunConfig c = config(Mode::kBasic, 2);
  c.weights = WeightSource::kExplicit;
  c.capacities = {1.0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("matcher reuses an offline lookahead table") {
  const Dfa d = oracle::running_dfa();
  ParallelMatcher m(d, config(Mode::kLookahead, 3, 2));
  m.use_lookahead(initial_state_sets(d, 2));
  const auto out = m.match_bytes(oracle::bytes(oracle::kRunningInput));
  CHECK(out.last_state == d.run(d.start(), encode_input(oracle::bytes(oracle::kRunningInput),
                                                        FlatTable(d)).buffer.symbols));
  CHECK_THROWS_AS(m.use_lookahead(initial_state_sets(d, 1)), std::invalid_argument);
  REQUIRE(m.last_plan());
  CHECK(m.last_plan()->r == 2);
}

TEST_CASE("relative standard deviation") {
  const double same[] = {3.0, 3.0, 3.0};
  CHECK(relative_stddev(same) == 0.0);
  const double two[] = {1.0, 3.0};
  CHECK(relative_stddev(two) == doctest::Approx(0.5));
  MatchOutcome a, b;
  a.workers = {WorkerStats{0, 0, 1, 2.0}, WorkerStats{0, 0, 1, 2.0}};
  b.workers = {WorkerStats{0, 0, 1, 1.0}, WorkerStats{0, 0, 1, 3.0}};
  const MatchOutcome runs[] = {a, b};
  const BalanceStats s = balance_report(runs);
  CHECK(s.min == 0.0);
  CHECK(s.max == doctest::Approx(0.5));
  CHECK(s.avg == doctest::Approx(0.25));
}

TEST_CASE("topology parsing") {
  std::istringstream in(
      "# two big nodes\n"
      "seed = 9\n"
      "intra_mean = 2.68\n"
      "inter_family = uniform\n"
      "node cores=16 allocated=15 capacity=400 count=2\n"
      "node cores=4 allocated=3 capacity=1.41\n");
  const ClusterTopology t = parse_topology(in);
  CHECK(t.seed == 9);
  CHECK(t.nodes.size() == 3);
  CHECK(t.worker_count() == 33);
  CHECK(t.inter.family == DelayFamily::kUniform);
  CHECK(t.inter.mean_us == doctest::Approx(362.0));
  CHECK(t.worker_nodes().back() == 2);

  std::istringstream greedy("node cores=4 allocated=4 capacity=1\n");
  CHECK_THROWS_AS(parse_topology(greedy), TopologyError);
  std::istringstream idle("node cores=4 allocated=0 capacity=1\n");
  CHECK_THROWS_AS(parse_topology(idle), TopologyError);
  std::istringstream junk("colour = blue\n");
  CHECK_THROWS_AS(parse_topology(junk), TopologyError);
}

TEST_CASE("single node with zero delays reproduces the parallel run") {
  const Dfa d = oracle::running_dfa();
  const auto input = oracle::bytes(oracle::kRunningInput);
  const RunConfig c = config(Mode::kLookahead, 3, 1);
  const auto rep = simulate_cluster(d, input, flat_topology({{4, 3, 1.0}}), c);
  const auto par = run_parallel(d, input, c);
  CHECK(rep.outcome.last_state == par.last_state);
  CHECK(rep.outcome.accepted == par.accepted);
  CHECK(rep.merge_latency_us == 0.0);
  CHECK(rep.comm_fraction == 0.0);
  for (std::size_t k = 0; k < 3; ++k) CHECK(rep.outcome.workers[k].symbols == par.workers[k].symbols);
}

TEST_CASE("two-tier merging beats a binary tree across four or more nodes") {
  const Dfa d = oracle::running_dfa();
  std::mt19937_64 rng(5);
  const auto input = uniform_input(d, 200000, rng);
  for (std::size_t nodes : {4u, 6u, 8u}) {
    ClusterTopology t;
    t.intra = default_intra_delay();
    t.inter = default_inter_delay();
    t.nodes.assign(nodes, NodeSpec{16, 15, 400.0});
    const auto rep = simulate_cluster(d, input, t, config(Mode::kLookahead, 1, 1));
    CHECK(rep.merge_latency_us < rep.binary_merge_latency_us);
  }
}

TEST_CASE("cluster simulation replays exactly from its seed") {
  const Dfa d = oracle::running_dfa();
  std::mt19937_64 rng(6);
  const auto input = uniform_input(d, 50000, rng);
  ClusterTopology t;
  t.intra = default_intra_delay();
  t.inter = default_inter_delay();
  t.jitter = 0.05;
  t.nodes.assign(3, NodeSpec{8, 7, 100.0});
  RunConfig c = config(Mode::kBasic, 1);
  c.weights = WeightSource::kProfiled;
  const auto a = simulate_cluster(d, input, t, c);
  const auto b = simulate_cluster(d, input, t, c);
  REQUIRE(a.phases.size() == b.phases.size());
  for (std::size_t i = 0; i < a.phases.size(); ++i) {
    CHECK(a.phases[i].start_us == b.phases[i].start_us);
    CHECK(a.phases[i].end_us == b.phases[i].end_us);
  }
  CHECK(a.total_us == b.total_us);
  t.seed = 2;
  CHECK(simulate_cluster(d, input, t, c).total_us != a.total_us);
}

TEST_CASE("cluster outcomes equal sequential matching; phases add up") {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 100; ++i) {
    RandomDfaOptions opt;
    opt.live_states = 1 + rng() % 20;
    opt.alphabet_size = 1 + rng() % 5;
    opt.sink_density = 0.03;
    const Dfa d = random_dfa(opt, rng);
    const auto input = uniform_input(d, rng() % 5000, rng);
    ClusterTopology t;
    t.intra = default_intra_delay();
    t.inter = default_inter_delay();
    t.compose_us = 0.5;
    for (std::size_t j = 0, n = 1 + rng() % 4; j < n; ++j) {
      const std::size_t cores = 2 + rng() % 6;
      t.nodes.push_back({cores, rng() % cores, 1.0 + static_cast<double>(rng() % 3)});
    }
    if (t.worker_count() == 0) t.nodes[0].allocated = 1;
    const RunConfig c = config(rng() % 2 ? Mode::kBasic : Mode::kLookahead, 1, 1 + rng() % 2);
    const auto rep = simulate_cluster(d, input, t, c);
    CHECK(rep.outcome.last_state == d.run(d.start(), encode_input(input, FlatTable(d)).buffer.symbols));
    CHECK(rep.total_us == doctest::Approx(rep.match_end_us + rep.merge_latency_us));
    CHECK(rep.comm_fraction == doctest::Approx(comm_fraction_from_phases(rep.phases)));
  }
}

TEST_CASE("heterogeneous capacities balance under weighted planning") {
  const Dfa d = oracle::running_dfa();
  std::mt19937_64 rng(8);
  const auto input = uniform_input(d, 1'000'000, rng);
  ClusterTopology t = flat_topology({{8, 7, 1.0}, {8, 7, 1.41}});
  RunConfig c = config(Mode::kBasic, 1);
  c.weights = WeightSource::kProfiled;
  c.sink_short_circuit = false;
  const auto rep = simulate_cluster(d, input, t, c);
  CHECK(relative_stddev(rep.outcome) <= 0.05);
}

TEST_CASE("exact-capacity workers on the three-worker plan") {
  const Dfa d = oracle::running_dfa();
  RunConfig c = config(Mode::kBasic, 3);
  c.weights = WeightSource::kExplicit;
  c.capacities = {50, 25, 25};
  c.sink_short_circuit = false;
  const auto rep = simulate_cluster(d, oracle::bytes(oracle::kRunningInput),
                                    flat_topology({{2, 1, 50.0}, {3, 2, 25.0}}), c);
  // closed form: chunk 0 has 28 symbols once, chunks 1 and 2 have 4 symbols
  // for 4 states each
  const double expect[] = {28.0 / 50, 16.0 / 25, 16.0 / 25};
  std::vector<double> times;
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(rep.outcome.workers[k].match_us == doctest::Approx(expect[k]));
    times.push_back(rep.outcome.workers[k].match_us);
  }
  CHECK(relative_stddev(rep.outcome) == doctest::Approx(relative_stddev(times)));
  // each worker within one symbol per planned state of the ideal l0 / mean
  const double ideal = 19.2 / (100.0 / 3.0);
  CHECK(std::abs(expect[0] - ideal) <= 1.0 / 50);
  CHECK(std::abs(expect[1] - ideal) <= 4.0 / 25);
}

TEST_CASE("phase csv") {
  const PhaseRecord rows[] = {{"match", 0, 0, 0.0, 1.5}, {"merge_master", 0, 0, 1.5, 2.0}};
  std::ostringstream out;
  write_phase_csv(out, rows);
  CHECK(out.str() == "phase,worker,node,start_us,end_us\nmatch,0,0,0,1.5\nmerge_master,0,0,1.5,2\n");
  CHECK(comm_fraction_from_phases(rows) == doctest::Approx(0.25));
}
