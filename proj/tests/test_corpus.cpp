#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "specmatch/corpus.hpp"
#include "specmatch/grail.hpp"

using namespace specmatch;

TEST_CASE("generation is deterministic per seed") {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    std::mt19937_64 a(seed), b(seed);
    CHECK(random_dfa_near(50, 4, 0.2, a) == random_dfa_near(50, 4, 0.2, b));
    CHECK(uniform_input(oracle::abc_dfa(), 1000, a) == uniform_input(oracle::abc_dfa(), 1000, b));
    CHECK(prosite_like_pattern(a, 4) == prosite_like_pattern(b, 4));
  }
}

TEST_CASE("random automata are reachable and carry a sink") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    RandomDfaOptions opt;
    opt.live_states = 1 + i;
    opt.alphabet_size = 1 + i % 6;
    const Dfa d = random_dfa(opt, rng);
    CHECK(canonical_order(d).state_count() >= opt.live_states);
    CHECK(d.sink());
    CHECK_FALSE(d.finals().empty());
  }
}

TEST_CASE("size targets are hit within twenty percent") {
  std::mt19937_64 rng(4);
  for (std::size_t target : {4u, 8u, 32u, 128u, 512u}) {
    for (std::size_t k : {2u, 4u, 20u}) {
      const Dfa d = random_dfa_near(target, k, 0.2, rng);
      const double got = static_cast<double>(d.live_state_count());
      CHECK(got >= 0.8 * static_cast<double>(target));
      CHECK(got <= 1.2 * static_cast<double>(target));
      CHECK_FALSE(oracle::has_equivalent_pair(d));
    }
  }
}

TEST_CASE("protein motifs compile over the twenty-letter alphabet") {
  CHECK(protein_alphabet().size() == 20);
  CHECK(prosite_to_regex("C-x(2,4)-[DE]-{P}-H") == ".*C.{2,4}[DE][^P]H.*");
  const Dfa d = compile_prosite("C-x(2,4)-[DE]-{P}-H");
  CHECK(d.alphabet_size() == 20);
  CHECK(d.accepts("AACAAADKHWW"));
  CHECK_FALSE(d.accepts("AACAAADPHWW"));
  CHECK_FALSE(d.accepts("CADKH"));
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) CHECK_NOTHROW(compile_prosite(prosite_like_pattern(rng, 1 + i % 5)));
  CHECK_THROWS(prosite_to_regex("C-[DE"));
}

TEST_CASE("planted inputs are accepted and nearly full length") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    RandomDfaOptions opt;
    opt.live_states = 1 + i % 30;
    opt.alphabet_size = 1 + i % 5;
    const Dfa d = random_dfa(opt, rng);
    const std::size_t n = rng() % 3000;
    const auto in = planted_input(d, n, rng);
    CHECK(in.size() <= std::max<std::size_t>(n, d.state_count()));
    if (oracle::infinite_language(d)) {
      CHECK(in.size() + d.state_count() >= n);
    } else {
      CHECK(in.size() < d.state_count());
    }
    CHECK(d.accepts(std::string(in.begin(), in.end())));
  }
  const Dfa empty({'a'}, 1, {0}, 0, {});
  CHECK_THROWS(planted_input(empty, 10, rng));
}

TEST_CASE("uniform inputs use only alphabet bytes") {
  std::mt19937_64 rng(10);
  const Dfa d = oracle::running_dfa();
  for (auto b : uniform_input(d, 5000, rng)) CHECK((b == 'a' || b == 'b'));
  CHECK(alphabet_bytes(3) == std::vector<std::uint8_t>{'a', 'b', 'c'});
  CHECK_THROWS(alphabet_bytes(95));
}
