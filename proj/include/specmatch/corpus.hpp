#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "specmatch/dfa.hpp"

namespace specmatch {

/// First `size` bytes of a fixed printable, non-whitespace ordering:
/// lowercase letters, then uppercase, digits and punctuation. At most 94.
std::vector<std::uint8_t> alphabet_bytes(std::size_t size);

/// The twenty amino-acid one-letter codes, sorted.
std::vector<std::uint8_t> protein_alphabet();

struct RandomDfaOptions {
  /// Non-sink states before minimization.
  std::size_t live_states = 8;
  std::size_t alphabet_size = 4;
  /// Append an absorbing reject state and route this share of the
  /// remaining transitions into it.
  bool with_sink = true;
  double sink_density = 0.1;
  double final_density = 0.3;
};

/// Every live state is reachable from the start: a random spanning tree is
/// laid first, then the remaining transitions are drawn uniformly (or sent
/// to the sink). At least one state is final.
Dfa random_dfa(const RandomDfaOptions& options, std::mt19937_64& rng);

/// Draws random DFAs until the minimized live-state count lies within
/// `tolerance` (relative) of `target`; returns the minimized DFA. Throws
/// std::runtime_error after `attempts` misses.
Dfa random_dfa_near(std::size_t target, std::size_t alphabet_size, double tolerance,
                    std::mt19937_64& rng, std::size_t attempts = 200);

/// PROSITE-style motif such as `C-x(2,4)-[DE]-{P}-H`.
std::string prosite_like_pattern(std::mt19937_64& rng, std::size_t elements);

/// Regex for "the sequence contains the motif", over the protein alphabet.
std::string prosite_to_regex(const std::string& motif);

/// Minimized DFA for a PROSITE-like motif search.
Dfa compile_prosite(const std::string& motif);

/// Uniformly random bytes drawn from the DFA's alphabet.
std::vector<std::uint8_t> uniform_input(const Dfa& dfa, std::size_t n, std::mt19937_64& rng);

/// An accepted input: a random walk through states that can keep going and
/// still reach a final state, finished by a shortest path to one. The length
/// lies in [n - |Q|, n] when the language is infinite; a finite language
/// yields a shortest accepted word. Throws std::runtime_error when the
/// language is empty.
std::vector<std::uint8_t> planted_input(const Dfa& dfa, std::size_t n, std::mt19937_64& rng);

}  // namespace specmatch
