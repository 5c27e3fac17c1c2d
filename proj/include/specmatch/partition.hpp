#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace specmatch {

/// Exact rational arithmetic for chunk boundaries.
using Rational = boost::multiprecision::cpp_rational;

/// Profiled matching capacities and their normalized weights:
/// w_k = m_k / mean(m).
class WorkerProfile {
 public:
  /// Capacities in symbols per microsecond; all must be positive and finite.
  explicit WorkerProfile(std::vector<double> capacities);
  static WorkerProfile uniform(std::size_t workers);

  std::size_t size() const { return capacities_.size(); }
  const std::vector<double>& capacities() const { return capacities_; }
  /// Exact weights (each double capacity is an exact binary rational).
  const std::vector<Rational>& weights() const { return weights_; }
  std::vector<double> weights_as_double() const;

 private:
  std::vector<double> capacities_;
  std::vector<Rational> weights_;
};

inline WorkerProfile compute_weights(std::vector<double> capacities) {
  return WorkerProfile(std::move(capacities));
}

/// Unweighted length of chunk 0:
///
///     l0 = n * m / (w0 * m + sum_{i>=1} w_i)
///
/// where m is the number of states each later chunk is matched for.
Rational chunk0_length(std::size_t n, std::size_t m, const WorkerProfile& profile);

struct Chunk {
  /// Half-open input range [begin, end). Empty chunks have begin == end.
  std::size_t begin = 0;
  std::size_t end = 0;
  /// Number of states this chunk is planned to be matched for (1 for chunk 0).
  std::size_t budget = 1;
  /// Reverse lookahead reads [lookahead_begin, begin); shorter than r only
  /// when begin < r.
  std::size_t lookahead_begin = 0;

  std::size_t length() const { return end - begin; }
  bool empty() const { return begin == end; }
  std::size_t lookahead_length() const { return begin - lookahead_begin; }
};

struct ChunkPlan {
  std::vector<Chunk> chunks;
  std::size_t n = 0;
  std::size_t m = 1;
  std::size_t r = 0;
  Rational l0;
  /// Set when floor rounding would place a boundary past the input; chunk 0
  /// then ends at n-1 and later chunks are empty. Never happens for
  /// positive weights, kept as a guard.
  bool clamped = false;

  std::size_t workers() const { return chunks.size(); }
};

/// Start/end offsets from cumulative exact boundaries
///
///     start(C_k) = floor(l0*w0 + (1/m) * sum_{1<=i<k} l0*w_i),
///
/// each chunk ending where the next starts; the last chunk ends at n.
ChunkPlan plan_chunks(std::size_t n, std::size_t m, const WorkerProfile& profile, std::size_t r);

/// CSV with header `worker,start,end,lookahead_start`; end is inclusive and
/// equals start-1 for an empty chunk.
void write_plan_csv(std::ostream& out, const ChunkPlan& plan);

}  // namespace specmatch
