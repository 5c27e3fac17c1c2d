#include "specmatch/partition.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace specmatch {
namespace {

Rational exact(double v) {
  // A finite double is mantissa * 2^exp exactly.
  int exp = 0;
  const double mant = std::frexp(v, &exp);
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  const Rational r{boost::multiprecision::cpp_int(scaled)};
  exp -= 53;
  const boost::multiprecision::cpp_int p2 = boost::multiprecision::cpp_int(1) << std::abs(exp);
  return exp >= 0 ? r * Rational(p2) : r / Rational(p2);
}

std::size_t floor_to_size(const Rational& v) {
  const boost::multiprecision::cpp_int q =
      boost::multiprecision::numerator(v) / boost::multiprecision::denominator(v);
  return q.convert_to<std::size_t>();
}

}  // namespace

WorkerProfile::WorkerProfile(std::vector<double> capacities) : capacities_(std::move(capacities)) {
  if (capacities_.empty()) throw std::invalid_argument("at least one worker is required");
  Rational total = 0;
  std::vector<Rational> exact_caps;
  for (double c : capacities_) {
    if (!(c > 0) || !std::isfinite(c)) {
      throw std::invalid_argument("worker capacity must be positive, got " + std::to_string(c));
    }
    exact_caps.push_back(exact(c));
    total += exact_caps.back();
  }
  const Rational mean = total / Rational(capacities_.size());
  for (const auto& c : exact_caps) weights_.push_back(c / mean);
}

WorkerProfile WorkerProfile::uniform(std::size_t workers) {
  return WorkerProfile(std::vector<double>(workers, 1.0));
}

std::vector<double> WorkerProfile::weights_as_double() const {
  std::vector<double> out;
  for (const auto& w : weights_) out.push_back(w.convert_to<double>());
  return out;
}

Rational chunk0_length(std::size_t n, std::size_t m, const WorkerProfile& profile) {
  if (m == 0) throw std::invalid_argument("state budget m must be at least 1");
  const auto& w = profile.weights();
  Rational tail = 0;
  for (std::size_t i = 1; i < w.size(); ++i) tail += w[i];
  return Rational(n) * Rational(m) / (w[0] * Rational(m) + tail);
}

ChunkPlan plan_chunks(std::size_t n, std::size_t m, const WorkerProfile& profile, std::size_t r) {
  ChunkPlan plan;
  plan.n = n;
  plan.m = m;
  plan.r = r;
  plan.l0 = chunk0_length(n, m, profile);
  const auto& w = profile.weights();
  const std::size_t p = w.size();

  // boundary[k] = start of chunk k, k = 1..p-1.
  std::vector<std::size_t> start(p + 1, 0);
  start[p] = n;
  Rational cumulative = plan.l0 * w[0];
  for (std::size_t k = 1; k < p; ++k) {
    std::size_t s = floor_to_size(cumulative);
    if (s > n) {
      s = n;
      plan.clamped = true;
    }
    start[k] = s;
    cumulative += plan.l0 * w[k] / Rational(m);
  }
  for (std::size_t k = 0; k < p; ++k) {
    Chunk c;
    c.begin = start[k];
    c.end = start[k + 1];
    c.budget = k == 0 ? 1 : m;
    c.lookahead_begin = k == 0 ? c.begin : c.begin - std::min(r, c.begin);
    plan.chunks.push_back(c);
  }
  return plan;
}

void write_plan_csv(std::ostream& out, const ChunkPlan& plan) {
  out << "worker,start,end,lookahead_start\n";
  for (std::size_t k = 0; k < plan.chunks.size(); ++k) {
    const Chunk& c = plan.chunks[k];
    out << k << ',' << c.begin << ','
        << static_cast<long long>(c.end) - 1 << ',' << c.lookahead_begin << '\n';
  }
}

}  // namespace specmatch
