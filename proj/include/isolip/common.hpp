#pragma once

#include <cstdint>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <string>
#include <vector>

namespace isolip {

// Absolute tolerances shared across the library.
inline constexpr double kMassTol = 1e-12;    // mass comparisons, atom merging
inline constexpr double kPlanTol = 1e-10;    // transport-plan marginal slack
inline constexpr double kMetricTol = 1e-9;   // metric-axiom and neighborhood slack
inline constexpr double kFlowEps = 1e-12;    // residual cutoff in the flow solver

/// Thrown when an exact procedure would exceed its configured size budget.
class budget_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Deterministic 64-bit generator (splitmix64). Used instead of the
/// std::uniform_* distributions so seeded runs reproduce byte-identically
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform index in [0,n). n must be positive.
  std::size_t uniform_index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

 private:
  std::uint64_t state_;
};

/// Worker count for data-parallel loops. Read once from ISOLIP_WORKERS;
/// defaults to 1. This is the only environment variable the library reads.
inline std::size_t worker_count() {
  static const std::size_t n = [] {
    const char* v = std::getenv("ISOLIP_WORKERS");
    if (v == nullptr) return std::size_t{1};
    long k = std::strtol(v, nullptr, 10);
    return k > 1 ? static_cast<std::size_t>(k) : std::size_t{1};
  }();
  return n;
}

/// Evaluates fn(i) for i in [0,n) and returns the results in index order,
/// fanning out across workers when ISOLIP_WORKERS > 1. Results are merged
/// by index, so reductions over the output are deterministic regardless of
/// the worker count.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn fn) {
  std::vector<T> out;
  out.reserve(n);
  const std::size_t workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
  }
  std::vector<std::future<std::vector<T>>> parts;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    const std::size_t end = std::min(n, begin + chunk);
    parts.push_back(std::async(std::launch::async, [begin, end, &fn] {
      std::vector<T> local;
      local.reserve(end - begin);
      for (std::size_t i = begin; i < end; ++i) local.push_back(fn(i));
      return local;
    }));
  }
  for (auto& p : parts) {
    auto local = p.get();
    for (auto& v : local) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace isolip
