#pragma once

// Shared numeric utilities: deterministic RNG streams, thread budget, small
// helpers. All randomness in the library flows through Rng so that results
// are reproducible across platforms and thread counts.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string_view>
#include <thread>
#include <vector>

namespace gcx {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using complexd = std::complex<double>;

// Residual tolerance for exact structural axioms (squares, pairings).
inline constexpr double kAxiomTol = 1e-10;
// Relative singular value cutoff for rank decisions.
inline constexpr double kRankCut = 1e-8;

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based stream seeding: a master seed plus a task label expand into
// independent substreams, so adding a task never perturbs another task's draws.
inline uint64_t derive_seed(uint64_t master, std::string_view task,
                            uint64_t counter = 0) {
  uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the label
  for (char c : task) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  uint64_t s = master;
  splitmix64(s);
  s ^= h;
  splitmix64(s);
  s ^= counter;
  splitmix64(s);
  return s;
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n) {  // in [0, n)
    return static_cast<int>(next_u64() % static_cast<uint64_t>(n));
  }

  // Box-Muller; consumes two uniforms per call, no cached spare.
  double normal() {
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  VectorXd normal_vector(int n) {
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  VectorXd uniform_vector(int n, double lo, double hi) {
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

 private:
  uint64_t state_;
};

// Thread budget for data-parallel sweeps. GCX_THREADS caps it; results do not
// depend on the value because work items are indexed.
inline int thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* env = std::getenv("GCX_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
    if (cap >= 1 && cap > n) n = cap;
  }
  if (n < 1) n = 1;
  if (n > 256) n = 256;
  return n;
}

// Runs body(i) for i in [0, n). Each index must write only its own slot.
inline void parallel_for(int n, const std::function<void(int)>& body) {
  int threads = std::min(thread_budget(), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace gcx
