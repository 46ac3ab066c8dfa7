#ifndef XCHAN_PARALLEL_HPP
#define XCHAN_PARALLEL_HPP

#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace xchan {

// Worker count: hardware concurrency capped by the XCHAN_THREADS
// environment variable when set.
inline unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("XCHAN_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < n)
      n = static_cast<unsigned>(cap);
  }
  return n;
}

// Runs fn(begin..end) over disjoint index ranges. The caller must make
// per-index work independent (counter-based RNG streams) so the result
// does not depend on the partitioning.
template <typename Fn>
void parallel_for(std::uint64_t begin, std::uint64_t end, Fn&& fn) {
  const std::uint64_t total = end > begin ? end - begin : 0;
  unsigned workers = worker_count();
  if (workers <= 1 || total < 2 * workers) {
    fn(begin, end);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::uint64_t chunk = (total + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::uint64_t lo = begin + w * chunk;
    std::uint64_t hi = lo + chunk < end ? lo + chunk : end;
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace xchan

#endif  // XCHAN_PARALLEL_HPP
