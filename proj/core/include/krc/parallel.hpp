#ifndef KRC_PARALLEL_HPP
#define KRC_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <functional>

namespace krc {

/// Worker budget: min(hardware_concurrency, KRC_THREADS) with KRC_THREADS
/// read once from the environment. Always at least 1.
std::size_t worker_count();

/// Runs fn(i) for i in [0, n). Work items must be independent; results are
/// deterministic regardless of scheduling because each index owns its output
/// slot. Falls back to a serial loop for small n or a single worker. The
/// first exception thrown by any item is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace krc

#endif  // KRC_PARALLEL_HPP
