#pragma once

#include <cstddef>
#include <functional>

namespace lamharm {

/// Worker count for per-mode loops: LAMHARM_THREADS when set to a positive
/// integer, otherwise the hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index
/// writes only its own output slot, so results do not depend on scheduling.
/// If several bodies throw, the exception of the lowest index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lamharm
