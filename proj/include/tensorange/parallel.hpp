#pragma once

#include <cstddef>
#include <functional>

namespace tensorange {

/// Worker count: `requested` when non-zero, else TENSORANGE_THREADS, else the
/// hardware concurrency.
unsigned resolve_threads(unsigned requested);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Indices are
/// handed out dynamically; the first exception thrown by any body is
/// rethrown after all workers have stopped.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace tensorange
