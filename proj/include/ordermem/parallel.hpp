#pragma once

#include <cstddef>
#include <functional>

namespace ordermem {

/// Hardware concurrency, at least 1.
[[nodiscard]] std::size_t default_threads();

/// Calls fn(i) for i in [0, count) on up to `threads` workers. Work is
/// claimed dynamically; results must be written to per-index slots by the
/// caller. If any call throws, the exception of the lowest failing index is
/// rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace ordermem
