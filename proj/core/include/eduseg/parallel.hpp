#ifndef EDUSEG_PARALLEL_HPP
#define EDUSEG_PARALLEL_HPP

#include <functional>

namespace eduseg {

/// Resolves a requested worker count: 0 means "all hardware threads",
/// anything else is clamped to at least 1.
int effective_workers(int requested);

/// Splits [0, count) into `workers` contiguous blocks and calls
/// fn(block, begin, end) for each, concurrently when workers > 1.
/// Callers merge per-block results in block order, which keeps every
/// reduction independent of thread scheduling.
void run_blocks(int count, int workers, const std::function<void(int, int, int)>& fn);

}  // namespace eduseg

#endif
