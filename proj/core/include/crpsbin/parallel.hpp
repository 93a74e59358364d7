#pragma once

#include <cstddef>
#include <functional>

namespace crpsbin {

// 0 means "use the CRPSBIN_THREADS environment variable if set, else the
// available hardware parallelism". Always returns >= 1.
int resolve_threads(int requested);

// Runs body(i) for i in [begin, end) on at most `threads` workers. Each index
// is visited exactly once; callers keep writes index-disjoint.
void parallel_for(std::size_t begin, std::size_t end, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace crpsbin
