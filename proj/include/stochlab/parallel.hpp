#pragma once

#include <cstddef>
#include <functional>

namespace stochlab {

// Thread cap used by parallel_for. 0 means "use STOCHLAB_THREADS from the
// environment, else hardware concurrency".
void set_max_threads(unsigned n);
unsigned effective_threads();

// Runs fn(i) for i in [begin, end) on a fixed block decomposition. Callers
// must only write to i-indexed slots so results are schedule-independent;
// any reduction happens serially afterwards.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

}  // namespace stochlab
