#pragma once

#include <cstddef>
#include <functional>

namespace ii {

// Global worker cap: set from the CLI --threads flag or the II_THREADS
// environment variable; 0 means hardware concurrency.
void set_thread_cap(unsigned cap);
unsigned thread_cap();

// Runs fn(i) for i in [0, n) over a static block partition. Each index is
// processed exactly once and writers must target disjoint slots, so results
// do not depend on the number of threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ii
