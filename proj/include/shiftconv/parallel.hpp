#pragma once

#include <cstddef>
#include <functional>

namespace shiftconv {

// Worker count used by internal loops; 0 selects std::thread::hardware_concurrency().
void set_thread_count(unsigned count);
unsigned thread_count();

// Runs body(lo, hi) over [begin, end) split into contiguous blocks.  Block
// boundaries depend only on the range and grain, never on the worker count,
// so callers writing disjoint outputs get identical results for any pool size.
void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end, std::ptrdiff_t grain,
                  const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& body);

}  // namespace shiftconv
