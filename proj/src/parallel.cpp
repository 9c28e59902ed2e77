#include "shiftconv/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace shiftconv {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned count) { g_threads.store(count); }

unsigned thread_count() {
    const unsigned n = g_threads.load();
    if (n != 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end, std::ptrdiff_t grain,
                  const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& body) {
    if (end <= begin) return;
    grain = std::max<std::ptrdiff_t>(grain, 1);
    const std::ptrdiff_t blocks = (end - begin + grain - 1) / grain;
    const unsigned workers = static_cast<unsigned>(std::min<std::ptrdiff_t>(thread_count(), blocks));
    if (workers <= 1) {
        for (std::ptrdiff_t b = 0; b < blocks; ++b) {
            const std::ptrdiff_t lo = begin + b * grain;
            body(lo, std::min(end, lo + grain));
        }
        return;
    }

    std::atomic<std::ptrdiff_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::ptrdiff_t b = next.fetch_add(1);
            if (b >= blocks) return;
            const std::ptrdiff_t lo = begin + b * grain;
            try {
                body(lo, std::min(end, lo + grain));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(blocks);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned i = 1; i < workers; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace shiftconv
