#include "rvlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rvlab {

namespace {
std::atomic<unsigned> g_default_workers{0};
}

void set_default_workers(unsigned workers) { g_default_workers.store(workers); }

unsigned default_workers() {
    unsigned w = g_default_workers.load();
    if (w == 0) {
        w = std::max(1u, std::thread::hardware_concurrency());
    }
    return w;
}

void parallel_chunks(std::size_t total, std::size_t chunk_size, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
    if (total == 0) {
        return;
    }
    chunk_size = std::max<std::size_t>(chunk_size, 1);
    const std::size_t chunks = (total + chunk_size - 1) / chunk_size;
    if (workers == 0) {
        workers = default_workers();
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));

    auto run_chunk = [&](std::size_t c) {
        const std::size_t begin = c * chunk_size;
        const std::size_t end = std::min(total, begin + chunk_size);
        body(c, begin, end);
    };

    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            run_chunk(c);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= chunks) {
                    return;
                }
                try {
                    run_chunk(c);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next.store(chunks);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

void parallel_for(std::size_t total, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
    parallel_chunks(total, 1, workers, [&](std::size_t, std::size_t begin, std::size_t) { body(begin); });
}

}  // namespace rvlab
