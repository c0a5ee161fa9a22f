#include "conjugax/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace conjugax {

namespace {
constexpr std::size_t kParallelThreshold = std::size_t{1} << 18;
}

std::size_t max_threads() {
    if (const char* env = std::getenv("CONJUGAX_THREADS")) {
        try {
            long v = std::stol(env);
            if (v > 0) {
                return static_cast<std::size_t>(v);
            }
        } catch (const std::exception&) {
            // unparsable value: fall through to the hardware default
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, std::size_t cost_per_item,
                  const std::function<void(std::size_t)>& body) {
    std::size_t workers = std::min(max_threads(), n);
    if (workers <= 1 || n * std::max<std::size_t>(cost_per_item, 1) < kParallelThreshold) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                const std::size_t lo = w * chunk;
                const std::size_t hi = std::min(n, lo + chunk);
                for (std::size_t i = lo; i < hi; ++i) {
                    body(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace conjugax
