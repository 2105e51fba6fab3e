#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace saudit {

// Worker-thread budget from SAMPLER_AUDIT_THREADS; 0 or unset means one per
// hardware thread.
inline unsigned thread_budget() {
    unsigned n = 0;
    if (const char* env = std::getenv("SAMPLER_AUDIT_THREADS")) {
        char* end = nullptr;
        const unsigned long parsed = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && parsed < 1024) n = static_cast<unsigned>(parsed);
    }
    if (n == 0) n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    return n;
}

// Runs fn(begin, end) over disjoint contiguous chunks of [0, total). fn is
// called concurrently, must only write state owned by its chunk, and must not
// throw. Results must not depend on the chunking, so callers that reduce
// should buffer per-index values and fold them sequentially afterwards.
template <typename Fn>
void parallel_for(std::size_t total, Fn&& fn) {
    if (total == 0) return;
    const std::size_t budget = std::min<std::size_t>(thread_budget(), total);
    if (budget <= 1) {
        fn(std::size_t{0}, total);
        return;
    }
    const std::size_t chunk = (total + budget - 1) / budget;
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < budget; ++w) {
        const std::size_t begin = w * chunk;
        if (begin >= total) break;
        const std::size_t end = std::min(total, begin + chunk);
        workers.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : workers) t.join();
}

} // namespace saudit
