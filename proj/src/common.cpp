#include "geomlab/common.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace geomlab {

long long binomial(int n, int r) {
    if (r < 0 || n < 0 || r > n)
        throw std::invalid_argument("binomial: need 0 <= r <= n");
    r = std::min(r, n - r);
    long long acc = 1;
    for (int i = 1; i <= r; ++i)
        acc = acc * (n - r + i) / i;
    return acc;
}

int worker_count() {
    static const int count = [] {
        if (const char* env = std::getenv("GEOMLAB_THREADS")) {
            const int v = std::atoi(env);
            if (v > 0) return v;
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? static_cast<int>(hw) : 1;
    }();
    return count;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int workers = worker_count();
    if (workers <= 1 || n < 256) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    const std::size_t chunk = std::max<std::size_t>(32, n / (8 * workers));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t begin = next.fetch_add(chunk);
                if (begin >= n) return;
                const std::size_t end = std::min(n, begin + chunk);
                for (std::size_t i = begin; i < end; ++i) fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace geomlab
