#include "mcpde/parallel.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string_view>
#include <thread>
#include <vector>

namespace mcpde {

unsigned resolve_worker_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MCPDE_WORKERS")) {
        std::string_view sv(env);
        unsigned parsed = 0;
        const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), parsed);
        if (ec == std::errc() && ptr == sv.data() + sv.size() && parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_chunks(std::size_t n, unsigned workers,
                     const std::function<void(std::size_t, std::size_t)>& body) {
    workers = resolve_worker_count(workers);
    if (n == 0) return;
    if (workers > n) workers = static_cast<unsigned>(n);
    if (workers == 1) {
        body(0, n);
        return;
    }

    const std::size_t base = n / workers;
    const std::size_t extra = n % workers;
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    std::size_t begin = 0;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t len = base + (w < extra ? 1 : 0);
        const std::size_t end = begin + len;
        threads.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

SampleStats summarize(const Vector& values) {
    SampleStats stats;
    const auto n = static_cast<std::size_t>(values.size());
    if (n == 0) return stats;
    stats.mean = pairwise_sum(values) / static_cast<double>(n);
    if (n < 2) return stats;
    Vector centered = (values.array() - stats.mean).square().matrix();
    const double ss = pairwise_sum(centered);
    stats.sd = std::sqrt(ss / static_cast<double>(n - 1));
    stats.std_error = stats.sd / std::sqrt(static_cast<double>(n));
    return stats;
}

}  // namespace mcpde
