#pragma once

#include "mcpde/types.hpp"

#include <cstddef>
#include <functional>

namespace mcpde {

// Effective worker count: `requested` if nonzero, else the MCPDE_WORKERS
// environment variable, else hardware concurrency.
unsigned resolve_worker_count(unsigned requested);

// Splits [0, n) into one contiguous chunk per worker and runs `body` on
// each from its own thread. Exceptions are rethrown on the caller thread,
// lowest chunk first. Chunk boundaries depend only on (n, workers); any
// per-index output written by `body` is therefore identical for every
// worker count.
void parallel_chunks(std::size_t n, unsigned workers,
                     const std::function<void(std::size_t begin, std::size_t end)>& body);

// Fixed-shape pairwise summation; independent of how values were produced.
double pairwise_sum(const double* data, std::size_t n);
inline double pairwise_sum(const Vector& v) {
    return pairwise_sum(v.data(), static_cast<std::size_t>(v.size()));
}

struct SampleStats {
    double mean = 0.0;
    double sd = 0.0;        // sample standard deviation
    double std_error = 0.0; // sd / sqrt(n)
};
SampleStats summarize(const Vector& values);

}  // namespace mcpde
