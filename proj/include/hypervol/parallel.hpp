#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace hypervol {

// Number of worker threads: HYPERVOL_THREADS if set (clamped to [1,64]),
// otherwise the hardware concurrency.
int thread_budget();

// Sums chunk_fn(chunk_begin, chunk_end) over [0, count) split into a fixed
// number of chunks. Chunk boundaries depend only on count, and partial sums
// are reduced in chunk order, so the result is identical for any thread count.
double parallel_sum(std::int64_t count,
                    const std::function<double(std::int64_t, std::int64_t)>& chunk_fn);

// Same scheme for `width` accumulators at once: chunk_fn adds its partials
// into a zeroed buffer of that width, and the buffers are reduced
// component-wise in chunk order.
std::vector<double> parallel_sum_vec(
    std::int64_t count, int width,
    const std::function<void(std::int64_t, std::int64_t, double*)>& chunk_fn);

}  // namespace hypervol
