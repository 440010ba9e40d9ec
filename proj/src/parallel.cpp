#include "hypervol/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace hypervol {

int thread_budget() {
  if (const char* env = std::getenv("HYPERVOL_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return std::min(v, 64);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(std::min(hc, 64u));
}

double parallel_sum(std::int64_t count,
                    const std::function<double(std::int64_t, std::int64_t)>& chunk_fn) {
  if (count <= 0) return 0.0;
  const std::int64_t n_chunks = std::min<std::int64_t>(count, 256);
  const std::int64_t step = (count + n_chunks - 1) / n_chunks;
  std::vector<double> partial(static_cast<std::size_t>(n_chunks), 0.0);

  auto run_range = [&](std::int64_t c0, std::int64_t c1) {
    for (std::int64_t c = c0; c < c1; ++c) {
      std::int64_t lo = c * step;
      std::int64_t hi = std::min(count, lo + step);
      if (lo < hi) partial[static_cast<std::size_t>(c)] = chunk_fn(lo, hi);
    }
  };

  int threads = std::min<std::int64_t>(thread_budget(), n_chunks);
  if (threads <= 1) {
    run_range(0, n_chunks);
  } else {
    std::vector<std::thread> pool;
    std::int64_t per = (n_chunks + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::int64_t c0 = t * per;
      std::int64_t c1 = std::min<std::int64_t>(n_chunks, c0 + per);
      if (c0 < c1) pool.emplace_back(run_range, c0, c1);
    }
    for (auto& th : pool) th.join();
  }

  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

std::vector<double> parallel_sum_vec(
    std::int64_t count, int width,
    const std::function<void(std::int64_t, std::int64_t, double*)>& chunk_fn) {
  std::vector<double> total(static_cast<std::size_t>(width), 0.0);
  if (count <= 0 || width <= 0) return total;
  const std::int64_t n_chunks = std::min<std::int64_t>(count, 256);
  const std::int64_t step = (count + n_chunks - 1) / n_chunks;
  std::vector<double> partial(static_cast<std::size_t>(n_chunks * width), 0.0);

  auto run_range = [&](std::int64_t c0, std::int64_t c1) {
    for (std::int64_t c = c0; c < c1; ++c) {
      std::int64_t lo = c * step;
      std::int64_t hi = std::min(count, lo + step);
      if (lo < hi) chunk_fn(lo, hi, partial.data() + c * width);
    }
  };

  int threads = std::min<std::int64_t>(thread_budget(), n_chunks);
  if (threads <= 1) {
    run_range(0, n_chunks);
  } else {
    std::vector<std::thread> pool;
    std::int64_t per = (n_chunks + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::int64_t c0 = t * per;
      std::int64_t c1 = std::min<std::int64_t>(n_chunks, c0 + per);
      if (c0 < c1) pool.emplace_back(run_range, c0, c1);
    }
    for (auto& th : pool) th.join();
  }

  for (std::int64_t c = 0; c < n_chunks; ++c)
    for (int w = 0; w < width; ++w)
      total[static_cast<std::size_t>(w)] += partial[static_cast<std::size_t>(c * width + w)];
  return total;
}

}  // namespace hypervol
