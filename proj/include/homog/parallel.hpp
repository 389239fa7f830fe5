#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace homog {

/// Worker cap: HOMOG1D_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are at
/// least `grain` long. Exceptions from workers are rethrown (first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t grain = 1);

/// Pairwise (cascade) summation in index order; the result depends only on
/// the input sequence, not on how it was produced.
double pairwise_sum(std::span<const double> values);

}  // namespace homog
