#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace hypolab {

/// Cap on internal parallelism; 0 restores the default (hardware concurrency).
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n). Work is split into contiguous static chunks;
/// each index is processed exactly once, so results written by index are
/// identical for every thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise (tree) summation with a fixed split order.
double pairwise_sum(std::span<const double> v);

}  // namespace hypolab
