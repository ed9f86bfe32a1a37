#pragma once

#include <cstddef>
#include <functional>

namespace mirkit::pipeline {

/// Number of threads for a request of `workers` (0 = hardware concurrency).
std::size_t resolve_workers(std::size_t workers) noexcept;

/// Runs fn(0) .. fn(count - 1) on up to `workers` threads. All calls complete;
/// afterwards the exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace mirkit::pipeline
