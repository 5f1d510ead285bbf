#pragma once

#include <cstddef>
#include <functional>

namespace mk {

/// Number of worker threads used by the exhaustive checks. Defaults to 1.
/// Results never depend on this value.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n), split into contiguous chunks across the
/// configured threads. `body` must only write to slots it owns.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

/// True iff pred(i) holds for every i in [0, n). Stops early once a failure
/// is observed; the answer is deterministic, which index failed is not.
bool parallel_all(std::size_t n, const std::function<bool(std::size_t)> &pred);

} // namespace mk
