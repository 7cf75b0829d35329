#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>

namespace opjensen {

enum class ExecMode { serial, parallel };

/// Thread budget: min(hardware, OPJENSEN_THREADS) with a floor of 1.
int max_threads();

/// Runs fn(i) for i in [0, count). In parallel mode the iterations are
/// distributed over OpenMP threads; each iteration must write only to its own
/// slot so serial and parallel runs produce identical results. The first
/// exception (by index) is rethrown after the loop.
void for_each_index(std::int64_t count, ExecMode mode,
                    const std::function<void(std::int64_t)>& fn);

/// Evaluates pred(i) for i in [0, count) and returns the smallest index where
/// pred returns true, or -1. Proceeds in blocks so a parallel run can stop
/// early while still matching the serial answer exactly.
std::int64_t first_index_where(std::int64_t count, ExecMode mode,
                               const std::function<bool(std::int64_t)>& pred);

}  // namespace opjensen
