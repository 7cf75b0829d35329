#include "opjensen/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace opjensen {

int max_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("OPJENSEN_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return std::max(n, 1);
}

void for_each_index(std::int64_t count, ExecMode mode,
                    const std::function<void(std::int64_t)>& fn) {
  if (count <= 0) return;
  std::exception_ptr first_error;
  std::int64_t first_error_index = count;
  if (mode == ExecMode::parallel && max_threads() > 1) {
    const int threads = max_threads();
#ifdef _OPENMP
#pragma omp parallel for num_threads(threads) schedule(static)
#endif
    for (std::int64_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical(opjensen_for_each_index)
#endif
        {
          if (i < first_error_index) {
            first_error_index = i;
            first_error = std::current_exception();
          }
        }
      }
    }
  } else {
    for (std::int64_t i = 0; i < count; ++i) fn(i);  // exceptions propagate directly
  }
  if (first_error) std::rethrow_exception(first_error);
}

std::int64_t first_index_where(std::int64_t count, ExecMode mode,
                               const std::function<bool(std::int64_t)>& pred) {
  if (count <= 0) return -1;
  if (mode == ExecMode::serial || max_threads() <= 1) {
    for (std::int64_t i = 0; i < count; ++i)
      if (pred(i)) return i;
    return -1;
  }
  const std::int64_t block = std::max<std::int64_t>(64, 16 * max_threads());
  std::vector<char> hits(static_cast<std::size_t>(block));
  for (std::int64_t lo = 0; lo < count; lo += block) {
    const std::int64_t hi = std::min(count, lo + block);
    std::fill(hits.begin(), hits.end(), 0);
    std::exception_ptr first_error;
    std::int64_t first_error_index = hi;
    const int threads = max_threads();
#ifdef _OPENMP
#pragma omp parallel for num_threads(threads) schedule(static)
#endif
    for (std::int64_t i = lo; i < hi; ++i) {
      try {
        hits[static_cast<std::size_t>(i - lo)] = pred(i) ? 1 : 0;
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical(opjensen_first_index_where)
#endif
        {
          if (i < first_error_index) {
            first_error_index = i;
            first_error = std::current_exception();
          }
        }
      }
    }
    for (std::int64_t i = lo; i < hi; ++i) {
      if (first_error && i == first_error_index) std::rethrow_exception(first_error);
      if (hits[static_cast<std::size_t>(i - lo)]) return i;
    }
    if (first_error) std::rethrow_exception(first_error);
  }
  return -1;
}

}  // namespace opjensen
