#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace maslov::parallel {

/// Worker count: MASLOV_THREADS if set and positive, otherwise the OpenMP default.
int worker_count();

namespace detail {

template <class R>
std::vector<R> unwrap(std::vector<std::optional<R>>& slots, std::vector<std::exception_ptr>& errors) {
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace detail

/// Reference implementation: evaluates f(0..n-1) in order on the calling thread.
template <class F>
auto map_serial(std::size_t n, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
  return out;
}

/// OpenMP kernel with the same contract as map_serial. Exceptions are rethrown
/// after the loop, lowest index first, so failures are reproducible.
template <class F>
auto map_omp(std::size_t n, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  const long long count = static_cast<long long>(n);
#ifdef _OPENMP
  const int threads = worker_count();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (count > 1 && threads > 1)
#endif
  for (long long i = 0; i < count; ++i) {
    try {
      slots[static_cast<std::size_t>(i)].emplace(f(static_cast<std::size_t>(i)));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  return detail::unwrap(slots, errors);
}

template <class F>
auto map(std::size_t n, F&& f, bool parallel) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  if (parallel) return map_omp(n, std::forward<F>(f));
  return map_serial(n, std::forward<F>(f));
}

}  // namespace maslov::parallel
