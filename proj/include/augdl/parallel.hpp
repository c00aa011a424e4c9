#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace augdl::parallel {

enum class ExecMode { serial, openmp };

namespace detail {
inline std::atomic<ExecMode>& mode_flag() {
#ifdef _OPENMP
    static std::atomic<ExecMode> flag{ExecMode::openmp};
#else
    static std::atomic<ExecMode> flag{ExecMode::serial};
#endif
    return flag;
}
}  // namespace detail

inline ExecMode mode() { return detail::mode_flag().load(std::memory_order_relaxed); }
inline void set_mode(ExecMode m) { detail::mode_flag().store(m, std::memory_order_relaxed); }

/// Caps the OpenMP thread count. n <= 0 restores the runtime default.
inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Runs body(i) for i in [0, n). Every work item must be independent and own
/// its RNG stream; both paths then produce bitwise-identical results, so the
/// serial path doubles as the reference for the OpenMP one.
///
/// Exceptions thrown by work items are captured and the one with the lowest
/// index is rethrown after the loop, whichever path ran.
template <typename Body>
void parallel_for(std::size_t n, Body&& body, ExecMode m = mode()) {
#ifdef _OPENMP
    if (m == ExecMode::openmp && n > 1) {
        std::exception_ptr first_error;
        std::size_t first_error_index = n;
        std::mutex error_mutex;
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (static_cast<std::size_t>(i) < first_error_index) {
                    first_error_index = static_cast<std::size_t>(i);
                    first_error = std::current_exception();
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return;
    }
#else
    (void)m;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

/// parallel_for that stays serial below a grain size, for loops whose items
/// are too small to amortize a fork-join.
template <typename Body>
void parallel_for_grain(std::size_t n, std::size_t grain, Body&& body) {
    parallel_for(n, static_cast<Body&&>(body), n >= grain ? mode() : ExecMode::serial);
}

}  // namespace augdl::parallel
