#include "augdl/kernels.hpp"

#include <cstdint>

namespace augdl::kernels {

namespace {
// Work below this many outer iterations is not worth a fork-join.
constexpr std::size_t kParallelGrain = 64;

inline bool use_omp(std::size_t outer) {
    return parallel::mode() == parallel::ExecMode::openmp && outer >= kParallelGrain;
}

inline void matmul_row(const double* __restrict__ a, const double* __restrict__ b, double* __restrict__ c,
                       std::size_t i, std::size_t k, std::size_t n) {
    double* __restrict__ ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] = 0.0;
    const double* __restrict__ ai = a + i * k;
    for (std::size_t kk = 0; kk < k; ++kk) {
        const double aik = ai[kk];
        const double* __restrict__ bk = b + kk * n;
        for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
}

inline void matmul_at_b_row(const double* __restrict__ a, const double* __restrict__ b, double* __restrict__ c,
                            std::size_t i, std::size_t m, std::size_t k, std::size_t n) {
    double* __restrict__ ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] = 0.0;
    for (std::size_t kk = 0; kk < k; ++kk) {
        const double aki = a[kk * m + i];
        const double* __restrict__ bk = b + kk * n;
        for (std::size_t j = 0; j < n; ++j) ci[j] += aki * bk[j];
    }
}

// Dot products use four fixed-order partial sums; without reassociation the
// compiler cannot vectorize a single-accumulator reduction. The order is the
// same on every path, so results stay deterministic.
inline double dot4(const double* __restrict__ x, const double* __restrict__ y, std::size_t k) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t kk = 0;
    for (; kk + 4 <= k; kk += 4) {
        acc0 += x[kk] * y[kk];
        acc1 += x[kk + 1] * y[kk + 1];
        acc2 += x[kk + 2] * y[kk + 2];
        acc3 += x[kk + 3] * y[kk + 3];
    }
    for (; kk < k; ++kk) acc0 += x[kk] * y[kk];
    return (acc0 + acc1) + (acc2 + acc3);
}

inline void matmul_a_bt_row(const double* __restrict__ a, const double* __restrict__ b, double* __restrict__ c,
                            std::size_t i, std::size_t k, std::size_t n) {
    const double* __restrict__ ai = a + i * k;
    double* __restrict__ ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] = dot4(ai, b + j * k, k);
}

inline void sqdist_row(const double* __restrict__ queries, const double* __restrict__ refs, std::size_t n_r,
                       std::size_t dim, std::size_t q, double* __restrict__ out) {
    const double* __restrict__ qi = queries + q * dim;
    double* __restrict__ oq = out + q * n_r;
    for (std::size_t r = 0; r < n_r; ++r) {
        const double* __restrict__ rr = refs + r * dim;
        double acc0 = 0.0, acc1 = 0.0;
        std::size_t d = 0;
        for (; d + 2 <= dim; d += 2) {
            const double d0 = qi[d] - rr[d];
            const double d1 = qi[d + 1] - rr[d + 1];
            acc0 += d0 * d0;
            acc1 += d1 * d1;
        }
        if (d < dim) {
            const double d0 = qi[d] - rr[d];
            acc0 += d0 * d0;
        }
        oq[r] = acc0 + acc1;
    }
}
}  // namespace

void matmul_serial(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) matmul_row(a, b, c, i, k, n);
}

void matmul_omp(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(m); ++i) {
        matmul_row(a, b, c, static_cast<std::size_t>(i), k, n);
    }
}

void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
    if (use_omp(m)) {
        matmul_omp(a, b, c, m, k, n);
    } else {
        matmul_serial(a, b, c, m, k, n);
    }
}

void matmul_at_b_serial(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) matmul_at_b_row(a, b, c, i, m, k, n);
}

void matmul_at_b_omp(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(m); ++i) {
        matmul_at_b_row(a, b, c, static_cast<std::size_t>(i), m, k, n);
    }
}

void matmul_at_b(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
    if (use_omp(m)) {
        matmul_at_b_omp(a, b, c, m, k, n);
    } else {
        matmul_at_b_serial(a, b, c, m, k, n);
    }
}

void matmul_a_bt_serial(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) matmul_a_bt_row(a, b, c, i, k, n);
}

void matmul_a_bt_omp(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(m); ++i) {
        matmul_a_bt_row(a, b, c, static_cast<std::size_t>(i), k, n);
    }
}

void matmul_a_bt(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
    if (use_omp(m)) {
        matmul_a_bt_omp(a, b, c, m, k, n);
    } else {
        matmul_a_bt_serial(a, b, c, m, k, n);
    }
}

void pairwise_sqdist_serial(const double* queries, std::size_t n_q, const double* refs, std::size_t n_r,
                            std::size_t dim, double* out) {
    for (std::size_t q = 0; q < n_q; ++q) sqdist_row(queries, refs, n_r, dim, q, out);
}

void pairwise_sqdist_omp(const double* queries, std::size_t n_q, const double* refs, std::size_t n_r, std::size_t dim,
                         double* out) {
#pragma omp parallel for schedule(static)
    for (std::int64_t q = 0; q < static_cast<std::int64_t>(n_q); ++q) {
        sqdist_row(queries, refs, n_r, dim, static_cast<std::size_t>(q), out);
    }
}

void pairwise_sqdist(const double* queries, std::size_t n_q, const double* refs, std::size_t n_r, std::size_t dim,
                     double* out) {
    if (use_omp(n_q)) {
        pairwise_sqdist_omp(queries, n_q, refs, n_r, dim, out);
    } else {
        pairwise_sqdist_serial(queries, n_q, refs, n_r, dim, out);
    }
}

}  // namespace augdl::kernels
