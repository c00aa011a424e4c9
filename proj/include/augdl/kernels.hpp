#pragma once

#include <cstddef>

#include "augdl/parallel.hpp"

namespace augdl::kernels {

// Dense row-major kernels. Each has a serial reference implementation and an
// OpenMP twin parallelized over the outer index with an identical inner loop
// order, so the two produce bitwise-identical output. The unsuffixed entry
// point dispatches on parallel::mode().

/// c = a * b. a is m x k, b is k x n, c is m x n (c is overwritten).
void matmul_serial(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
void matmul_omp(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);

/// c = a^T * b. a is k x m, b is k x n, c is m x n. The batch index k stays
/// in the sequential inner loop, which keeps gradient accumulation
/// deterministic under any thread count.
void matmul_at_b_serial(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
void matmul_at_b_omp(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
void matmul_at_b(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);

/// c = a * b^T. a is m x k, b is n x k, c is m x n.
void matmul_a_bt_serial(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
void matmul_a_bt_omp(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
void matmul_a_bt(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);

/// out(q, r) = squared Euclidean distance between queries row q and refs row r.
/// queries is n_q x dim, refs is n_r x dim, out is n_q x n_r.
void pairwise_sqdist_serial(const double* queries, std::size_t n_q, const double* refs, std::size_t n_r,
                            std::size_t dim, double* out);
void pairwise_sqdist_omp(const double* queries, std::size_t n_q, const double* refs, std::size_t n_r,
                         std::size_t dim, double* out);
void pairwise_sqdist(const double* queries, std::size_t n_q, const double* refs, std::size_t n_r,
                     std::size_t dim, double* out);

}  // namespace augdl::kernels
