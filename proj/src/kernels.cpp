#include "ival/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ival::kernels {

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void map_unary_serial(const UnaryFn& f, std::span<const Interval> in, std::span<Interval> out) {
    for (size_t i = 0; i < in.size(); ++i) out[i] = f(in[i]);
}

void map_unary_parallel(const UnaryFn& f, std::span<const Interval> in, std::span<Interval> out) {
    const long n = static_cast<long>(in.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = f(in[i]);
}

namespace {

// flat output index -> input offsets under broadcast strides
inline void unflatten_offsets(size_t flat, const size_t* astride, const size_t* bstride,
                              const size_t* oshape, size_t rank, size_t& aoff, size_t& boff) {
    aoff = 0;
    boff = 0;
    for (size_t d = rank; d-- > 0;) {
        const size_t idx = flat % oshape[d];
        flat /= oshape[d];
        aoff += idx * astride[d];
        boff += idx * bstride[d];
    }
}

}  // namespace

void map_binary_serial(const BinaryFn& f, const Interval* a, const size_t* astride,
                       const Interval* b, const size_t* bstride, Interval* out,
                       const size_t* oshape, size_t rank, size_t total) {
    for (size_t i = 0; i < total; ++i) {
        size_t aoff, boff;
        unflatten_offsets(i, astride, bstride, oshape, rank, aoff, boff);
        out[i] = f(a[aoff], b[boff]);
    }
}

void map_binary_parallel(const BinaryFn& f, const Interval* a, const size_t* astride,
                         const Interval* b, const size_t* bstride, Interval* out,
                         const size_t* oshape, size_t rank, size_t total) {
    const long n = static_cast<long>(total);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        size_t aoff, boff;
        unflatten_offsets(static_cast<size_t>(i), astride, bstride, oshape, rank, aoff, boff);
        out[i] = f(a[aoff], b[boff]);
    }
}

namespace {

inline Interval dot_row_col(const Interval* A, const Interval* B, size_t p, size_t m, size_t i,
                            size_t j) {
    Interval acc(0.0, 0.0);
    for (size_t k = 0; k < p; ++k) acc = add(acc, mul(A[i * p + k], B[k * m + j]));
    return acc;
}

}  // namespace

void matmul_serial(const Interval* A, const Interval* B, Interval* C, size_t n, size_t p,
                   size_t m) {
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) C[i * m + j] = dot_row_col(A, B, p, m, i, j);
}

void matmul_parallel(const Interval* A, const Interval* B, Interval* C, size_t n, size_t p,
                     size_t m) {
    const long rows = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i)
        for (size_t j = 0; j < m; ++j)
            C[static_cast<size_t>(i) * m + j] = dot_row_col(A, B, p, m, static_cast<size_t>(i), j);
}

}  // namespace ival::kernels
