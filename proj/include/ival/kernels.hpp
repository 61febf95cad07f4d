#ifndef IVAL_KERNELS_HPP
#define IVAL_KERNELS_HPP

#include <cstddef>
#include <span>

#include "ival/tensor.hpp"

// Inner loops behind the tensor operations. Every kernel comes in a serial
// reference variant and an OpenMP variant; the parallel variants write
// disjoint output slots with the exact serial per-element arithmetic, so the
// two produce bitwise-identical results. Tests assert the equality and
// bench_kernels compares their throughput.
namespace ival::kernels {

bool openmp_enabled();
int max_threads();

// elementwise map, same length in/out
void map_unary_serial(const UnaryFn& f, std::span<const Interval> in, std::span<Interval> out);
void map_unary_parallel(const UnaryFn& f, std::span<const Interval> in, std::span<Interval> out);

// elementwise binary map over pre-broadcast strides (0-stride = broadcast
// axis); strides in elements, shapes row-major
void map_binary_serial(const BinaryFn& f, const Interval* a, const size_t* astride,
                       const Interval* b, const size_t* bstride, Interval* out,
                       const size_t* oshape, size_t rank, size_t total);
void map_binary_parallel(const BinaryFn& f, const Interval* a, const size_t* astride,
                         const Interval* b, const size_t* bstride, Interval* out,
                         const size_t* oshape, size_t rank, size_t total);

// C (n x m) = A (n x p) * B (p x m), ascending-k accumulation per entry
void matmul_serial(const Interval* A, const Interval* B, Interval* C, size_t n, size_t p,
                   size_t m);
void matmul_parallel(const Interval* A, const Interval* B, Interval* C, size_t n, size_t p,
                     size_t m);

}  // namespace ival::kernels

#endif
