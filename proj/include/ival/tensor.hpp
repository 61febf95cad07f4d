#ifndef IVAL_TENSOR_HPP
#define IVAL_TENSOR_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ival/interval.hpp"

namespace ival {

using UnaryFn = std::function<Interval(const Interval&)>;
using BinaryFn = std::function<Interval(const Interval&, const Interval&)>;

// n-dimensional array of intervals, row-major. Immutable in spirit: all
// operations return fresh tensors.
class IntervalTensor {
public:
    IntervalTensor() = default;
    explicit IntervalTensor(std::vector<size_t> shape);
    IntervalTensor(std::vector<size_t> shape, std::vector<Interval> data);

    const std::vector<size_t>& shape() const { return shape_; }
    size_t rank() const { return shape_.size(); }
    size_t size() const { return data_.size(); }

    Interval& operator[](size_t flat) { return data_[flat]; }
    const Interval& operator[](size_t flat) const { return data_[flat]; }

    // rank-2 element access
    Interval& at(size_t i, size_t j);
    const Interval& at(size_t i, size_t j) const;

    std::span<Interval> data() { return data_; }
    std::span<const Interval> data() const { return data_; }

private:
    std::vector<size_t> shape_;
    std::vector<Interval> data_;
};

bool operator==(const IntervalTensor& a, const IntervalTensor& b);

// trailing-dimension broadcast rule: align shapes right; dimensions must
// match or be 1
std::vector<size_t> broadcast_shape(const std::vector<size_t>& a, const std::vector<size_t>& b);

IntervalTensor map_elementwise(const UnaryFn& f, const IntervalTensor& t);
IntervalTensor map_elementwise(const BinaryFn& f, const IntervalTensor& a, const IntervalTensor& b);

// interval matrix product: C_ij = sum_k [a_ik]*[b_kj], k ascending
IntervalTensor matmul_interval(const IntervalTensor& A, const IntervalTensor& B);

// structured-text serialization: {"shape": [...], "lower": nested, "upper": nested};
// round-trips bitwise for finite endpoints
std::string tensor_to_json(const IntervalTensor& t);
IntervalTensor tensor_from_json(const std::string& text);

// Axis-aligned box: the endpoint view of a rank-1 interval tensor.
class Box {
public:
    Box() = default;
    Box(std::vector<double> lower, std::vector<double> upper);
    static Box point(std::vector<double> v);
    static Box from_tensor(const IntervalTensor& t);

    IntervalTensor to_tensor() const;

    size_t dim() const { return lo_.size(); }
    double lo(size_t i) const { return lo_[i]; }
    double hi(size_t i) const { return hi_[i]; }
    const std::vector<double>& lower() const { return lo_; }
    const std::vector<double>& upper() const { return hi_; }
    Interval interval(size_t i) const { return Interval(lo_[i], hi_[i]); }

    bool contains(std::span<const double> x) const;
    bool finite() const;
    std::vector<double> widths() const;
    std::vector<double> center() const;

private:
    std::vector<double> lo_, hi_;
};

bool operator==(const Box& a, const Box& b);
bool subset(const Box& a, const Box& b);

enum class Face { lower, upper };

// copy of v with the i-th entry replaced by w_i
std::vector<double> replace_component(std::span<const double> v, size_t i,
                                      std::span<const double> w);

// the i-th lower face [xl, xh_{i:xl}] or upper face [xl_{i:xh}, xh] of b:
// b with the opposite endpoint's i-th coordinate pinned to the chosen side
Box face_box(const Box& b, size_t i, Face side);

Box hull(std::span<const Box> boxes);
Box hull(const Box& a, const Box& b);

// tile b into prod(counts) sub-boxes sharing faces exactly; cells are ordered
// row-major over the per-axis cell indices (axis 0 slowest)
std::vector<Box> split_uniform(const Box& b, std::span<const size_t> counts);

Box concat(const Box& a, const Box& b);
Box concat(const Box& a, const Box& b, const Box& c);

}  // namespace ival

#endif
