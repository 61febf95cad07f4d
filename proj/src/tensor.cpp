#include "ival/tensor.hpp"

#include <json.hpp>

#include "ival/kernels.hpp"

namespace ival {

namespace {

size_t shape_product(const std::vector<size_t>& shape) {
    size_t n = 1;
    for (size_t d : shape) {
        if (d == 0) throw std::invalid_argument("tensor: zero dimension");
        n *= d;
    }
    return n;
}

// elementwise maps switch to the OpenMP kernels above this size
constexpr size_t kParallelCutoff = 4096;
constexpr size_t kMatmulParallelCutoff = 64 * 64;

}  // namespace

IntervalTensor::IntervalTensor(std::vector<size_t> shape)
    : shape_(std::move(shape)), data_(shape_product(shape_)) {}

IntervalTensor::IntervalTensor(std::vector<size_t> shape, std::vector<Interval> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_product(shape_))
        throw std::invalid_argument("tensor: data length does not match shape");
}

Interval& IntervalTensor::at(size_t i, size_t j) {
    if (rank() != 2) throw std::invalid_argument("tensor: at(i,j) requires rank 2");
    return data_[i * shape_[1] + j];
}

const Interval& IntervalTensor::at(size_t i, size_t j) const {
    return const_cast<IntervalTensor&>(*this).at(i, j);
}

bool operator==(const IntervalTensor& a, const IntervalTensor& b) {
    if (a.shape() != b.shape()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

std::vector<size_t> broadcast_shape(const std::vector<size_t>& a, const std::vector<size_t>& b) {
    const size_t rank = std::max(a.size(), b.size());
    std::vector<size_t> out(rank);
    for (size_t d = 0; d < rank; ++d) {
        const size_t da = d < rank - a.size() ? 1 : a[d - (rank - a.size())];
        const size_t db = d < rank - b.size() ? 1 : b[d - (rank - b.size())];
        if (da != db && da != 1 && db != 1)
            throw std::invalid_argument("broadcast: incompatible shapes");
        out[d] = std::max(da, db);
    }
    return out;
}

IntervalTensor map_elementwise(const UnaryFn& f, const IntervalTensor& t) {
    IntervalTensor out(t.shape());
    if (t.size() >= kParallelCutoff && kernels::openmp_enabled())
        kernels::map_unary_parallel(f, t.data(), out.data());
    else
        kernels::map_unary_serial(f, t.data(), out.data());
    return out;
}

namespace {

// row-major strides padded to the broadcast rank, 0 on broadcast axes
std::vector<size_t> broadcast_strides(const std::vector<size_t>& shape, size_t out_rank) {
    std::vector<size_t> strides(out_rank, 0);
    size_t s = 1;
    for (size_t d = shape.size(); d-- > 0;) {
        const size_t pos = d + (out_rank - shape.size());
        strides[pos] = (shape[d] == 1) ? 0 : s;
        s *= shape[d];
    }
    return strides;
}

}  // namespace

IntervalTensor map_elementwise(const BinaryFn& f, const IntervalTensor& a,
                               const IntervalTensor& b) {
    const std::vector<size_t> oshape = broadcast_shape(a.shape(), b.shape());
    IntervalTensor out(oshape);
    const std::vector<size_t> as = broadcast_strides(a.shape(), oshape.size());
    const std::vector<size_t> bs = broadcast_strides(b.shape(), oshape.size());
    const size_t total = out.size();
    if (total >= kParallelCutoff && kernels::openmp_enabled())
        kernels::map_binary_parallel(f, a.data().data(), as.data(), b.data().data(), bs.data(),
                                     out.data().data(), oshape.data(), oshape.size(), total);
    else
        kernels::map_binary_serial(f, a.data().data(), as.data(), b.data().data(), bs.data(),
                                   out.data().data(), oshape.data(), oshape.size(), total);
    return out;
}

IntervalTensor matmul_interval(const IntervalTensor& A, const IntervalTensor& B) {
    if (A.rank() != 2 || B.rank() != 2)
        throw std::invalid_argument("matmul_interval: rank-2 tensors required");
    const size_t n = A.shape()[0], p = A.shape()[1], m = B.shape()[1];
    if (B.shape()[0] != p) throw std::invalid_argument("matmul_interval: inner dimension mismatch");
    IntervalTensor C({n, m});
    if (n * m >= kMatmulParallelCutoff && kernels::openmp_enabled())
        kernels::matmul_parallel(A.data().data(), B.data().data(), C.data().data(), n, p, m);
    else
        kernels::matmul_serial(A.data().data(), B.data().data(), C.data().data(), n, p, m);
    return C;
}

namespace {

using nlohmann::json;

json nest_endpoints(const IntervalTensor& t, bool upper, size_t dim, size_t offset,
                    size_t stride) {
    const auto& shape = t.shape();
    if (dim == shape.size()) {
        const Interval& v = t[offset];
        return upper ? v.hi : v.lo;
    }
    json arr = json::array();
    const size_t inner = stride / shape[dim];
    for (size_t i = 0; i < shape[dim]; ++i)
        arr.push_back(nest_endpoints(t, upper, dim + 1, offset + i * inner, inner));
    return arr;
}

void flatten_endpoints(const json& node, std::vector<double>& out) {
    if (node.is_array()) {
        for (const auto& c : node) flatten_endpoints(c, out);
    } else if (node.is_number()) {
        out.push_back(node.get<double>());
    } else {
        throw std::invalid_argument("tensor_from_json: non-numeric entry");
    }
}

}  // namespace

std::string tensor_to_json(const IntervalTensor& t) {
    json j;
    j["shape"] = t.shape();
    j["lower"] = nest_endpoints(t, false, 0, 0, t.size());
    j["upper"] = nest_endpoints(t, true, 0, 0, t.size());
    return j.dump();
}

IntervalTensor tensor_from_json(const std::string& text) {
    const json j = json::parse(text);
    std::vector<size_t> shape = j.at("shape").get<std::vector<size_t>>();
    std::vector<double> lo, hi;
    flatten_endpoints(j.at("lower"), lo);
    flatten_endpoints(j.at("upper"), hi);
    const size_t n = shape_product(shape);
    if (lo.size() != n || hi.size() != n)
        throw std::invalid_argument("tensor_from_json: data does not match shape");
    std::vector<Interval> data;
    data.reserve(n);
    for (size_t i = 0; i < n; ++i) data.emplace_back(lo[i], hi[i]);
    return IntervalTensor(std::move(shape), std::move(data));
}

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : lo_(std::move(lower)), hi_(std::move(upper)) {
    if (lo_.size() != hi_.size()) throw std::invalid_argument("Box: endpoint length mismatch");
    for (size_t i = 0; i < lo_.size(); ++i)
        if (!(lo_[i] <= hi_[i])) throw std::invalid_argument("Box: lower must be <= upper");
}

Box Box::point(std::vector<double> v) {
    std::vector<double> lo = v;
    return Box(std::move(lo), std::move(v));
}

Box Box::from_tensor(const IntervalTensor& t) {
    if (t.rank() != 1) throw std::invalid_argument("Box: rank-1 tensor required");
    std::vector<double> lo(t.size()), hi(t.size());
    for (size_t i = 0; i < t.size(); ++i) {
        lo[i] = t[i].lo;
        hi[i] = t[i].hi;
    }
    return Box(std::move(lo), std::move(hi));
}

IntervalTensor Box::to_tensor() const {
    std::vector<Interval> data;
    data.reserve(dim());
    for (size_t i = 0; i < dim(); ++i) data.emplace_back(lo_[i], hi_[i]);
    return IntervalTensor({dim()}, std::move(data));
}

bool Box::contains(std::span<const double> x) const {
    if (x.size() != dim()) return false;
    for (size_t i = 0; i < dim(); ++i)
        if (!(lo_[i] <= x[i] && x[i] <= hi_[i])) return false;
    return true;
}

bool Box::finite() const {
    for (size_t i = 0; i < dim(); ++i)
        if (!std::isfinite(lo_[i]) || !std::isfinite(hi_[i])) return false;
    return true;
}

std::vector<double> Box::widths() const {
    std::vector<double> w(dim());
    for (size_t i = 0; i < dim(); ++i) w[i] = width(interval(i));
    return w;
}

std::vector<double> Box::center() const {
    std::vector<double> c(dim());
    for (size_t i = 0; i < dim(); ++i) c[i] = midpoint(interval(i));
    return c;
}

bool operator==(const Box& a, const Box& b) {
    return a.lower() == b.lower() && a.upper() == b.upper();
}

bool subset(const Box& a, const Box& b) {
    if (a.dim() != b.dim()) return false;
    for (size_t i = 0; i < a.dim(); ++i)
        if (!(b.lo(i) <= a.lo(i) && a.hi(i) <= b.hi(i))) return false;
    return true;
}

std::vector<double> replace_component(std::span<const double> v, size_t i,
                                      std::span<const double> w) {
    if (v.size() != w.size()) throw std::invalid_argument("replace_component: length mismatch");
    if (i >= v.size()) throw std::out_of_range("replace_component: index out of range");
    std::vector<double> out(v.begin(), v.end());
    out[i] = w[i];
    return out;
}

Box face_box(const Box& b, size_t i, Face side) {
    if (i >= b.dim()) throw std::out_of_range("face_box: index out of range");
    std::vector<double> lo = b.lower(), hi = b.upper();
    if (side == Face::lower)
        hi[i] = lo[i];
    else
        lo[i] = hi[i];
    return Box(std::move(lo), std::move(hi));
}

Box hull(std::span<const Box> boxes) {
    if (boxes.empty()) throw std::invalid_argument("hull: empty list");
    std::vector<double> lo = boxes[0].lower(), hi = boxes[0].upper();
    for (size_t k = 1; k < boxes.size(); ++k) {
        if (boxes[k].dim() != lo.size()) throw std::invalid_argument("hull: dimension mismatch");
        for (size_t i = 0; i < lo.size(); ++i) {
            lo[i] = std::min(lo[i], boxes[k].lo(i));
            hi[i] = std::max(hi[i], boxes[k].hi(i));
        }
    }
    return Box(std::move(lo), std::move(hi));
}

Box hull(const Box& a, const Box& b) {
    const Box boxes[2] = {a, b};
    return hull(std::span<const Box>(boxes, 2));
}

std::vector<Box> split_uniform(const Box& b, std::span<const size_t> counts) {
    if (counts.size() != b.dim()) throw std::invalid_argument("split_uniform: counts rank mismatch");
    size_t total = 1;
    for (size_t k : counts) {
        if (k == 0) throw std::invalid_argument("split_uniform: zero count");
        total *= k;
    }
    // cell edges; the outermost edges reuse the box endpoints bitwise so the
    // tiling round-trips exactly through hull()
    std::vector<std::vector<double>> edges(b.dim());
    for (size_t d = 0; d < b.dim(); ++d) {
        const size_t k = counts[d];
        edges[d].resize(k + 1);
        for (size_t j = 0; j <= k; ++j) {
            if (j == 0)
                edges[d][j] = b.lo(d);
            else if (j == k)
                edges[d][j] = b.hi(d);
            else
                edges[d][j] =
                    b.lo(d) + (b.hi(d) - b.lo(d)) * (static_cast<double>(j) / static_cast<double>(k));
        }
    }
    std::vector<Box> cells;
    cells.reserve(total);
    std::vector<size_t> idx(b.dim(), 0);
    for (size_t c = 0; c < total; ++c) {
        std::vector<double> lo(b.dim()), hi(b.dim());
        for (size_t d = 0; d < b.dim(); ++d) {
            lo[d] = edges[d][idx[d]];
            hi[d] = edges[d][idx[d] + 1];
        }
        cells.emplace_back(std::move(lo), std::move(hi));
        for (size_t d = b.dim(); d-- > 0;) {
            if (++idx[d] < counts[d]) break;
            idx[d] = 0;
        }
    }
    return cells;
}

Box concat(const Box& a, const Box& b) {
    std::vector<double> lo = a.lower(), hi = a.upper();
    lo.insert(lo.end(), b.lower().begin(), b.lower().end());
    hi.insert(hi.end(), b.upper().begin(), b.upper().end());
    return Box(std::move(lo), std::move(hi));
}

Box concat(const Box& a, const Box& b, const Box& c) { return concat(concat(a, b), c); }

}  // namespace ival
