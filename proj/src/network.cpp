#include "ival/network.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ival/rng.hpp"

namespace ival {

FeedForwardNetwork::FeedForwardNetwork(std::vector<Layer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw std::invalid_argument("network: no layers");
    for (size_t i = 0; i < layers_.size(); ++i) {
        const Layer& L = layers_[i];
        if (L.out_dim == 0 || L.in_dim == 0)
            throw std::invalid_argument("network: zero dimension at layer " + std::to_string(i));
        if (L.W.size() != L.out_dim * L.in_dim)
            throw std::invalid_argument("network: weight size mismatch at layer " +
                                        std::to_string(i));
        if (L.b.size() != L.out_dim)
            throw std::invalid_argument("network: bias size mismatch at layer " +
                                        std::to_string(i));
        if (i > 0 && L.in_dim != layers_[i - 1].out_dim)
            throw std::invalid_argument("network: dimension chain broken at layer " +
                                        std::to_string(i));
    }
    if (layers_.back().act != Activation::identity)
        throw std::invalid_argument("network: final layer activation must be identity");
}

std::vector<double> FeedForwardNetwork::forward(std::span<const double> x) const {
    if (x.size() != input_dim()) throw std::invalid_argument("forward: input dimension mismatch");
    std::vector<double> a(x.begin(), x.end());
    for (const Layer& L : layers_) {
        std::vector<double> z(L.out_dim);
        for (size_t r = 0; r < L.out_dim; ++r) {
            // ascending-k accumulation, then bias: matches the interval
            // matmul + bias-add route bitwise on degenerate boxes
            double acc = 0.0;
            for (size_t k = 0; k < L.in_dim; ++k) acc = acc + L.W[r * L.in_dim + k] * a[k];
            z[r] = acc + L.b[r];
        }
        if (L.act == Activation::relu)
            for (double& v : z) v = std::max(0.0, v);
        a = std::move(z);
    }
    return a;
}

namespace {

IntervalTensor point_matrix(const std::vector<double>& W, size_t rows, size_t cols) {
    std::vector<Interval> data;
    data.reserve(W.size());
    for (double w : W) data.emplace_back(w, w);
    return IntervalTensor({rows, cols}, std::move(data));
}

// one layer of interval propagation, pre-activation
Box layer_preact(const Layer& L, const Box& in) {
    IntervalTensor col({in.dim(), 1});
    for (size_t i = 0; i < in.dim(); ++i) col[i] = in.interval(i);
    const IntervalTensor prod = matmul_interval(point_matrix(L.W, L.out_dim, L.in_dim), col);
    std::vector<double> lo(L.out_dim), hi(L.out_dim);
    for (size_t r = 0; r < L.out_dim; ++r) {
        const Interval z = add(prod[r], Interval(L.b[r]));
        lo[r] = z.lo;
        hi[r] = z.hi;
    }
    return Box(std::move(lo), std::move(hi));
}

Box apply_activation(const Layer& L, const Box& z) {
    if (L.act == Activation::identity) return z;
    std::vector<double> lo(z.dim()), hi(z.dim());
    for (size_t i = 0; i < z.dim(); ++i) {
        const Interval r = relu_incl(z.interval(i));
        lo[i] = r.lo;
        hi[i] = r.hi;
    }
    return Box(std::move(lo), std::move(hi));
}

}  // namespace

Box ibp_bounds(const FeedForwardNetwork& net, const Box& x) {
    if (x.dim() != net.input_dim())
        throw std::invalid_argument("ibp_bounds: input dimension mismatch");
    Box a = x;
    for (const Layer& L : net.layers()) a = apply_activation(L, layer_preact(L, a));
    return a;
}

namespace {

// plain row-major double matmul, ascending-k
std::vector<double> dmatmul(const std::vector<double>& A, size_t n, size_t p,
                            const std::vector<double>& B, size_t m) {
    std::vector<double> C(n * m, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) {
            double acc = 0.0;
            for (size_t k = 0; k < p; ++k) acc += A[i * p + k] * B[k * m + j];
            C[i * m + j] = acc;
        }
    return C;
}

std::vector<double> dmatvec(const std::vector<double>& A, size_t n, size_t p,
                            const std::vector<double>& v) {
    std::vector<double> out(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t k = 0; k < p; ++k) acc += A[i * p + k] * v[k];
        out[i] = acc;
    }
    return out;
}

struct ReluEnvelope {
    double slope_lo, slope_hi;  // zero intercept below, chord above
    double icept_hi;
};

ReluEnvelope relu_envelope(double l, double u) {
    if (u <= 0.0) return {0.0, 0.0, 0.0};
    if (l >= 0.0) return {1.0, 1.0, 0.0};
    const double s = u / (u - l);
    return {(-l >= u) ? 0.0 : 1.0, s, -s * l};
}

}  // namespace

AffineBoundPair crown_bounds(const FeedForwardNetwork& net, const Box& region) {
    if (region.dim() != net.input_dim())
        throw std::invalid_argument("crown_bounds: region dimension mismatch");
    if (!region.finite()) throw std::invalid_argument("crown_bounds: region must be finite");

    // forward pass: pre-activation boxes per layer
    const auto& layers = net.layers();
    std::vector<Box> preact(layers.size());
    Box a = region;
    for (size_t j = 0; j < layers.size(); ++j) {
        preact[j] = layer_preact(layers[j], a);
        a = apply_activation(layers[j], preact[j]);
    }

    // backward pass: AU/AL carry coefficients on the post-activation vector
    // of layer j-1 (the input when j == 0)
    const size_t K = layers.size();
    const size_t p = net.output_dim();
    std::vector<double> AU = layers[K - 1].W, AL = layers[K - 1].W;
    std::vector<double> dU = layers[K - 1].b, dL = layers[K - 1].b;
    size_t cols = layers[K - 1].in_dim;

    for (size_t j = K - 1; j-- > 0;) {
        const Layer& L = layers[j];
        if (L.act == Activation::relu) {
            std::vector<double> nAU(p * cols), nAL(p * cols);
            for (size_t q = 0; q < cols; ++q) {
                const ReluEnvelope env = relu_envelope(preact[j].lo(q), preact[j].hi(q));
                for (size_t r = 0; r < p; ++r) {
                    const double cu = AU[r * cols + q];
                    if (cu >= 0.0) {
                        nAU[r * cols + q] = cu * env.slope_hi;
                        dU[r] += cu * env.icept_hi;
                    } else {
                        nAU[r * cols + q] = cu * env.slope_lo;
                    }
                    const double cl = AL[r * cols + q];
                    if (cl >= 0.0) {
                        nAL[r * cols + q] = cl * env.slope_lo;
                    } else {
                        nAL[r * cols + q] = cl * env.slope_hi;
                        dL[r] += cl * env.icept_hi;
                    }
                }
            }
            AU = std::move(nAU);
            AL = std::move(nAL);
        }
        // substitute z_j = W_j a_{j-1} + b_j
        const std::vector<double> bU = dmatvec(AU, p, cols, L.b);
        const std::vector<double> bL = dmatvec(AL, p, cols, L.b);
        for (size_t r = 0; r < p; ++r) {
            dU[r] += bU[r];
            dL[r] += bL[r];
        }
        AU = dmatmul(AU, p, cols, L.W, L.in_dim);
        AL = dmatmul(AL, p, cols, L.W, L.in_dim);
        cols = L.in_dim;
    }

    AffineBoundPair out;
    out.rows = p;
    out.cols = net.input_dim();
    out.C_lower = std::move(AL);
    out.C_upper = std::move(AU);
    out.d_lower = std::move(dL);
    out.d_upper = std::move(dU);
    out.region = region;
    return out;
}

Box localized_incl(const AffineBoundPair& bounds, const Box& x) {
    if (x.dim() != bounds.cols) throw std::invalid_argument("localized_incl: dimension mismatch");
    if (!subset(x, bounds.region))
        throw LocalizationError("localized_incl: box is not inside the bound region");
    std::vector<double> lo(bounds.rows), hi(bounds.rows);
    for (size_t r = 0; r < bounds.rows; ++r) {
        double nl = 0.0, nh = 0.0;
        for (size_t c = 0; c < bounds.cols; ++c) {
            const double cl = bounds.C_lower[r * bounds.cols + c];
            nl += cl >= 0.0 ? cl * x.lo(c) : cl * x.hi(c);
            const double cu = bounds.C_upper[r * bounds.cols + c];
            nh += cu >= 0.0 ? cu * x.hi(c) : cu * x.lo(c);
        }
        lo[r] = nl + bounds.d_lower[r];
        hi[r] = nh + bounds.d_upper[r];
    }
    return Box(std::move(lo), std::move(hi));
}

namespace {

using nlohmann::json;

Activation act_from_string(const std::string& s, size_t layer) {
    if (s == "relu") return Activation::relu;
    if (s == "id") return Activation::identity;
    throw std::invalid_argument("network: unknown activation '" + s + "' at layer " +
                                std::to_string(layer));
}

}  // namespace

FeedForwardNetwork network_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (!j.contains("layers") || !j["layers"].is_array() || j["layers"].empty())
        throw std::invalid_argument("network: missing layers array");
    std::vector<Layer> layers;
    size_t idx = 0;
    for (const auto& lj : j["layers"]) {
        Layer L;
        const auto& Wj = lj.at("W");
        if (!Wj.is_array() || Wj.empty())
            throw std::invalid_argument("network: bad W at layer " + std::to_string(idx));
        L.out_dim = Wj.size();
        L.in_dim = Wj[0].size();
        for (const auto& row : Wj) {
            if (!row.is_array() || row.size() != L.in_dim)
                throw std::invalid_argument("network: ragged W at layer " + std::to_string(idx));
            for (const auto& v : row) L.W.push_back(v.get<double>());
        }
        L.b = lj.at("b").get<std::vector<double>>();
        L.act = act_from_string(lj.at("act").get<std::string>(), idx);
        layers.push_back(std::move(L));
        ++idx;
    }
    return FeedForwardNetwork(std::move(layers));
}

std::string network_to_json(const FeedForwardNetwork& net) {
    json j;
    j["layers"] = json::array();
    for (const Layer& L : net.layers()) {
        json lj;
        json W = json::array();
        for (size_t r = 0; r < L.out_dim; ++r) {
            json row = json::array();
            for (size_t c = 0; c < L.in_dim; ++c) row.push_back(L.W[r * L.in_dim + c]);
            W.push_back(std::move(row));
        }
        lj["W"] = std::move(W);
        lj["b"] = L.b;
        lj["act"] = L.act == Activation::relu ? "relu" : "id";
        j["layers"].push_back(std::move(lj));
    }
    return j.dump();
}

FeedForwardNetwork load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_network: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return network_from_json(ss.str());
}

void save_network(const FeedForwardNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("save_network: cannot open " + path);
    out << network_to_json(net) << "\n";
}

FeedForwardNetwork random_network(std::span<const size_t> dims, uint64_t seed,
                                  double output_scale) {
    if (dims.size() < 2) throw std::invalid_argument("random_network: need at least two dims");
    SplitMix64 rng(seed);
    std::vector<Layer> layers;
    for (size_t i = 0; i + 1 < dims.size(); ++i) {
        Layer L;
        L.in_dim = dims[i];
        L.out_dim = dims[i + 1];
        const bool last = (i + 2 == dims.size());
        const double r = std::sqrt(6.0 / static_cast<double>(L.in_dim + L.out_dim)) *
                         (last ? output_scale : 1.0);
        L.W.resize(L.out_dim * L.in_dim);
        L.b.resize(L.out_dim);
        for (double& w : L.W) w = rng.uniform(-r, r);
        for (double& b : L.b) b = rng.uniform(-r, r);
        L.act = last ? Activation::identity : Activation::relu;
        layers.push_back(std::move(L));
    }
    return FeedForwardNetwork(std::move(layers));
}

}  // namespace ival
