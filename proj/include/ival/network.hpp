#ifndef IVAL_NETWORK_HPP
#define IVAL_NETWORK_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ival/tensor.hpp"

namespace ival {

// thrown by localized_incl when the query box leaves the bound region;
// callers recover by falling back to interval bound propagation
struct LocalizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Activation { relu, identity };

struct Layer {
    size_t out_dim = 0;
    size_t in_dim = 0;
    std::vector<double> W;  // out_dim x in_dim, row-major
    std::vector<double> b;  // out_dim
    Activation act = Activation::identity;
};

// Fully connected feed-forward network. The final layer activation must be
// the identity; dimensions must chain.
class FeedForwardNetwork {
public:
    FeedForwardNetwork() = default;
    explicit FeedForwardNetwork(std::vector<Layer> layers);

    size_t input_dim() const { return layers_.front().in_dim; }
    size_t output_dim() const { return layers_.back().out_dim; }
    size_t depth() const { return layers_.size(); }
    const std::vector<Layer>& layers() const { return layers_; }

    std::vector<double> forward(std::span<const double> x) const;

private:
    std::vector<Layer> layers_;
};

// relu on an interval: [max(0, lo), max(0, hi)]
inline Interval relu_incl(const Interval& a) {
    return Interval(std::max(0.0, a.lo), std::max(0.0, a.hi));
}

// natural inclusion of the network: interval matmul + bias + elementwise
// relu inclusion per layer; monotone in the input box
Box ibp_bounds(const FeedForwardNetwork& net, const Box& x);

// Affine envelopes C_lower x + d_lower <= N(x) <= C_upper x + d_upper valid
// on `region`.
struct AffineBoundPair {
    size_t rows = 0, cols = 0;
    std::vector<double> C_lower, C_upper;  // rows x cols, row-major
    std::vector<double> d_lower, d_upper;  // rows
    Box region;
};

// Backward linear relaxation. Pre-activation boxes come from interval bound
// propagation; each unstable relu ([l,u] with l<0<u) is relaxed to the chord
// u(z-l)/(u-l) above and a zero-intercept line below whose slope is 0 when
// |l| >= u and 1 otherwise. Stable neurons stay exact.
AffineBoundPair crown_bounds(const FeedForwardNetwork& net, const Box& region);

// Monotone region-localized inclusion function built from the affine pair by
// the entrywise positive/negative part split. Requires x inside the region.
Box localized_incl(const AffineBoundPair& bounds, const Box& x);

FeedForwardNetwork load_network(const std::string& path);
void save_network(const FeedForwardNetwork& net, const std::string& path);
FeedForwardNetwork network_from_json(const std::string& text);
std::string network_to_json(const FeedForwardNetwork& net);

// Deterministic random relu network: weights and biases uniform in
// +-sqrt(6/(fan_in+fan_out)), drawn from SplitMix64(seed); the final layer is
// additionally multiplied by output_scale
FeedForwardNetwork random_network(std::span<const size_t> dims, uint64_t seed,
                                  double output_scale = 1.0);

}  // namespace ival

#endif
