// Deterministic random-recipe generator shared by the unit and acceptance
// suites. Recipes are built from the monotone elementary stages; candidates
// whose interval evaluation leaves the domain of a stage (or goes non-finite)
// are rejected and regenerated.
#ifndef IVAL_TESTS_RECIPE_FUZZ_HPP
#define IVAL_TESTS_RECIPE_FUZZ_HPP

#include <optional>

#include "ival/expr.hpp"
#include "ival/rng.hpp"

namespace recipe_fuzz {

struct Case {
    ival::ComposedFunction fn;
    ival::Box domain;
};

inline std::optional<Case> try_generate(ival::SplitMix64& rng, size_t max_depth) {
    const size_t n_inputs = 1 + rng.next() % 3;
    std::vector<double> lo(n_inputs), hi(n_inputs);
    for (size_t i = 0; i < n_inputs; ++i) {
        const double c = rng.uniform(-2.0, 2.0);
        const double w = rng.uniform(0.0, 2.0);
        lo[i] = c - 0.5 * w;
        hi[i] = c + 0.5 * w;
    }
    ival::Box domain(lo, hi);

    ival::RecipeBuilder rb(n_inputs);
    const size_t depth = 1 + rng.next() % max_depth;
    size_t last = rng.next() % n_inputs;
    for (size_t d = 0; d < depth; ++d) {
        const size_t pick = rng.next() % rb.tape_size();
        switch (rng.next() % 12) {
            case 0: last = rb.add(last, pick); break;
            case 1: last = rb.sub(last, pick); break;
            case 2: last = rb.mul(last, pick); break;
            case 3: last = rb.scale(rng.uniform(-2.0, 2.0), last); break;
            case 4: last = rb.add_const(last, rng.uniform(-2.0, 2.0)); break;
            case 5: last = rb.sin(last); break;
            case 6: last = rb.cos(last); break;
            case 7: last = rb.arctan(last); break;
            case 8: last = rb.pow_int(last, 2 + static_cast<int>(rng.next() % 2)); break;
            case 9: last = rb.exp(rb.scale(0.25, last)); break;
            case 10: last = rb.sqrt(rb.exp(rb.scale(0.25, last))); break;
            case 11: last = rb.recip(rb.add_const(rb.pow_int(last, 2), 1.0)); break;
        }
    }
    ival::ComposedFunction fn = rb.build({last});

    // reject domains where the interval path blows up
    try {
        const ival::Box out = ival::natural_evaluate(fn, domain);
        if (!out.finite()) return std::nullopt;
        for (size_t i = 0; i < out.dim(); ++i)
            if (std::fabs(out.lo(i)) > 1e9 || std::fabs(out.hi(i)) > 1e9) return std::nullopt;
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return Case{std::move(fn), std::move(domain)};
}

inline Case generate(ival::SplitMix64& rng, size_t max_depth = 6) {
    for (int attempt = 0; attempt < 256; ++attempt) {
        auto c = try_generate(rng, max_depth);
        if (c) return std::move(*c);
    }
    throw std::runtime_error("recipe_fuzz: generation kept rejecting");
}

// a random box nested inside b (per-coordinate sub-range)
inline ival::Box nested_box(ival::SplitMix64& rng, const ival::Box& b) {
    std::vector<double> lo(b.dim()), hi(b.dim());
    for (size_t i = 0; i < b.dim(); ++i) {
        const double a = rng.uniform(b.lo(i), b.hi(i));
        const double c = rng.uniform(b.lo(i), b.hi(i));
        lo[i] = std::min(a, c);
        hi[i] = std::max(a, c);
    }
    return ival::Box(std::move(lo), std::move(hi));
}

}  // namespace recipe_fuzz

#endif
