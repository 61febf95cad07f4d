#ifndef IVAL_RNG_HPP
#define IVAL_RNG_HPP

#include <algorithm>
#include <cstdint>

namespace ival {

// SplitMix64 (Steele/Lea/Flood public-domain algorithm). Used for every
// seeded draw in the library so sampled results are reproducible across
// platforms and standard-library versions.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1) using the top 53 bits
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi]; clamped so rounding cannot escape the range
    double uniform(double lo, double hi) {
        double v = lo + (hi - lo) * uniform01();
        return std::min(std::max(v, lo), hi);
    }

    // derive an independent stream, e.g. one per trajectory or partition cell
    static SplitMix64 substream(uint64_t seed, uint64_t index) {
        SplitMix64 r(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
        r.next();
        return r;
    }
};

}  // namespace ival

#endif
