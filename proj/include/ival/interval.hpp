#ifndef IVAL_INTERVAL_HPP
#define IVAL_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ival {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed interval [lo, hi] with extended-real endpoints. Endpoints are
// nearest-rounded doubles; no directed rounding. Infinite endpoints arise
// only from reciprocals through zero and tangents through a pole; use
// inflate() for an outward-rounded safety margin.
struct Interval {
    double lo;
    double hi;

    Interval() : lo(0.0), hi(0.0) {}
    explicit Interval(double v) : lo(v), hi(v) {
        if (std::isnan(v)) throw std::invalid_argument("Interval: NaN endpoint");
    }
    Interval(double l, double h) : lo(l), hi(h) {
        // also rejects NaN endpoints (comparison fails)
        if (!(l <= h))
            throw std::invalid_argument("Interval: lo must be <= hi");
    }

    bool degenerate() const { return lo == hi; }
    bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
};

inline bool contains(const Interval& a, double x) { return a.lo <= x && x <= a.hi; }

// a subset of b
inline bool subset(const Interval& a, const Interval& b) { return b.lo <= a.lo && a.hi <= b.hi; }

inline double width(const Interval& a) {
    if (!a.finite()) throw std::domain_error("width: infinite endpoint");
    return a.hi - a.lo;
}

inline double midpoint(const Interval& a) {
    if (!a.finite()) throw std::domain_error("midpoint: infinite endpoint");
    return 0.5 * (a.lo + a.hi);
}

// [a]+[b] = [al+bl, ah+bh]
inline Interval add(const Interval& a, const Interval& b) {
    return Interval(a.lo + b.lo, a.hi + b.hi);
}

// [a]-[b] = [al-bh, ah-bl]
inline Interval sub(const Interval& a, const Interval& b) {
    return Interval(a.lo - b.hi, a.hi - b.lo);
}

// [a]+c
inline Interval add_const(const Interval& a, double c) {
    return Interval(a.lo + c, a.hi + c);
}

namespace detail {
// endpoint product with the set convention 0 * inf = 0
inline double eprod(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return a * b;
}
}  // namespace detail

// c*[a]; endpoints flip for c < 0
inline Interval scale(double c, const Interval& a) {
    if (c >= 0.0) return Interval(detail::eprod(c, a.lo), detail::eprod(c, a.hi));
    return Interval(detail::eprod(c, a.hi), detail::eprod(c, a.lo));
}

// [a]*[b] = [min, max] of the four endpoint products
inline Interval mul(const Interval& a, const Interval& b) {
    const double p1 = detail::eprod(a.lo, b.lo);
    const double p2 = detail::eprod(a.lo, b.hi);
    const double p3 = detail::eprod(a.hi, b.lo);
    const double p4 = detail::eprod(a.hi, b.hi);
    return Interval(std::min(std::min(p1, p2), std::min(p3, p4)),
                    std::max(std::max(p1, p2), std::max(p3, p4)));
}

// 1/[a]: [1/ah, 1/al] when 0 is not in [a], otherwise [-inf, inf]
inline Interval recip(const Interval& a) {
    if (a.lo <= 0.0 && 0.0 <= a.hi) return Interval(-kInf, kInf);
    return Interval(1.0 / a.hi, 1.0 / a.lo);
}

namespace detail {
inline double powi(double x, int n) { return std::pow(x, static_cast<double>(n)); }
}  // namespace detail

// [a]^n, n >= 1: monotone for n odd; for n even the minimum is 0 when
// 0 is in [a], else at the endpoint closer to zero
inline Interval pow_int(const Interval& a, int n) {
    if (n < 1) throw std::invalid_argument("pow_int: exponent must be >= 1");
    const double pl = detail::powi(a.lo, n);
    const double ph = detail::powi(a.hi, n);
    if (n % 2 == 1) return Interval(pl, ph);
    if (a.lo <= 0.0 && 0.0 <= a.hi) return Interval(0.0, std::max(pl, ph));
    return Interval(std::min(pl, ph), std::max(pl, ph));
}

inline Interval exp(const Interval& a) { return Interval(std::exp(a.lo), std::exp(a.hi)); }

inline Interval log(const Interval& a) {
    if (!(a.lo > 0.0)) throw std::domain_error("log: requires lo > 0");
    return Interval(std::log(a.lo), std::log(a.hi));
}

inline Interval arctan(const Interval& a) { return Interval(std::atan(a.lo), std::atan(a.hi)); }

inline Interval sqrt(const Interval& a) {
    if (!(a.lo >= 0.0)) throw std::domain_error("sqrt: requires lo >= 0");
    return Interval(std::sqrt(a.lo), std::sqrt(a.hi));
}

enum class MonotoneFn { exp, log, arctan, sqrt };

inline Interval monotone_apply(MonotoneFn f, const Interval& a) {
    switch (f) {
        case MonotoneFn::exp: return exp(a);
        case MonotoneFn::log: return log(a);
        case MonotoneFn::arctan: return arctan(a);
        case MonotoneFn::sqrt: return sqrt(a);
    }
    throw std::invalid_argument("monotone_apply: unknown function tag");
}

// sin over [a]: the endpoint sines, widened to -1/1 whenever a minimum
// (3pi/2 mod 2pi) or maximum (pi/2 mod 2pi) lies inside. The lower endpoint
// is reduced into [0, 2pi), so candidate critical points live in [0, 4pi).
inline Interval sin_incl(const Interval& a) {
    if (!a.finite()) throw std::domain_error("sin_incl: finite endpoints required");
    constexpr double pi = std::numbers::pi;
    const double two_pi = 2.0 * pi;
    const double w = a.hi - a.lo;
    if (w >= two_pi) return Interval(-1.0, 1.0);

    double r = std::fmod(a.lo, two_pi);
    if (r < 0.0) r += two_pi;
    const double rh = r + w;

    const double max1 = 0.5 * pi, max2 = 2.5 * pi;
    const double min1 = 1.5 * pi, min2 = 3.5 * pi;
    const bool has_max = (r <= max1 && max1 <= rh) || (r <= max2 && max2 <= rh);
    const bool has_min = (r <= min1 && min1 <= rh) || (r <= min2 && min2 <= rh);

    const double sl = std::sin(a.lo);
    const double sh = std::sin(a.hi);
    return Interval(has_min ? -1.0 : std::min(sl, sh), has_max ? 1.0 : std::max(sl, sh));
}

// cos over [a]: same scheme as sin_incl with maxima at 2pi k and minima at
// pi + 2pi k. Equivalent to sin([a] + pi/2) in real arithmetic, but evaluated
// directly so the endpoints are exactly the cos images.
inline Interval cos_incl(const Interval& a) {
    if (!a.finite()) throw std::domain_error("cos_incl: finite endpoints required");
    constexpr double pi = std::numbers::pi;
    const double two_pi = 2.0 * pi;
    const double w = a.hi - a.lo;
    if (w >= two_pi) return Interval(-1.0, 1.0);

    double r = std::fmod(a.lo, two_pi);
    if (r < 0.0) r += two_pi;
    const double rh = r + w;

    const bool has_max = (r == 0.0) || (r <= two_pi && two_pi <= rh);
    const double min1 = pi, min2 = 3.0 * pi;
    const bool has_min = (r <= min1 && min1 <= rh) || (r <= min2 && min2 <= rh);

    const double cl = std::cos(a.lo);
    const double ch = std::cos(a.hi);
    return Interval(has_min ? -1.0 : std::min(cl, ch), has_max ? 1.0 : std::max(cl, ch));
}

// tan over [a]: [tan(al), tan(ah)] when no pole pi/2 + k*pi lies in [a],
// otherwise [-inf, inf]
inline Interval tan_incl(const Interval& a) {
    if (!a.finite()) throw std::domain_error("tan_incl: finite endpoints required");
    constexpr double pi = std::numbers::pi;
    constexpr double half_pi = 0.5 * std::numbers::pi;
    const double k = std::ceil((a.lo - half_pi) / pi);
    const double pole = half_pi + k * pi;  // first pole >= lo
    if (pole <= a.hi) return Interval(-kInf, kInf);
    return Interval(std::tan(a.lo), std::tan(a.hi));
}

// widen both endpoints outward by the given number of ulps
inline Interval inflate(const Interval& a, int ulps) {
    double lo = a.lo, hi = a.hi;
    for (int i = 0; i < ulps; ++i) {
        lo = std::nextafter(lo, -kInf);
        hi = std::nextafter(hi, kInf);
    }
    return Interval(lo, hi);
}

// operator sugar mirroring the named operations
inline Interval operator+(const Interval& a, const Interval& b) { return add(a, b); }
inline Interval operator-(const Interval& a, const Interval& b) { return sub(a, b); }
inline Interval operator*(const Interval& a, const Interval& b) { return mul(a, b); }
inline Interval operator*(double c, const Interval& a) { return scale(c, a); }
inline Interval operator+(const Interval& a, double c) { return add_const(a, c); }
inline bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }

// "[lo, hi]" with up to 17 significant digits; -inf/inf tokens
std::string to_string(const Interval& a);
Interval parse_interval(std::string_view text);

// %.17g rendering of a single endpoint (shared by the file writers)
std::string format_double(double v);

}  // namespace ival

#endif
