#include "ival/interval.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace ival {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string to_string(const Interval& a) {
    return "[" + format_double(a.lo) + ", " + format_double(a.hi) + "]";
}

namespace {

void skip_ws(std::string_view& s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
}

double parse_endpoint(std::string_view& s) {
    skip_ws(s);
    if (s.empty()) throw std::invalid_argument("parse_interval: missing endpoint");
    const char* begin = s.data();
    char* end = nullptr;
    double v = std::strtod(begin, &end);  // strtod accepts inf/-inf tokens
    if (end == begin) throw std::invalid_argument("parse_interval: bad endpoint");
    s.remove_prefix(static_cast<size_t>(end - begin));
    return v;
}

}  // namespace

Interval parse_interval(std::string_view text) {
    std::string_view s = text;
    skip_ws(s);
    if (s.empty() || s.front() != '[') throw std::invalid_argument("parse_interval: expected '['");
    s.remove_prefix(1);
    double lo = parse_endpoint(s);
    skip_ws(s);
    if (s.empty() || s.front() != ',') throw std::invalid_argument("parse_interval: expected ','");
    s.remove_prefix(1);
    double hi = parse_endpoint(s);
    skip_ws(s);
    if (s.empty() || s.front() != ']') throw std::invalid_argument("parse_interval: expected ']'");
    s.remove_prefix(1);
    skip_ws(s);
    if (!s.empty()) throw std::invalid_argument("parse_interval: trailing characters");
    return Interval(lo, hi);
}

}  // namespace ival
