#include "ival/expr.hpp"

#include "ival/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ival {

ComposedFunction& ComposedFunction::append(Stage s) {
    if (!s.point || !s.box) throw std::invalid_argument("Stage: missing point or box map");
    if (s.in_arity != output_arity())
        throw std::invalid_argument("Stage: arity does not chain (expected " +
                                    std::to_string(output_arity()) + ", got " +
                                    std::to_string(s.in_arity) + ")");
    stages_.push_back(std::move(s));
    return *this;
}

bool ComposedFunction::monotone() const {
    for (const Stage& s : stages_)
        if (!s.monotone) return false;
    return true;
}

std::vector<double> point_evaluate(const ComposedFunction& f, std::span<const double> x) {
    if (x.size() != f.input_arity())
        throw std::invalid_argument("point_evaluate: input arity mismatch");
    std::vector<double> v(x.begin(), x.end());
    for (size_t i = 0; i < f.stages().size(); ++i) {
        const Stage& s = f.stages()[i];
        try {
            v = s.point(v);
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(i, s.name, e.what());
        }
        if (v.size() != s.out_arity) throw StageError(i, s.name, "wrong output arity");
    }
    return v;
}

Box natural_evaluate(const ComposedFunction& f, const Box& x) {
    if (x.dim() != f.input_arity())
        throw std::invalid_argument("natural_evaluate: input arity mismatch");
    Box b = x;
    for (size_t i = 0; i < f.stages().size(); ++i) {
        const Stage& s = f.stages()[i];
        try {
            b = s.box(b);
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(i, s.name, e.what());
        }
        if (b.dim() != s.out_arity) throw StageError(i, s.name, "wrong output arity");
    }
    return b;
}

Box sample_oracle(const ComposedFunction& f, const Box& x, size_t n_samples, uint64_t seed) {
    if (n_samples == 0) throw std::invalid_argument("sample_oracle: n_samples must be >= 1");
    SplitMix64 rng(seed);
    std::vector<double> pt(x.dim());
    std::vector<double> lo, hi;
    for (size_t s = 0; s < n_samples; ++s) {
        for (size_t i = 0; i < x.dim(); ++i) pt[i] = rng.uniform(x.lo(i), x.hi(i));
        const std::vector<double> y = point_evaluate(f, pt);
        if (s == 0) {
            lo = y;
            hi = y;
        } else {
            for (size_t i = 0; i < y.size(); ++i) {
                lo[i] = std::min(lo[i], y[i]);
                hi[i] = std::max(hi[i], y[i]);
            }
        }
    }
    return Box(std::move(lo), std::move(hi));
}

PartitionedResult partitioned_evaluate(const ComposedFunction& f, const Box& x,
                                       std::span<const size_t> counts) {
    const std::vector<Box> cells = split_uniform(x, counts);
    PartitionedResult out;
    out.cell_results.resize(cells.size());
    const long n = static_cast<long>(cells.size());
    // exceptions cannot cross the parallel region; capture per cell and
    // rethrow the lowest-index one for a deterministic error
    std::vector<std::exception_ptr> errors(cells.size());
#pragma omp parallel for schedule(static)
    for (long c = 0; c < n; ++c) {
        const auto i = static_cast<size_t>(c);
        try {
            out.cell_results[i] = natural_evaluate(f, cells[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
    out.hull = hull(out.cell_results);
    return out;
}

RecipeBuilder::RecipeBuilder(size_t n_inputs) : fn_(n_inputs), tape_(n_inputs) {}

size_t RecipeBuilder::input(size_t i) const {
    if (i >= fn_.input_arity()) throw std::out_of_range("RecipeBuilder: input index");
    return i;
}

namespace {

std::string slot_name(size_t s) { return "#" + std::to_string(s); }

}  // namespace

size_t RecipeBuilder::append_unary(const std::string& name, size_t a, double (*pf)(double),
                                   Interval (*bf)(const Interval&)) {
    if (a >= tape_) throw std::out_of_range("RecipeBuilder: slot out of range");
    const size_t in = tape_;
    Stage s;
    s.name = name + "(" + slot_name(a) + ")";
    s.in_arity = in;
    s.out_arity = in + 1;
    s.point = [a, pf](std::span<const double> v) {
        std::vector<double> out(v.begin(), v.end());
        out.push_back(pf(v[a]));
        return out;
    };
    s.box = [a, bf](const Box& b) {
        const Interval r = bf(b.interval(a));
        std::vector<double> lo = b.lower(), hi = b.upper();
        lo.push_back(r.lo);
        hi.push_back(r.hi);
        return Box(std::move(lo), std::move(hi));
    };
    fn_.append(std::move(s));
    return tape_++;
}

size_t RecipeBuilder::append_binary(const std::string& name, size_t a, size_t b,
                                    double (*pf)(double, double),
                                    Interval (*bf)(const Interval&, const Interval&)) {
    if (a >= tape_ || b >= tape_) throw std::out_of_range("RecipeBuilder: slot out of range");
    const size_t in = tape_;
    Stage s;
    s.name = name + "(" + slot_name(a) + "," + slot_name(b) + ")";
    s.in_arity = in;
    s.out_arity = in + 1;
    s.point = [a, b, pf](std::span<const double> v) {
        std::vector<double> out(v.begin(), v.end());
        out.push_back(pf(v[a], v[b]));
        return out;
    };
    s.box = [a, b, bf](const Box& bx) {
        const Interval r = bf(bx.interval(a), bx.interval(b));
        std::vector<double> lo = bx.lower(), hi = bx.upper();
        lo.push_back(r.lo);
        hi.push_back(r.hi);
        return Box(std::move(lo), std::move(hi));
    };
    fn_.append(std::move(s));
    return tape_++;
}

size_t RecipeBuilder::constant(double c) {
    const size_t in = tape_;
    Stage s;
    s.name = "const(" + format_double(c) + ")";
    s.in_arity = in;
    s.out_arity = in + 1;
    s.point = [c](std::span<const double> v) {
        std::vector<double> out(v.begin(), v.end());
        out.push_back(c);
        return out;
    };
    s.box = [c](const Box& b) {
        std::vector<double> lo = b.lower(), hi = b.upper();
        lo.push_back(c);
        hi.push_back(c);
        return Box(std::move(lo), std::move(hi));
    };
    fn_.append(std::move(s));
    return tape_++;
}

size_t RecipeBuilder::add(size_t a, size_t b) {
    return append_binary(
        "add", a, b, [](double x, double y) { return x + y; },
        static_cast<Interval (*)(const Interval&, const Interval&)>(&ival::add));
}

size_t RecipeBuilder::sub(size_t a, size_t b) {
    return append_binary(
        "sub", a, b, [](double x, double y) { return x - y; },
        static_cast<Interval (*)(const Interval&, const Interval&)>(&ival::sub));
}

size_t RecipeBuilder::mul(size_t a, size_t b) {
    return append_binary(
        "mul", a, b, [](double x, double y) { return x * y; },
        static_cast<Interval (*)(const Interval&, const Interval&)>(&ival::mul));
}

size_t RecipeBuilder::recip(size_t a) {
    return append_unary(
        "recip", a, [](double x) { return 1.0 / x; },
        static_cast<Interval (*)(const Interval&)>(&ival::recip));
}

size_t RecipeBuilder::div(size_t a, size_t b) { return mul(a, recip(b)); }

size_t RecipeBuilder::scale(double c, size_t a) {
    if (a >= tape_) throw std::out_of_range("RecipeBuilder: slot out of range");
    const size_t in = tape_;
    Stage s;
    s.name = "scale(" + format_double(c) + "," + slot_name(a) + ")";
    s.in_arity = in;
    s.out_arity = in + 1;
    s.point = [a, c](std::span<const double> v) {
        std::vector<double> out(v.begin(), v.end());
        out.push_back(c * v[a]);
        return out;
    };
    s.box = [a, c](const Box& b) {
        const Interval r = ival::scale(c, b.interval(a));
        std::vector<double> lo = b.lower(), hi = b.upper();
        lo.push_back(r.lo);
        hi.push_back(r.hi);
        return Box(std::move(lo), std::move(hi));
    };
    fn_.append(std::move(s));
    return tape_++;
}

size_t RecipeBuilder::add_const(size_t a, double c) {
    if (a >= tape_) throw std::out_of_range("RecipeBuilder: slot out of range");
    const size_t in = tape_;
    Stage s;
    s.name = "add_const(" + slot_name(a) + "," + format_double(c) + ")";
    s.in_arity = in;
    s.out_arity = in + 1;
    s.point = [a, c](std::span<const double> v) {
        std::vector<double> out(v.begin(), v.end());
        out.push_back(v[a] + c);
        return out;
    };
    s.box = [a, c](const Box& b) {
        const Interval r = ival::add_const(b.interval(a), c);
        std::vector<double> lo = b.lower(), hi = b.upper();
        lo.push_back(r.lo);
        hi.push_back(r.hi);
        return Box(std::move(lo), std::move(hi));
    };
    fn_.append(std::move(s));
    return tape_++;
}

size_t RecipeBuilder::pow_int(size_t a, int n) {
    if (a >= tape_) throw std::out_of_range("RecipeBuilder: slot out of range");
    const size_t in = tape_;
    Stage s;
    s.name = "pow(" + slot_name(a) + "," + std::to_string(n) + ")";
    s.in_arity = in;
    s.out_arity = in + 1;
    s.point = [a, n](std::span<const double> v) {
        std::vector<double> out(v.begin(), v.end());
        out.push_back(detail::powi(v[a], n));
        return out;
    };
    s.box = [a, n](const Box& b) {
        const Interval r = ival::pow_int(b.interval(a), n);
        std::vector<double> lo = b.lower(), hi = b.upper();
        lo.push_back(r.lo);
        hi.push_back(r.hi);
        return Box(std::move(lo), std::move(hi));
    };
    fn_.append(std::move(s));
    return tape_++;
}

size_t RecipeBuilder::sin(size_t a) {
    return append_unary(
        "sin", a, [](double x) { return std::sin(x); },
        static_cast<Interval (*)(const Interval&)>(&ival::sin_incl));
}

size_t RecipeBuilder::cos(size_t a) {
    return append_unary(
        "cos", a, [](double x) { return std::cos(x); },
        static_cast<Interval (*)(const Interval&)>(&ival::cos_incl));
}

size_t RecipeBuilder::tan(size_t a) {
    return append_unary(
        "tan", a, [](double x) { return std::tan(x); },
        static_cast<Interval (*)(const Interval&)>(&ival::tan_incl));
}

size_t RecipeBuilder::exp(size_t a) {
    return append_unary(
        "exp", a, [](double x) { return std::exp(x); },
        static_cast<Interval (*)(const Interval&)>(&ival::exp));
}

size_t RecipeBuilder::log(size_t a) {
    return append_unary(
        "log", a,
        [](double x) {
            if (!(x > 0.0)) throw std::domain_error("log: requires x > 0");
            return std::log(x);
        },
        static_cast<Interval (*)(const Interval&)>(&ival::log));
}

size_t RecipeBuilder::arctan(size_t a) {
    return append_unary(
        "arctan", a, [](double x) { return std::atan(x); },
        static_cast<Interval (*)(const Interval&)>(&ival::arctan));
}

size_t RecipeBuilder::sqrt(size_t a) {
    return append_unary(
        "sqrt", a,
        [](double x) {
            if (!(x >= 0.0)) throw std::domain_error("sqrt: requires x >= 0");
            return std::sqrt(x);
        },
        static_cast<Interval (*)(const Interval&)>(&ival::sqrt));
}

size_t RecipeBuilder::require_finite(size_t a, const std::string& what) {
    if (a >= tape_) throw std::out_of_range("RecipeBuilder: slot out of range");
    const size_t in = tape_;
    Stage s;
    s.name = "finite_guard(" + what + ")";
    s.in_arity = in;
    s.out_arity = in;
    s.point = [](std::span<const double> v) { return std::vector<double>(v.begin(), v.end()); };
    s.box = [a, what](const Box& b) {
        if (!std::isfinite(b.lo(a)) || !std::isfinite(b.hi(a)))
            throw std::domain_error(what + ": interval hit a pole");
        return b;
    };
    fn_.append(std::move(s));
    return a;
}

ComposedFunction RecipeBuilder::build(std::vector<size_t> outputs) {
    if (outputs.empty()) throw std::invalid_argument("RecipeBuilder: no outputs selected");
    for (size_t s : outputs)
        if (s >= tape_) throw std::out_of_range("RecipeBuilder: output slot out of range");
    const size_t in = tape_;
    Stage sel;
    sel.name = "select";
    sel.in_arity = in;
    sel.out_arity = outputs.size();
    sel.point = [outputs](std::span<const double> v) {
        std::vector<double> out(outputs.size());
        for (size_t i = 0; i < outputs.size(); ++i) out[i] = v[outputs[i]];
        return out;
    };
    sel.box = [outputs](const Box& b) {
        std::vector<double> lo(outputs.size()), hi(outputs.size());
        for (size_t i = 0; i < outputs.size(); ++i) {
            lo[i] = b.lo(outputs[i]);
            hi[i] = b.hi(outputs[i]);
        }
        return Box(std::move(lo), std::move(hi));
    };
    ComposedFunction out = std::move(fn_);
    out.append(std::move(sel));
    return out;
}

}  // namespace ival
