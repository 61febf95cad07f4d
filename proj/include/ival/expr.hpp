#ifndef IVAL_EXPR_HPP
#define IVAL_EXPR_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ival/tensor.hpp"

namespace ival {

// error from inside a composed evaluation, tagged with the failing stage
struct StageError : std::runtime_error {
    size_t stage_index;
    std::string stage_name;
    StageError(size_t index, std::string name, const std::string& what)
        : std::runtime_error("stage " + std::to_string(index) + " (" + name + "): " + what),
          stage_index(index),
          stage_name(std::move(name)) {}
};

// One step e_j of a composition e_l o ... o e_1. Each stage evaluates both
// on real vectors and on boxes; the box map must be an inclusion function
// for the point map, and `monotone` declares whether it is a monotone one.
struct Stage {
    std::string name;
    bool monotone = true;
    size_t in_arity = 0;
    size_t out_arity = 0;
    std::function<std::vector<double>(std::span<const double>)> point;
    std::function<Box(const Box&)> box;
};

// A function given as an explicit composition of stages. Evaluating the box
// path stage by stage yields the natural inclusion function; the composite
// is monotone iff every stage is. Stages are evaluated exactly as supplied:
// the engine never rewrites or merges a decomposition.
class ComposedFunction {
public:
    ComposedFunction() = default;
    explicit ComposedFunction(size_t input_arity) : input_arity_(input_arity) {}

    ComposedFunction& append(Stage s);

    size_t input_arity() const { return input_arity_; }
    size_t output_arity() const {
        return stages_.empty() ? input_arity_ : stages_.back().out_arity;
    }
    bool monotone() const;
    const std::vector<Stage>& stages() const { return stages_; }

private:
    size_t input_arity_ = 0;
    std::vector<Stage> stages_;
};

std::vector<double> point_evaluate(const ComposedFunction& f, std::span<const double> x);
Box natural_evaluate(const ComposedFunction& f, const Box& x);

// hull of the point images of n uniform draws from x; a guaranteed
// under-approximation of the tight image, reproducible for a given seed
Box sample_oracle(const ComposedFunction& f, const Box& x, size_t n_samples, uint64_t seed);

struct PartitionedResult {
    std::vector<Box> cell_results;  // natural inclusion per cell, split_uniform order
    Box hull;
};

PartitionedResult partitioned_evaluate(const ComposedFunction& f, const Box& x,
                                       std::span<const size_t> counts);

// Tape-style construction of composed functions: every call appends one
// elementary-operation stage that extends the value tape by one slot.
// Returned slot ids feed later calls; build() appends the output selection.
class RecipeBuilder {
public:
    explicit RecipeBuilder(size_t n_inputs);

    size_t input(size_t i) const;
    size_t constant(double c);
    size_t add(size_t a, size_t b);
    size_t sub(size_t a, size_t b);
    size_t mul(size_t a, size_t b);
    size_t div(size_t a, size_t b);  // mul(a, recip(b))
    size_t recip(size_t a);
    size_t scale(double c, size_t a);
    size_t add_const(size_t a, double c);
    size_t pow_int(size_t a, int n);
    size_t sin(size_t a);
    size_t cos(size_t a);
    size_t tan(size_t a);
    size_t exp(size_t a);
    size_t log(size_t a);
    size_t arctan(size_t a);
    size_t sqrt(size_t a);

    // identity passthrough that rejects infinite endpoints in the slot; used
    // where a pole-encoding interval must fail loudly instead of flowing on
    size_t require_finite(size_t a, const std::string& what);

    size_t tape_size() const { return tape_; }
    ComposedFunction build(std::vector<size_t> outputs);

private:
    size_t append_unary(const std::string& name, size_t a,
                        double (*pf)(double), Interval (*bf)(const Interval&));
    size_t append_binary(const std::string& name, size_t a, size_t b,
                         double (*pf)(double, double),
                         Interval (*bf)(const Interval&, const Interval&));

    ComposedFunction fn_;
    size_t tape_;
};

// Compile textual expressions over named variables into a composed function
// (one stage per elementary operation, no sharing across expressions).
// Grammar: + - * / ^ with the usual precedence, parentheses, numeric
// literals, the constant pi, and sin cos tan exp log arctan sqrt pow(e, n).
// Exponents must be positive integer literals.
ComposedFunction compile_expressions(const std::vector<std::string>& exprs,
                                     const std::vector<std::string>& vars);

}  // namespace ival

#endif
