#include <cctype>
#include <memory>
#include <numbers>

#include "ival/expr.hpp"

namespace ival {

namespace {

struct Node {
    enum class Kind { num, var, add, sub, mul, div, pow, call };
    Kind kind;
    double value = 0.0;       // num
    size_t var_index = 0;     // var
    int exponent = 0;         // pow
    std::string func;         // call
    std::unique_ptr<Node> a, b;
};

using NodePtr = std::unique_ptr<Node>;

NodePtr make_num(double v) {
    auto n = std::make_unique<Node>();
    n->kind = Node::Kind::num;
    n->value = v;
    return n;
}

struct Parser {
    std::string_view src;
    size_t pos = 0;
    const std::vector<std::string>& vars;

    explicit Parser(std::string_view s, const std::vector<std::string>& v) : src(s), vars(v) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("expression parse error at position " + std::to_string(pos) +
                                    ": " + msg);
    }

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    NodePtr parse() {
        NodePtr e = parse_expr();
        skip_ws();
        if (pos != src.size()) fail("trailing characters");
        return e;
    }

    NodePtr parse_expr() {
        NodePtr left = parse_term();
        while (true) {
            if (eat('+')) {
                auto n = std::make_unique<Node>();
                n->kind = Node::Kind::add;
                n->a = std::move(left);
                n->b = parse_term();
                left = std::move(n);
            } else if (eat('-')) {
                auto n = std::make_unique<Node>();
                n->kind = Node::Kind::sub;
                n->a = std::move(left);
                n->b = parse_term();
                left = std::move(n);
            } else {
                return left;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr left = parse_unary();
        while (true) {
            if (eat('*')) {
                auto n = std::make_unique<Node>();
                n->kind = Node::Kind::mul;
                n->a = std::move(left);
                n->b = parse_unary();
                left = std::move(n);
            } else if (eat('/')) {
                auto n = std::make_unique<Node>();
                n->kind = Node::Kind::div;
                n->a = std::move(left);
                n->b = parse_unary();
                left = std::move(n);
            } else {
                return left;
            }
        }
    }

    NodePtr parse_unary() {
        if (eat('-')) {
            NodePtr inner = parse_unary();
            if (inner->kind == Node::Kind::num) return make_num(-inner->value);
            // -e lowered as (-1)*e
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::mul;
            n->a = make_num(-1.0);
            n->b = std::move(inner);
            return n;
        }
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (eat('^')) {
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::pow;
            n->a = std::move(base);
            n->exponent = parse_int();
            return n;
        }
        return base;
    }

    int parse_int() {
        skip_ws();
        size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos == start) fail("expected a positive integer exponent");
        int n = std::stoi(std::string(src.substr(start, pos - start)));
        if (n < 1) fail("exponent must be >= 1");
        return n;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of input");
        const char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        if (eat('(')) {
            NodePtr e = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        const char* begin = src.data() + pos;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) fail("bad number");
        pos += static_cast<size_t>(end - begin);
        return make_num(v);
    }

    NodePtr parse_ident() {
        size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        const std::string name(src.substr(start, pos - start));
        if (name == "pi") return make_num(std::numbers::pi);
        static const char* funcs[] = {"sin", "cos", "tan", "exp", "log", "arctan", "atan", "sqrt"};
        for (const char* f : funcs) {
            if (name == f) {
                if (!eat('(')) fail("expected '(' after " + name);
                auto n = std::make_unique<Node>();
                n->kind = Node::Kind::call;
                n->func = (name == "atan") ? "arctan" : name;
                n->a = parse_expr();
                if (!eat(')')) fail("expected ')'");
                return n;
            }
        }
        if (name == "pow") {
            if (!eat('(')) fail("expected '(' after pow");
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::pow;
            n->a = parse_expr();
            if (!eat(',')) fail("expected ',' in pow");
            n->exponent = parse_int();
            if (!eat(')')) fail("expected ')'");
            return n;
        }
        for (size_t i = 0; i < vars.size(); ++i) {
            if (vars[i] == name) {
                auto n = std::make_unique<Node>();
                n->kind = Node::Kind::var;
                n->var_index = i;
                return n;
            }
        }
        fail("unknown identifier '" + name + "'");
    }
};

// Lowering appends one stage per operation. Literal constants combined with
// a non-literal operand map onto the dedicated add_const/scale operations;
// everything else goes through the generic interval ops. Identical subtrees
// are lowered independently so the written decomposition is preserved.
size_t lower(const Node& n, RecipeBuilder& rb) {
    switch (n.kind) {
        case Node::Kind::num: return rb.constant(n.value);
        case Node::Kind::var: return rb.input(n.var_index);
        case Node::Kind::add:
            if (n.b->kind == Node::Kind::num) return rb.add_const(lower(*n.a, rb), n.b->value);
            if (n.a->kind == Node::Kind::num) return rb.add_const(lower(*n.b, rb), n.a->value);
            return rb.add(lower(*n.a, rb), lower(*n.b, rb));
        case Node::Kind::sub:
            if (n.b->kind == Node::Kind::num) return rb.add_const(lower(*n.a, rb), -n.b->value);
            return rb.sub(lower(*n.a, rb), lower(*n.b, rb));
        case Node::Kind::mul:
            if (n.a->kind == Node::Kind::num) return rb.scale(n.a->value, lower(*n.b, rb));
            if (n.b->kind == Node::Kind::num) return rb.scale(n.b->value, lower(*n.a, rb));
            return rb.mul(lower(*n.a, rb), lower(*n.b, rb));
        case Node::Kind::div: return rb.div(lower(*n.a, rb), lower(*n.b, rb));
        case Node::Kind::pow: return rb.pow_int(lower(*n.a, rb), n.exponent);
        case Node::Kind::call: {
            const size_t a = lower(*n.a, rb);
            if (n.func == "sin") return rb.sin(a);
            if (n.func == "cos") return rb.cos(a);
            if (n.func == "tan") return rb.tan(a);
            if (n.func == "exp") return rb.exp(a);
            if (n.func == "log") return rb.log(a);
            if (n.func == "arctan") return rb.arctan(a);
            if (n.func == "sqrt") return rb.sqrt(a);
            throw std::invalid_argument("unknown function " + n.func);
        }
    }
    throw std::logic_error("lower: unreachable");
}

}  // namespace

ComposedFunction compile_expressions(const std::vector<std::string>& exprs,
                                     const std::vector<std::string>& vars) {
    if (exprs.empty()) throw std::invalid_argument("compile_expressions: no expressions");
    RecipeBuilder rb(vars.size());
    std::vector<size_t> outputs;
    outputs.reserve(exprs.size());
    for (const std::string& e : exprs) {
        Parser p(e, vars);
        const NodePtr ast = p.parse();
        outputs.push_back(lower(*ast, rb));
    }
    return rb.build(std::move(outputs));
}

}  // namespace ival
