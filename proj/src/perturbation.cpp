#include "melosc/perturbation.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace melosc {
namespace expr {

enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Tanh };

struct Node {
    Kind kind;
    double value = 0.0; // Number
    char var = 0;       // Var: 't', 'x' or 'y'
    int exponent = 0;   // Pow
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

namespace {

NodePtr number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->value = v;
    return n;
}

NodePtr variable(char v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->var = v;
    return n;
}

NodePtr unary(Kind k, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    return n;
}

NodePtr binary(Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

NodePtr power(NodePtr base, int e) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->lhs = std::move(base);
    n->exponent = e;
    return n;
}

bool is_const(const NodePtr& n, double v) {
    return n->kind == Kind::Number && n->value == v;
}

// --- printing ---------------------------------------------------------

int precedence(Kind k) {
    switch (k) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    default: return 5;
    }
}

void print_node(const Node* n, std::string& out);

void print_child(const Node* child, int parent_prec, bool needs_paren_on_tie,
                 std::string& out) {
    const int cp = precedence(child->kind);
    const bool paren = cp < parent_prec || (cp == parent_prec && needs_paren_on_tie) ||
                       (child->kind == Kind::Number && child->value < 0.0);
    if (paren) out += '(';
    print_node(child, out);
    if (paren) out += ')';
}

void print_node(const Node* n, std::string& out) {
    switch (n->kind) {
    case Kind::Number: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", n->value);
        out += buf;
        break;
    }
    case Kind::Var:
        out += n->var;
        break;
    case Kind::Neg:
        out += '-';
        print_child(n->lhs.get(), precedence(Kind::Neg), false, out);
        break;
    case Kind::Add:
        print_child(n->lhs.get(), 1, false, out);
        out += " + ";
        print_child(n->rhs.get(), 1, true, out);
        break;
    case Kind::Sub:
        print_child(n->lhs.get(), 1, false, out);
        out += " - ";
        print_child(n->rhs.get(), 1, true, out);
        break;
    case Kind::Mul:
        print_child(n->lhs.get(), 2, false, out);
        out += "*";
        print_child(n->rhs.get(), 2, true, out);
        break;
    case Kind::Div:
        print_child(n->lhs.get(), 2, false, out);
        out += "/";
        print_child(n->rhs.get(), 2, true, out);
        break;
    case Kind::Pow:
        print_child(n->lhs.get(), 5, false, out);
        out += '^';
        out += std::to_string(n->exponent);
        break;
    case Kind::Sin: out += "sin("; print_node(n->lhs.get(), out); out += ')'; break;
    case Kind::Cos: out += "cos("; print_node(n->lhs.get(), out); out += ')'; break;
    case Kind::Exp: out += "exp("; print_node(n->lhs.get(), out); out += ')'; break;
    case Kind::Tanh: out += "tanh("; print_node(n->lhs.get(), out); out += ')'; break;
    }
}

std::string to_text(const Node* n) {
    std::string out;
    print_node(n, out);
    return out;
}

// --- evaluation -------------------------------------------------------

double int_pow(double base, int e) {
    if (e < 0) return 1.0 / int_pow(base, -e);
    double acc = 1.0;
    double b = base;
    for (unsigned n = static_cast<unsigned>(e); n != 0; n >>= 1) {
        if (n & 1u) acc *= b;
        b *= b;
    }
    return acc;
}

double eval_node(const Node* n, double t, double x, double y) {
    double r;
    switch (n->kind) {
    case Kind::Number: return n->value;
    case Kind::Var: return n->var == 't' ? t : (n->var == 'x' ? x : y);
    case Kind::Neg: return -eval_node(n->lhs.get(), t, x, y);
    case Kind::Add: r = eval_node(n->lhs.get(), t, x, y) + eval_node(n->rhs.get(), t, x, y); break;
    case Kind::Sub: r = eval_node(n->lhs.get(), t, x, y) - eval_node(n->rhs.get(), t, x, y); break;
    case Kind::Mul: r = eval_node(n->lhs.get(), t, x, y) * eval_node(n->rhs.get(), t, x, y); break;
    case Kind::Div: r = eval_node(n->lhs.get(), t, x, y) / eval_node(n->rhs.get(), t, x, y); break;
    case Kind::Pow: r = int_pow(eval_node(n->lhs.get(), t, x, y), n->exponent); break;
    case Kind::Sin: r = std::sin(eval_node(n->lhs.get(), t, x, y)); break;
    case Kind::Cos: r = std::cos(eval_node(n->lhs.get(), t, x, y)); break;
    case Kind::Exp: r = std::exp(eval_node(n->lhs.get(), t, x, y)); break;
    case Kind::Tanh: r = std::tanh(eval_node(n->lhs.get(), t, x, y)); break;
    default: r = std::numeric_limits<double>::quiet_NaN(); break;
    }
    if (!std::isfinite(r)) {
        throw EvalError("non-finite value in subexpression: " + to_text(n), to_text(n));
    }
    return r;
}

// --- differentiation (w.r.t. t) ----------------------------------------

NodePtr mk_add(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a->kind == Kind::Number && b->kind == Kind::Number) return number(a->value + b->value);
    return binary(Kind::Add, std::move(a), std::move(b));
}

NodePtr mk_sub(NodePtr a, NodePtr b) {
    if (is_const(b, 0.0)) return a;
    if (a->kind == Kind::Number && b->kind == Kind::Number) return number(a->value - b->value);
    if (is_const(a, 0.0)) return unary(Kind::Neg, std::move(b));
    return binary(Kind::Sub, std::move(a), std::move(b));
}

NodePtr mk_mul(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return number(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a->kind == Kind::Number && b->kind == Kind::Number) return number(a->value * b->value);
    return binary(Kind::Mul, std::move(a), std::move(b));
}

NodePtr mk_div(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return number(0.0);
    if (is_const(b, 1.0)) return a;
    return binary(Kind::Div, std::move(a), std::move(b));
}

NodePtr mk_pow(NodePtr base, int e) {
    if (e == 0) return number(1.0);
    if (e == 1) return base;
    return power(std::move(base), e);
}

NodePtr diff_node(const NodePtr& n) {
    switch (n->kind) {
    case Kind::Number: return number(0.0);
    case Kind::Var: return number(n->var == 't' ? 1.0 : 0.0);
    case Kind::Neg: {
        auto d = diff_node(n->lhs);
        if (is_const(d, 0.0)) return d;
        return unary(Kind::Neg, std::move(d));
    }
    case Kind::Add: return mk_add(diff_node(n->lhs), diff_node(n->rhs));
    case Kind::Sub: return mk_sub(diff_node(n->lhs), diff_node(n->rhs));
    case Kind::Mul:
        return mk_add(mk_mul(diff_node(n->lhs), n->rhs), mk_mul(n->lhs, diff_node(n->rhs)));
    case Kind::Div:
        // (u/v)' = (u' v - u v') / v^2
        return mk_div(mk_sub(mk_mul(diff_node(n->lhs), n->rhs), mk_mul(n->lhs, diff_node(n->rhs))),
                      mk_pow(n->rhs, 2));
    case Kind::Pow:
        return mk_mul(mk_mul(number(static_cast<double>(n->exponent)),
                             mk_pow(n->lhs, n->exponent - 1)),
                      diff_node(n->lhs));
    case Kind::Sin: return mk_mul(unary(Kind::Cos, n->lhs), diff_node(n->lhs));
    case Kind::Cos:
        return mk_mul(unary(Kind::Neg, unary(Kind::Sin, n->lhs)), diff_node(n->lhs));
    case Kind::Exp: return mk_mul(unary(Kind::Exp, n->lhs), diff_node(n->lhs));
    case Kind::Tanh:
        // tanh' = 1 - tanh^2
        return mk_mul(mk_sub(number(1.0), mk_pow(unary(Kind::Tanh, n->lhs), 2)),
                      diff_node(n->lhs));
    }
    return number(0.0);
}

// --- parser -------------------------------------------------------------

struct Parser {
    std::string_view src;
    std::size_t pos = 0;

    [[noreturn]] void fail(std::size_t at, const std::string& expected) {
        std::ostringstream os;
        os << "parse error at offset " << at << ": expected " << expected;
        throw ParseError(os.str(), at, expected);
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

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (eat('+')) {
                lhs = binary(Kind::Add, std::move(lhs), parse_term());
            } else if (eat('-')) {
                lhs = binary(Kind::Sub, std::move(lhs), parse_term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (eat('*')) {
                lhs = binary(Kind::Mul, std::move(lhs), parse_unary());
            } else if (eat('/')) {
                lhs = binary(Kind::Div, std::move(lhs), parse_unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        if (eat('-')) return unary(Kind::Neg, parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (!eat('^')) return base;
        skip_ws();
        const std::size_t at = pos;
        bool negative = false;
        if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) {
            negative = src[pos] == '-';
            ++pos;
        }
        std::size_t digits = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos == digits) fail(at, "integer exponent");
        int e = 0;
        auto [ptr, ec] = std::from_chars(src.data() + digits, src.data() + pos, e);
        if (ec != std::errc{} || ptr != src.data() + pos) fail(at, "integer exponent");
        return power(std::move(base), negative ? -e : e);
    }

    NodePtr parse_atom() {
        skip_ws();
        const std::size_t at = pos;
        if (pos >= src.size()) fail(at, "number, variable, 'pi', function call or '('");
        const char c = src[pos];

        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expr();
            if (!eat(')')) fail(pos, "')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number(at);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos;
            while (end < src.size() && std::isalpha(static_cast<unsigned char>(src[end]))) ++end;
            const std::string_view word = src.substr(pos, end - pos);
            pos = end;
            if (word == "t" || word == "x" || word == "y") return variable(word[0]);
            if (word == "pi") return number(M_PI);
            if (word == "sin" || word == "cos" || word == "exp" || word == "tanh") {
                if (!eat('(')) fail(pos, "'(' after " + std::string(word));
                NodePtr arg = parse_expr();
                if (!eat(')')) fail(pos, "')'");
                const Kind k = word == "sin"   ? Kind::Sin
                               : word == "cos" ? Kind::Cos
                               : word == "exp" ? Kind::Exp
                                               : Kind::Tanh;
                return unary(k, std::move(arg));
            }
            fail(at, "one of t, x, y, pi, sin, cos, exp, tanh");
        }
        fail(at, "number, variable, 'pi', function call or '('");
    }

    NodePtr parse_number(std::size_t at) {
        std::size_t end = pos;
        while (end < src.size() && std::isdigit(static_cast<unsigned char>(src[end]))) ++end;
        if (end < src.size() && src[end] == '.') {
            ++end;
            while (end < src.size() && std::isdigit(static_cast<unsigned char>(src[end]))) ++end;
        }
        if (end < src.size() && (src[end] == 'e' || src[end] == 'E')) {
            std::size_t mark = end + 1;
            if (mark < src.size() && (src[mark] == '+' || src[mark] == '-')) ++mark;
            std::size_t dstart = mark;
            while (mark < src.size() && std::isdigit(static_cast<unsigned char>(src[mark]))) ++mark;
            if (mark > dstart) end = mark;
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(src.data() + pos, src.data() + end, v);
        if (ec != std::errc{} || ptr != src.data() + end) fail(at, "numeric literal");
        pos = end;
        return number(v);
    }
};

} // namespace
} // namespace expr

Perturbation::Perturbation(std::shared_ptr<const expr::Node> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

Perturbation Perturbation::parse(std::string_view src) {
    expr::Parser parser{src};
    if (parser.peek() == '\0') parser.fail(0, "nonempty expression");
    auto root = parser.parse_expr();
    parser.skip_ws();
    if (parser.pos != src.size()) parser.fail(parser.pos, "end of input or an operator");
    return Perturbation(std::move(root), std::string(src));
}

double Perturbation::eval(double t, double x, double y) const {
    return expr::eval_node(root_.get(), t, x, y);
}

Perturbation Perturbation::diff_t() const {
    return Perturbation(expr::diff_node(root_), std::string());
}

std::string Perturbation::to_string() const {
    return expr::to_text(root_.get());
}

bool check_periodicity(const Perturbation& f, double sigma, int n_samples) {
    if (sigma <= 0.0) throw std::invalid_argument("check_periodicity: sigma must be > 0");
    if (n_samples < 8) throw std::invalid_argument("check_periodicity: need >= 8 samples");

    std::mt19937 rng(0x5eedu);
    std::uniform_real_distribution<double> ut(0.0, sigma);
    std::uniform_real_distribution<double> uxy(-2.0, 2.0);
    for (int i = 0; i < n_samples; ++i) {
        const double t = ut(rng);
        const double x = uxy(rng);
        const double y = uxy(rng);
        double a, b;
        try {
            a = f.eval(t, x, y);
            b = f.eval(t + sigma, x, y);
        } catch (const EvalError&) {
            continue; // singular sample, advisory check skips it
        }
        if (std::abs(b - a) > 1e-9 * (1.0 + std::abs(a))) return false;
    }
    return true;
}

} // namespace melosc
