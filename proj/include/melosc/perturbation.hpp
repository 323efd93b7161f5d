#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "melosc/errors.hpp"

namespace melosc {

namespace expr {
struct Node;
}

/// Parsed perturbation f(t, x, y). Grammar: decimal constants, pi, the
/// variables t/x/y, binary + - * /, unary -, integer powers with ^, and the
/// calls sin, cos, exp, tanh. Precedence ^ > unary- > */ > +-, binary
/// operators left associative. Immutable after parse.
class Perturbation {
public:
    /// Parses src; throws ParseError (with byte offset) on malformed input.
    static Perturbation parse(std::string_view src);

    /// IEEE-754 double evaluation. Throws EvalError naming the offending
    /// subexpression when any intermediate value is non-finite.
    double eval(double t, double x, double y) const;

    /// Symbolic d/dt; x and y are treated as constants.
    Perturbation diff_t() const;

    /// Canonical textual form; parsing it back is semantically idempotent.
    std::string to_string() const;

    /// The original source string handed to parse (empty for derived trees).
    const std::string& source() const noexcept { return source_; }

private:
    Perturbation(std::shared_ptr<const expr::Node> root, std::string source);

    std::shared_ptr<const expr::Node> root_;
    std::string source_;
};

/// Advisory sampling check that f(t + sigma, x, y) == f(t, x, y) holds to
/// 1e-9 * (1 + |f|) on a deterministic pseudo-random sample of
/// [0, sigma] x [-2, 2]^2. Samples where f is singular are skipped.
bool check_periodicity(const Perturbation& f, double sigma, int n_samples);

} // namespace melosc
