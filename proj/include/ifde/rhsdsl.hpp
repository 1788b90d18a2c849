#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ifde/errors.hpp"
#include "ifde/solver.hpp"

/// Text formulas for right-hand sides f(t, x, y).
///
/// Grammar (whitespace is insignificant):
///
///     expr    = term { ("+" | "-") term } ;
///     term    = unary { ("*" | "/") unary } ;
///     unary   = "-" unary | power ;
///     power   = primary [ "^" unary ] ;          (* right associative *)
///     primary = number | "pi" | "e" | "t" | "x" | "y"
///             | func "(" expr ")"
///             | "ml" "(" number "," expr ")"
///             | "(" expr ")" ;
///     func    = "sqrt" | "abs" | "sin" | "cos" | "exp" ;
///
/// Unary minus binds looser than "^", so -2^2 is -4 and 2^-1 is 0.5.
/// ml(a, z) is the one-parameter Mittag-Leffler function E_a(z); its order a
/// must be a numeric literal in (0, 1].
namespace ifde::rhsdsl {

/// Byte range [begin, end) in the source text.
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& message);

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Raised by eval for sqrt of a negative number, division by zero,
/// 0 to a negative power, or any other non-finite intermediate.
class EvalError : public DomainError {
public:
    EvalError(SourceSpan span, const std::string& message);

    [[nodiscard]] SourceSpan span() const noexcept { return span_; }

private:
    SourceSpan span_;
};

enum class NodeKind { Number, Constant, Variable, Negate, Binary, Call };

struct Node {
    NodeKind kind = NodeKind::Number;
    double value = 0.0;     // Number, Constant
    char symbol = 0;        // Variable name or binary operator
    std::string name;       // Constant or function name
    std::vector<std::shared_ptr<const Node>> children;
    SourceSpan span;
};

/// Immutable parsed expression; cheap to copy.
class Expr {
public:
    Expr(std::shared_ptr<const Node> root, std::string source);

    [[nodiscard]] const Node& root() const noexcept { return *root_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
};

[[nodiscard]] Expr parse(std::string_view text);

[[nodiscard]] double eval(const Expr& e, double t, double x, double y);

/// Fully parenthesised text that parses back to the same tree.
[[nodiscard]] std::string print(const Expr& e);

/// Same shape, operators, names and literal values; spans are ignored.
[[nodiscard]] bool structurally_equal(const Expr& a, const Expr& b);

/// Sampled Lipschitz constants, already scaled by a 1.2 safety factor.
struct LipschitzEstimate {
    double M1 = 0.0;
    double M2 = 0.0;
    double M3 = 0.0;
};

/// Largest difference quotient along t, x and y over Halton sample pairs in
/// [0, T] x [-r, r]^2, times 1.2. Requires samples >= 100.
[[nodiscard]] LipschitzEstimate estimate_lipschitz(const Expr& e, double T, double box_radius,
                                                   std::size_t samples);

/// Lifts one scalar expression per component into a vector right-hand side:
/// component i evaluates its expression at (t, x_i, y_i).
[[nodiscard]] Rhs make_rhs(std::vector<Expr> components);

}  // namespace ifde::rhsdsl
