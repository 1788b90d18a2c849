#include "ifde/rhsdsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "ifde/sampling.hpp"
#include "ifde/specfun.hpp"

namespace ifde::rhsdsl {

ParseError::ParseError(std::size_t offset, const std::string& message)
    : Error("syntax error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

EvalError::EvalError(SourceSpan span, const std::string& message)
    : DomainError(message), span_(span) {}

Expr::Expr(std::shared_ptr<const Node> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

namespace {

using NodePtr = std::shared_ptr<const Node>;

enum class Tok { Number, Ident, Op, LParen, RParen, Comma, End };

struct Token {
    Tok kind = Tok::End;
    std::size_t begin = 0;
    std::size_t end = 0;
    double number = 0.0;
    std::string text;
};

std::string describe(const Token& tok) {
    switch (tok.kind) {
        case Tok::End: return "end of input";
        case Tok::Number: return "number '" + tok.text + "'";
        case Tok::Ident: return "identifier '" + tok.text + "'";
        default: return "'" + tok.text + "'";
    }
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
        Token tok;
        tok.begin = pos_;
        if (pos_ >= src_.size()) {
            tok.end = pos_;
            return tok;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number(tok);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) {
                ++end;
            }
            tok.kind = Tok::Ident;
            tok.text = std::string(src_.substr(pos_, end - pos_));
            tok.end = pos_ = end;
            return tok;
        }
        tok.text = std::string(1, c);
        tok.end = ++pos_;
        switch (c) {
            case '+': case '-': case '*': case '/': case '^': tok.kind = Tok::Op; break;
            case '(': tok.kind = Tok::LParen; break;
            case ')': tok.kind = Tok::RParen; break;
            case ',': tok.kind = Tok::Comma; break;
            default:
                throw ParseError(tok.begin, "unexpected character '" + tok.text + "'");
        }
        return tok;
    }

private:
    Token number(Token& tok) {
        std::size_t end = pos_;
        auto digits = [&] {
            while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) {
                ++end;
            }
        };
        digits();
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            digits();
        }
        // Exponent only when digits follow; "2e" stays 2 followed by the constant e.
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t look = end + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) {
                ++look;
            }
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                end = look;
                digits();
            }
        }
        const std::string_view text = src_.substr(pos_, end - pos_);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw ParseError(pos_, "malformed number '" + std::string(text) + "'");
        }
        tok.kind = Tok::Number;
        tok.number = value;
        tok.text = std::string(text);
        tok.end = pos_ = end;
        return tok;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

bool is_unary_function(const std::string& name) {
    return name == "sqrt" || name == "abs" || name == "sin" || name == "cos" || name == "exp";
}

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) { advance(); }

    NodePtr parse_all() {
        NodePtr root = expr();
        if (tok_.kind != Tok::End) {
            throw ParseError(tok_.begin, "expected operator or end of input, found " + describe(tok_));
        }
        return root;
    }

private:
    void advance() { tok_ = lexer_.next(); }

    bool at_op(char op) const {
        return tok_.kind == Tok::Op && tok_.text[0] == op;
    }

    void expect(Tok kind, const char* what) {
        if (tok_.kind != kind) {
            throw ParseError(tok_.begin, std::string("expected ") + what + ", found " + describe(tok_));
        }
        advance();
    }

    static NodePtr binary(char op, NodePtr lhs, NodePtr rhs) {
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Binary;
        n->symbol = op;
        n->span = {lhs->span.begin, rhs->span.end};
        n->children = {std::move(lhs), std::move(rhs)};
        return n;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (at_op('+') || at_op('-')) {
            const char op = tok_.text[0];
            advance();
            lhs = binary(op, lhs, term());
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (at_op('*') || at_op('/')) {
            const char op = tok_.text[0];
            advance();
            lhs = binary(op, lhs, unary());
        }
        return lhs;
    }

    NodePtr unary() {
        if (at_op('-')) {
            const std::size_t begin = tok_.begin;
            advance();
            NodePtr operand = unary();
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::Negate;
            n->span = {begin, operand->span.end};
            n->children = {std::move(operand)};
            return n;
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (at_op('^')) {
            advance();
            return binary('^', base, unary());
        }
        return base;
    }

    NodePtr primary() {
        auto n = std::make_shared<Node>();
        n->span = {tok_.begin, tok_.end};
        switch (tok_.kind) {
            case Tok::Number:
                n->kind = NodeKind::Number;
                n->value = tok_.number;
                advance();
                return n;
            case Tok::LParen: {
                advance();
                NodePtr inner = expr();
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::Ident:
                return identifier();
            default:
                throw ParseError(tok_.begin, "expected expression, found " + describe(tok_));
        }
    }

    NodePtr identifier() {
        const Token id = tok_;
        advance();
        auto n = std::make_shared<Node>();
        n->span = {id.begin, id.end};
        if (tok_.kind != Tok::LParen) {
            if (id.text == "t" || id.text == "x" || id.text == "y") {
                n->kind = NodeKind::Variable;
                n->symbol = id.text[0];
                return n;
            }
            if (id.text == "pi" || id.text == "e") {
                n->kind = NodeKind::Constant;
                n->name = id.text;
                n->value = id.text == "pi" ? std::numbers::pi : std::numbers::e;
                return n;
            }
            throw ParseError(id.begin, "unknown identifier '" + id.text + "'");
        }
        n->kind = NodeKind::Call;
        n->name = id.text;
        advance();  // '('
        if (is_unary_function(id.text)) {
            n->children.push_back(expr());
        } else if (id.text == "ml") {
            if (tok_.kind != Tok::Number) {
                throw ParseError(tok_.begin, "expected numeric literal order for ml, found " +
                                                 describe(tok_));
            }
            const double order = tok_.number;
            if (!(order > 0.0 && order <= 1.0)) {
                throw ParseError(tok_.begin, "ml order " + tok_.text + " outside (0, 1]");
            }
            auto lit = std::make_shared<Node>();
            lit->kind = NodeKind::Number;
            lit->value = order;
            lit->span = {tok_.begin, tok_.end};
            advance();
            if (tok_.kind != Tok::Comma) {
                throw ParseError(tok_.begin, "ml takes 2 arguments; expected ',', found " +
                                                 describe(tok_));
            }
            advance();
            n->children.push_back(lit);
            n->children.push_back(expr());
        } else {
            throw ParseError(id.begin, "unknown function '" + id.text + "'");
        }
        if (tok_.kind == Tok::Comma) {
            throw ParseError(tok_.begin, "too many arguments to " + id.text);
        }
        n->span.end = tok_.end;
        expect(Tok::RParen, "')'");
        return n;
    }

    Lexer lexer_;
    Token tok_;
};

class Evaluator {
public:
    Evaluator(const std::string& source, double t, double x, double y)
        : source_(source), t_(t), x_(x), y_(y) {}

    double operator()(const Node& n) const {
        const double v = compute(n);
        if (!std::isfinite(v)) {
            fail(n, "non-finite value");
        }
        return v;
    }

private:
    [[noreturn]] void fail(const Node& n, const std::string& why) const {
        const std::string text = source_.substr(n.span.begin, n.span.end - n.span.begin);
        std::ostringstream os;
        os << why << " in '" << text << "' at offset " << n.span.begin;
        throw EvalError(n.span, os.str());
    }

    double compute(const Node& n) const {
        switch (n.kind) {
            case NodeKind::Number:
            case NodeKind::Constant:
                return n.value;
            case NodeKind::Variable:
                return n.symbol == 't' ? t_ : n.symbol == 'x' ? x_ : y_;
            case NodeKind::Negate:
                return -(*this)(*n.children[0]);
            case NodeKind::Binary: {
                const double a = (*this)(*n.children[0]);
                const double b = (*this)(*n.children[1]);
                switch (n.symbol) {
                    case '+': return a + b;
                    case '-': return a - b;
                    case '*': return a * b;
                    case '/':
                        if (b == 0.0) {
                            fail(n, "division by zero");
                        }
                        return a / b;
                    default:
                        if (a == 0.0 && b < 0.0) {
                            fail(n, "zero raised to a negative power");
                        }
                        if (a < 0.0 && b != std::floor(b)) {
                            fail(n, "negative base with non-integer exponent");
                        }
                        return std::pow(a, b);
                }
            }
            case NodeKind::Call:
                return call(n);
        }
        return 0.0;
    }

    double call(const Node& n) const {
        if (n.name == "ml") {
            const double order = n.children[0]->value;
            const double z = (*this)(*n.children[1]);
            try {
                return mittag_leffler(order, z);
            } catch (const Error& e) {
                fail(n, e.what());
            }
        }
        const double a = (*this)(*n.children[0]);
        if (n.name == "sqrt") {
            if (a < 0.0) {
                fail(n, "square root of a negative number");
            }
            return std::sqrt(a);
        }
        if (n.name == "abs") return std::abs(a);
        if (n.name == "sin") return std::sin(a);
        if (n.name == "cos") return std::cos(a);
        return std::exp(a);
    }

    const std::string& source_;
    double t_;
    double x_;
    double y_;
};

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string print_node(const Node& n) {
    switch (n.kind) {
        case NodeKind::Number: return format_number(n.value);
        case NodeKind::Constant: return n.name;
        case NodeKind::Variable: return std::string(1, n.symbol);
        case NodeKind::Negate: return "(-" + print_node(*n.children[0]) + ")";
        case NodeKind::Binary:
            return "(" + print_node(*n.children[0]) + " " + n.symbol + " " +
                   print_node(*n.children[1]) + ")";
        case NodeKind::Call: {
            std::string out = n.name + "(";
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                if (i > 0) out += ", ";
                out += print_node(*n.children[i]);
            }
            return out + ")";
        }
    }
    return {};
}

bool same_node(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.symbol != b.symbol || a.name != b.name ||
        a.children.size() != b.children.size()) {
        return false;
    }
    if (a.kind == NodeKind::Number && a.value != b.value) {
        return false;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!same_node(*a.children[i], *b.children[i])) {
            return false;
        }
    }
    return true;
}

}  // namespace

Expr parse(std::string_view text) {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        throw ParseError(0, "empty expression");
    }
    Parser parser(text);
    return Expr(parser.parse_all(), std::string(text));
}

double eval(const Expr& e, double t, double x, double y) {
    return Evaluator(e.source(), t, x, y)(e.root());
}

std::string print(const Expr& e) { return print_node(e.root()); }

bool structurally_equal(const Expr& a, const Expr& b) { return same_node(a.root(), b.root()); }

LipschitzEstimate estimate_lipschitz(const Expr& e, double T, double box_radius,
                                     std::size_t samples) {
    if (samples < 100) {
        throw DomainError("estimate_lipschitz: at least 100 samples required");
    }
    if (!(T > 0.0) || !(box_radius > 0.0)) {
        throw DomainError("estimate_lipschitz: T and box_radius must be positive");
    }
    auto at = [&](double t, double x, double y) {
        try {
            return eval(e, t, x, y);
        } catch (const EvalError& err) {
            std::ostringstream os;
            os << err.what() << " (sample t = " << t << ", x = " << x << ", y = " << y << ")";
            throw EvalError(err.span(), os.str());
        }
    };
    auto quotient = [](double fa, double fb, double a, double b) {
        const double gap = std::abs(a - b);
        return gap > 1e-12 ? std::abs(fa - fb) / gap : 0.0;
    };

    HaltonSequence seq(3);
    LipschitzEstimate est;
    for (std::size_t i = 0; i < samples; ++i) {
        const auto p = seq.next();
        const auto q = seq.next();
        const double t1 = p[0] * T, t2 = q[0] * T;
        const double x1 = (2.0 * p[1] - 1.0) * box_radius, x2 = (2.0 * q[1] - 1.0) * box_radius;
        const double y1 = (2.0 * p[2] - 1.0) * box_radius, y2 = (2.0 * q[2] - 1.0) * box_radius;
        const double base = at(t1, x1, y1);
        est.M1 = std::max(est.M1, quotient(base, at(t2, x1, y1), t1, t2));
        est.M2 = std::max(est.M2, quotient(base, at(t1, x2, y1), x1, x2));
        est.M3 = std::max(est.M3, quotient(base, at(t1, x1, y2), y1, y2));
    }
    est.M1 *= 1.2;
    est.M2 *= 1.2;
    est.M3 *= 1.2;
    return est;
}

Rhs make_rhs(std::vector<Expr> components) {
    if (components.empty()) {
        throw DomainError("make_rhs: at least one expression required");
    }
    return [exprs = std::move(components)](double t, std::span<const double> x,
                                           std::span<const double> y) {
        if (x.size() != exprs.size() || y.size() != exprs.size()) {
            throw DomainError("rhs expression count does not match the state dimension");
        }
        Vector out(exprs.size());
        for (std::size_t i = 0; i < exprs.size(); ++i) {
            out[i] = eval(exprs[i], t, x[i], y[i]);
        }
        return out;
    };
}

}  // namespace ifde::rhsdsl
