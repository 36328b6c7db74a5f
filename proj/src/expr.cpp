#include "peco/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "peco/data.hpp"
#include "peco/errors.hpp"

namespace peco {

namespace {

using Node = Expression::Node;
using NodePtr = Expression::NodePtr;
using Op = Expression::Op;

struct Token {
    enum class Kind { Number, Identifier, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
    Kind kind;
    double number = 0.0;
    std::string text;
    std::size_t column = 0;  // 1-based
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t col = pos_ + 1;
        if (pos_ >= src_.size()) return {Token::Kind::End, 0.0, "", col};
        char c = src_[pos_];
        switch (c) {
            case '+': ++pos_; return {Token::Kind::Plus, 0.0, "+", col};
            case '-': ++pos_; return {Token::Kind::Minus, 0.0, "-", col};
            case '*': ++pos_; return {Token::Kind::Star, 0.0, "*", col};
            case '/': ++pos_; return {Token::Kind::Slash, 0.0, "/", col};
            case '^': ++pos_; return {Token::Kind::Caret, 0.0, "^", col};
            case '(': ++pos_; return {Token::Kind::LParen, 0.0, "(", col};
            case ')': ++pos_; return {Token::Kind::RParen, 0.0, ")", col};
            case ',': ++pos_; return {Token::Kind::Comma, 0.0, ",", col};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.data() + pos_;
            const char* end = src_.data() + src_.size();
            double value = 0.0;
            auto res = std::from_chars(begin, end, value);
            if (res.ec != std::errc())
                throw Error(ErrorCode::SyntaxError,
                            "bad numeric literal at column " + std::to_string(col));
            std::size_t len = static_cast<std::size_t>(res.ptr - begin);
            pos_ += len;
            return {Token::Kind::Number, value, src_.substr(col - 1, len), col};
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {Token::Kind::Identifier, 0.0, src_.substr(start, pos_ - start), col};
        }
        throw Error(ErrorCode::SyntaxError,
                    std::string("unexpected character '") + c + "' at column " + std::to_string(col));
    }

  private:
    const std::string& src_;
    std::size_t pos_ = 0;
};

NodePtr make_node(Op op, NodePtr left = nullptr, NodePtr right = nullptr) {
    auto node = std::make_shared<Node>();
    node->op = op;
    node->left = std::move(left);
    node->right = std::move(right);
    return node;
}

class Parser {
  public:
    Parser(const std::string& src, std::size_t n, std::size_t u)
        : lexer_(src), n_(n), u_(u) {
        advance();
    }

    NodePtr parse_all() {
        NodePtr e = parse_sum();
        if (current_.kind != Token::Kind::End)
            throw Error(ErrorCode::SyntaxError, "unexpected '" + current_.text + "' at column " +
                                                    std::to_string(current_.column) +
                                                    "; expected operator or end");
        return e;
    }

  private:
    void advance() { current_ = lexer_.next(); }

    bool accept(Token::Kind kind) {
        if (current_.kind != kind) return false;
        advance();
        return true;
    }

    void expect(Token::Kind kind, const std::string& what) {
        if (current_.kind != kind)
            throw Error(ErrorCode::SyntaxError, "expected " + what + " at column " +
                                                    std::to_string(current_.column));
        advance();
    }

    NodePtr parse_sum() {
        NodePtr left = parse_product();
        while (true) {
            if (accept(Token::Kind::Plus))
                left = make_node(Op::Add, left, parse_product());
            else if (accept(Token::Kind::Minus))
                left = make_node(Op::Sub, left, parse_product());
            else
                return left;
        }
    }

    NodePtr parse_product() {
        NodePtr left = parse_unary();
        while (true) {
            if (accept(Token::Kind::Star))
                left = make_node(Op::Mul, left, parse_unary());
            else if (accept(Token::Kind::Slash))
                left = make_node(Op::Div, left, parse_unary());
            else
                return left;
        }
    }

    // Unary minus binds looser than ^: -x^2 is -(x^2).
    NodePtr parse_unary() {
        if (accept(Token::Kind::Minus)) return make_node(Op::Neg, parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (accept(Token::Kind::Caret)) {
            // right-associative; the exponent may itself carry unary minus
            NodePtr exponent = parse_unary();
            return make_node(Op::Pow, base, exponent);
        }
        return base;
    }

    NodePtr parse_primary() {
        if (current_.kind == Token::Kind::Number) {
            auto node = make_node(Op::Literal);
            const_cast<Node*>(node.get())->value = current_.number;
            advance();
            return node;
        }
        if (current_.kind == Token::Kind::LParen) {
            advance();
            NodePtr inner = parse_sum();
            expect(Token::Kind::RParen, "')'");
            return inner;
        }
        if (current_.kind == Token::Kind::Identifier) {
            Token tok = current_;
            advance();
            return resolve_identifier(tok);
        }
        throw Error(ErrorCode::SyntaxError,
                    "expected number, variable, function or '(' at column " +
                        std::to_string(current_.column));
    }

    NodePtr resolve_identifier(const Token& tok) {
        static const struct { const char* name; Op op; } functions[] = {
            {"exp", Op::Exp}, {"log", Op::Log}, {"sqrt", Op::Sqrt},
            {"sin", Op::Sin}, {"cos", Op::Cos}, {"abs", Op::Abs},
        };
        for (const auto& fn : functions) {
            if (tok.text == fn.name) {
                expect(Token::Kind::LParen, "'(' after function name");
                NodePtr arg = parse_sum();
                expect(Token::Kind::RParen, "')'");
                return make_node(fn.op, arg);
            }
        }
        // variable: x<k> or xi<k>, 1-based
        bool is_xi = tok.text.size() > 2 && tok.text[0] == 'x' && tok.text[1] == 'i';
        bool is_x = !is_xi && tok.text.size() > 1 && tok.text[0] == 'x';
        const std::string digits = is_xi ? tok.text.substr(2) : is_x ? tok.text.substr(1) : "";
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw Error(ErrorCode::UnknownIdentifier, "unknown identifier '" + tok.text +
                                                          "' at column " + std::to_string(tok.column));
        const std::size_t index = static_cast<std::size_t>(std::stoull(digits));
        const std::size_t limit = is_xi ? u_ : n_;
        if (index < 1 || index > limit)
            throw Error(ErrorCode::IndexOutOfRange,
                        "'" + tok.text + "' exceeds declared dimension " + std::to_string(limit) +
                            " at column " + std::to_string(tok.column));
        auto node = make_node(is_xi ? Op::VarXi : Op::VarX);
        const_cast<Node*>(node.get())->index = index - 1;
        return node;
    }

    Lexer lexer_;
    Token current_;
    std::size_t n_;
    std::size_t u_;
};

// Value plus tangent column for each decision variable.
struct Dual {
    double value = 0.0;
    std::vector<double> grad;
};

bool is_integer_valued(double v) {
    return std::isfinite(v) && v == std::floor(v) && std::abs(v) <= 1e9;
}

double integer_power(double base, long long k) {
    // binary exponentiation; exact for exactly representable intermediates
    if (k < 0) {
        if (base == 0.0) throw Error(ErrorCode::DivideByZero, "0 raised to a negative power");
        return 1.0 / integer_power(base, -k);
    }
    double result = 1.0;
    double acc = base;
    while (k > 0) {
        if (k & 1) result *= acc;
        acc *= acc;
        k >>= 1;
    }
    return result;
}

double eval_node(const Node& node, const std::vector<double>& x, const std::vector<double>& xi,
                 const EvalOptions& opts) {
    switch (node.op) {
        case Op::Literal: return node.value;
        case Op::VarX: return x.at(node.index);
        case Op::VarXi: return xi.at(node.index);
        case Op::Neg: return -eval_node(*node.left, x, xi, opts);
        case Op::Add:
            return eval_node(*node.left, x, xi, opts) + eval_node(*node.right, x, xi, opts);
        case Op::Sub:
            return eval_node(*node.left, x, xi, opts) - eval_node(*node.right, x, xi, opts);
        case Op::Mul:
            return eval_node(*node.left, x, xi, opts) * eval_node(*node.right, x, xi, opts);
        case Op::Div: {
            double denom = eval_node(*node.right, x, xi, opts);
            if (denom == 0.0) throw Error(ErrorCode::DivideByZero, "division by zero");
            return eval_node(*node.left, x, xi, opts) / denom;
        }
        case Op::Pow: {
            double base = eval_node(*node.left, x, xi, opts);
            double exponent = eval_node(*node.right, x, xi, opts);
            if (is_integer_valued(exponent))
                return integer_power(base, static_cast<long long>(exponent));
            if (base < 0.0)
                throw Error(ErrorCode::DomainError, "negative base with non-integer exponent");
            if (base == 0.0 && exponent < 0.0)
                throw Error(ErrorCode::DivideByZero, "0 raised to a negative power");
            return std::pow(base, exponent);
        }
        case Op::Exp: return std::exp(eval_node(*node.left, x, xi, opts));
        case Op::Log: {
            double v = eval_node(*node.left, x, xi, opts);
            if (v <= 0.0) throw Error(ErrorCode::DomainError, "log of a non-positive value");
            return std::log(v);
        }
        case Op::Sqrt: {
            double v = eval_node(*node.left, x, xi, opts);
            if (v < 0.0) throw Error(ErrorCode::DomainError, "sqrt of a negative value");
            return std::sqrt(v);
        }
        case Op::Sin: return std::sin(eval_node(*node.left, x, xi, opts));
        case Op::Cos: return std::cos(eval_node(*node.left, x, xi, opts));
        case Op::Abs: {
            double v = eval_node(*node.left, x, xi, opts);
            if (opts.abs_smoothing > 0.0)
                return std::sqrt(v * v + opts.abs_smoothing * opts.abs_smoothing);
            return std::abs(v);
        }
    }
    throw Error(ErrorCode::SyntaxError, "corrupt expression tree");
}

Dual ad_node(const Node& node, const std::vector<double>& x, const std::vector<double>& xi,
             const EvalOptions& opts) {
    const std::size_t n = x.size();
    Dual out;
    out.grad.assign(n, 0.0);
    switch (node.op) {
        case Op::Literal:
            out.value = node.value;
            return out;
        case Op::VarX:
            out.value = x.at(node.index);
            out.grad[node.index] = 1.0;
            return out;
        case Op::VarXi:
            out.value = xi.at(node.index);
            return out;
        case Op::Neg: {
            Dual a = ad_node(*node.left, x, xi, opts);
            out.value = -a.value;
            for (std::size_t k = 0; k < n; ++k) out.grad[k] = -a.grad[k];
            return out;
        }
        case Op::Add: {
            Dual a = ad_node(*node.left, x, xi, opts);
            Dual b = ad_node(*node.right, x, xi, opts);
            out.value = a.value + b.value;
            for (std::size_t k = 0; k < n; ++k) out.grad[k] = a.grad[k] + b.grad[k];
            return out;
        }
        case Op::Sub: {
            Dual a = ad_node(*node.left, x, xi, opts);
            Dual b = ad_node(*node.right, x, xi, opts);
            out.value = a.value - b.value;
            for (std::size_t k = 0; k < n; ++k) out.grad[k] = a.grad[k] - b.grad[k];
            return out;
        }
        case Op::Mul: {
            Dual a = ad_node(*node.left, x, xi, opts);
            Dual b = ad_node(*node.right, x, xi, opts);
            out.value = a.value * b.value;
            for (std::size_t k = 0; k < n; ++k)
                out.grad[k] = a.grad[k] * b.value + a.value * b.grad[k];
            return out;
        }
        case Op::Div: {
            Dual a = ad_node(*node.left, x, xi, opts);
            Dual b = ad_node(*node.right, x, xi, opts);
            if (b.value == 0.0) throw Error(ErrorCode::DivideByZero, "division by zero");
            out.value = a.value / b.value;
            for (std::size_t k = 0; k < n; ++k)
                out.grad[k] = (a.grad[k] - out.value * b.grad[k]) / b.value;
            return out;
        }
        case Op::Pow: {
            Dual a = ad_node(*node.left, x, xi, opts);
            // Constant integer exponent: power rule, valid for any base.
            if (node.right->op == Op::Literal && is_integer_valued(node.right->value)) {
                long long k = static_cast<long long>(node.right->value);
                out.value = integer_power(a.value, k);
                if (k == 0) return out;  // derivative 0
                double factor = static_cast<double>(k) * integer_power(a.value, k - 1);
                for (std::size_t j = 0; j < n; ++j) out.grad[j] = factor * a.grad[j];
                return out;
            }
            Dual b = ad_node(*node.right, x, xi, opts);
            bool exponent_constant = true;
            for (std::size_t j = 0; j < n; ++j)
                if (b.grad[j] != 0.0) exponent_constant = false;
            if (exponent_constant && is_integer_valued(b.value)) {
                long long k = static_cast<long long>(b.value);
                out.value = integer_power(a.value, k);
                if (k == 0) return out;
                double factor = static_cast<double>(k) * integer_power(a.value, k - 1);
                for (std::size_t j = 0; j < n; ++j) out.grad[j] = factor * a.grad[j];
                return out;
            }
            if (a.value <= 0.0)
                throw Error(ErrorCode::DomainError,
                            "power with varying exponent needs a positive base");
            out.value = std::pow(a.value, b.value);
            const double log_base = std::log(a.value);
            for (std::size_t j = 0; j < n; ++j)
                out.grad[j] = out.value * (b.grad[j] * log_base + b.value * a.grad[j] / a.value);
            return out;
        }
        case Op::Exp: {
            Dual a = ad_node(*node.left, x, xi, opts);
            out.value = std::exp(a.value);
            for (std::size_t k = 0; k < n; ++k) out.grad[k] = out.value * a.grad[k];
            return out;
        }
        case Op::Log: {
            Dual a = ad_node(*node.left, x, xi, opts);
            if (a.value <= 0.0) throw Error(ErrorCode::DomainError, "log of a non-positive value");
            out.value = std::log(a.value);
            for (std::size_t k = 0; k < n; ++k) out.grad[k] = a.grad[k] / a.value;
            return out;
        }
        case Op::Sqrt: {
            Dual a = ad_node(*node.left, x, xi, opts);
            if (a.value < 0.0) throw Error(ErrorCode::DomainError, "sqrt of a negative value");
            if (a.value == 0.0) {
                bool constant = true;
                for (std::size_t k = 0; k < n; ++k)
                    if (a.grad[k] != 0.0) constant = false;
                if (!constant)
                    throw Error(ErrorCode::NonDifferentiable, "sqrt derivative at zero");
            }
            out.value = std::sqrt(a.value);
            for (std::size_t k = 0; k < n; ++k)
                out.grad[k] = a.grad[k] == 0.0 ? 0.0 : a.grad[k] / (2.0 * out.value);
            return out;
        }
        case Op::Sin: {
            Dual a = ad_node(*node.left, x, xi, opts);
            out.value = std::sin(a.value);
            const double c = std::cos(a.value);
            for (std::size_t k = 0; k < n; ++k) out.grad[k] = c * a.grad[k];
            return out;
        }
        case Op::Cos: {
            Dual a = ad_node(*node.left, x, xi, opts);
            out.value = std::cos(a.value);
            const double s = -std::sin(a.value);
            for (std::size_t k = 0; k < n; ++k) out.grad[k] = s * a.grad[k];
            return out;
        }
        case Op::Abs: {
            Dual a = ad_node(*node.left, x, xi, opts);
            if (opts.abs_smoothing > 0.0) {
                const double eps2 = opts.abs_smoothing * opts.abs_smoothing;
                out.value = std::sqrt(a.value * a.value + eps2);
                for (std::size_t k = 0; k < n; ++k)
                    out.grad[k] = a.value * a.grad[k] / out.value;
                return out;
            }
            if (a.value == 0.0) {
                bool constant = true;
                for (std::size_t k = 0; k < n; ++k)
                    if (a.grad[k] != 0.0) constant = false;
                if (!constant) throw Error(ErrorCode::NonDifferentiable, "abs kink at zero");
            }
            out.value = std::abs(a.value);
            const double sign = a.value > 0.0 ? 1.0 : a.value < 0.0 ? -1.0 : 0.0;
            for (std::size_t k = 0; k < n; ++k) out.grad[k] = sign * a.grad[k];
            return out;
        }
    }
    throw Error(ErrorCode::SyntaxError, "corrupt expression tree");
}

void print_node(const Node& node, std::ostringstream& out) {
    switch (node.op) {
        case Op::Literal: out << format_double(node.value); return;
        case Op::VarX: out << "x" << (node.index + 1); return;
        case Op::VarXi: out << "xi" << (node.index + 1); return;
        case Op::Neg:
            out << "(-";
            print_node(*node.left, out);
            out << ")";
            return;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Pow: {
            const char* symbol = node.op == Op::Add   ? " + "
                                 : node.op == Op::Sub ? " - "
                                 : node.op == Op::Mul ? " * "
                                 : node.op == Op::Div ? " / "
                                                      : " ^ ";
            out << "(";
            print_node(*node.left, out);
            out << symbol;
            print_node(*node.right, out);
            out << ")";
            return;
        }
        case Op::Exp:
        case Op::Log:
        case Op::Sqrt:
        case Op::Sin:
        case Op::Cos:
        case Op::Abs: {
            const char* name = node.op == Op::Exp    ? "exp"
                               : node.op == Op::Log  ? "log"
                               : node.op == Op::Sqrt ? "sqrt"
                               : node.op == Op::Sin  ? "sin"
                               : node.op == Op::Cos  ? "cos"
                                                     : "abs";
            out << name << "(";
            print_node(*node.left, out);
            out << ")";
            return;
        }
    }
}

bool nodes_equal(const NodePtr& a, const NodePtr& b) {
    if (!a || !b) return a == b;
    if (a->op != b->op || a->value != b->value || a->index != b->index) return false;
    return nodes_equal(a->left, b->left) && nodes_equal(a->right, b->right);
}

bool node_contains_abs(const NodePtr& node) {
    if (!node) return false;
    if (node->op == Op::Abs) return true;
    return node_contains_abs(node->left) || node_contains_abs(node->right);
}

void check_dims(const Expression& e, const std::vector<double>& x, const std::vector<double>& xi) {
    if (e.empty()) throw Error(ErrorCode::SyntaxError, "empty expression");
    if (x.size() != e.decision_dim() || xi.size() != e.uncertainty_dim())
        throw Error(ErrorCode::DimensionError, "evaluation vector dimension mismatch");
}

}  // namespace

Expression parse(const std::string& source, std::size_t n, std::size_t u) {
    if (source.find_first_not_of(" \t\r\n") == std::string::npos)
        throw Error(ErrorCode::SyntaxError, "empty expression");
    Parser parser(source, n, u);
    return Expression(parser.parse_all(), n, u, source);
}

double evaluate(const Expression& e, const std::vector<double>& x, const std::vector<double>& xi,
                const EvalOptions& opts) {
    check_dims(e, x, xi);
    return eval_node(*e.root(), x, xi, opts);
}

std::vector<double> gradient(const Expression& e, const std::vector<double>& x,
                             const std::vector<double>& xi, const EvalOptions& opts) {
    check_dims(e, x, xi);
    return ad_node(*e.root(), x, xi, opts).grad;
}

std::string pretty_print(const Expression& e) {
    if (e.empty()) return "";
    std::ostringstream out;
    print_node(*e.root(), out);
    return out.str();
}

bool contains_abs(const Expression& e) { return node_contains_abs(e.root()); }

bool structurally_equal(const Expression& a, const Expression& b) {
    return nodes_equal(a.root(), b.root());
}

}  // namespace peco
