#pragma once

#include <memory>
#include <string>
#include <vector>

namespace peco {

// Closed grammar: literals, x1..xn, xi1..xiu, + - * / ^, unary minus,
// exp log sqrt sin cos abs. Parsed once, evaluated many times.
class Expression {
  public:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    enum class Op { Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Sqrt, Sin, Cos, Abs, Literal, VarX, VarXi };

    struct Node {
        Op op;
        double value = 0.0;      // Literal
        std::size_t index = 0;   // VarX / VarXi, zero-based
        NodePtr left, right;     // right empty for unary
    };

    Expression() = default;
    Expression(NodePtr root, std::size_t n, std::size_t u, std::string source)
        : root_(std::move(root)), n_(n), u_(u), source_(std::move(source)) {}

    bool empty() const { return root_ == nullptr; }
    const NodePtr& root() const { return root_; }
    std::size_t decision_dim() const { return n_; }
    std::size_t uncertainty_dim() const { return u_; }
    const std::string& source() const { return source_; }

  private:
    NodePtr root_;
    std::size_t n_ = 0;
    std::size_t u_ = 0;
    std::string source_;
};

// Precedence: + - < * / < unary - < ^ (right-associative) < primaries.
// Errors carry the 1-based source column.
Expression parse(const std::string& source, std::size_t n, std::size_t u);

struct EvalOptions {
    // When positive, abs(t) is evaluated as sqrt(t^2 + eps^2) so gradient
    // based solvers can traverse it; zero means the exact kinked abs.
    double abs_smoothing = 0.0;
};

double evaluate(const Expression& e, const std::vector<double>& x, const std::vector<double>& xi,
                const EvalOptions& opts = {});

// Forward-mode derivative with respect to every decision variable;
// uncertainty components are constants.
std::vector<double> gradient(const Expression& e, const std::vector<double>& x,
                             const std::vector<double>& xi, const EvalOptions& opts = {});

// Canonical fully parenthesized form; reparsing yields an identical tree.
std::string pretty_print(const Expression& e);

bool contains_abs(const Expression& e);

bool structurally_equal(const Expression& a, const Expression& b);

}  // namespace peco
