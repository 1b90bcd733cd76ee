#pragma once

// Parsed coordinate expressions and their exact derivatives.
//
// Grammar (infix):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-'* power
//   power  := atom ('^' factor)?          right-associative, constant exponent
//   atom   := number | name | name '(' expr ')' | '(' expr ')'
// Functions: sin, cos, exp, sqrt, ln. Variable names come from the chart
// declaration (x0..x{d-1} by default, u0.. for parameter domains).
//
// Derivatives up to second order are obtained by forward-mode jet
// propagation (psk/jet.hpp), never by differencing the expression.

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "psk/jet.hpp"

namespace psk {

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (at column " + std::to_string(pos + 1) + ")"), position(pos)
    {
    }
};

// Value with exact first and second partials at a point.
struct JetValue {
    double value = 0.0;
    std::vector<double> partials;
    std::vector<double> second_packed; // lower triangle, (i,j) i<=j at packed_index(i,j)

    int dim() const { return static_cast<int>(partials.size()); }
    double second(int i, int j) const { return second_packed[static_cast<size_t>(packed_index(i, j))]; }
};

// Immutable expression tree. Copies share structure; evaluation is pure,
// so a ScalarExpr may be used from many threads at once.
class ScalarExpr {
public:
    enum class Kind : uint8_t { Constant, Variable, Neg, Sin, Cos, Exp, Sqrt, Ln, Add, Sub, Mul, Div, Pow };

    struct Node {
        Kind kind;
        double constant = 0.0; // Constant value, or Pow exponent
        int var = -1;
        std::shared_ptr<const Node> a, b;
    };

    ScalarExpr() = default;
    explicit ScalarExpr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    bool empty() const { return root_ == nullptr; }
    const Node& node() const { return *root_; }
    std::shared_ptr<const Node> root() const { return root_; }

    double eval(std::span<const double> point) const;
    Jet eval_jet(std::span<const double> point) const;

private:
    std::shared_ptr<const Node> root_;
};

// -- construction -------------------------------------------------------

ScalarExpr expr_constant(double c);
ScalarExpr expr_var(int index);
ScalarExpr operator-(const ScalarExpr& a);
ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr expr_sin(const ScalarExpr& a);
ScalarExpr expr_cos(const ScalarExpr& a);
ScalarExpr expr_exp(const ScalarExpr& a);
ScalarExpr expr_sqrt(const ScalarExpr& a);
ScalarExpr expr_ln(const ScalarExpr& a);
ScalarExpr expr_pow(const ScalarExpr& a, double exponent);

// Parse `source` against the given variable names (index = chart coordinate).
ScalarExpr parse_expr(const std::string& source, const std::vector<std::string>& variables);

// Full-parenthesized form; re-parsing yields an evaluation-identical tree.
std::string to_string(const ScalarExpr& e, const std::vector<std::string>& variables);

// Default chart variable names x0..x{dim-1} (or another stem).
std::vector<std::string> default_variables(int dim, const std::string& stem = "x");

// Value and exact first/second partials at `point`.
JetValue eval_jet2(const ScalarExpr& e, std::span<const double> point);

// Independent 4th-order central-difference estimate of the first and second
// partials at `point`; used as a test oracle against eval_jet2.
JetValue derivative_oracle(const ScalarExpr& e, std::span<const double> point, double h);

} // namespace psk
