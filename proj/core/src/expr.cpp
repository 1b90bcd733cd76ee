#include "psk/expr.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstring>

namespace psk {

namespace {

using Node = ScalarExpr::Node;
using Kind = ScalarExpr::Kind;

std::shared_ptr<const Node> make_node(Kind k, double c, int var,
                                      std::shared_ptr<const Node> a = nullptr,
                                      std::shared_ptr<const Node> b = nullptr)
{
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->constant = c;
    n->var = var;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool is_const(const ScalarExpr& e, double v)
{
    return !e.empty() && e.node().kind == Kind::Constant && e.node().constant == v;
}

} // namespace

ScalarExpr expr_constant(double c) { return ScalarExpr(make_node(Kind::Constant, c, -1)); }
ScalarExpr expr_var(int index) { return ScalarExpr(make_node(Kind::Variable, 0.0, index)); }

ScalarExpr operator-(const ScalarExpr& a)
{
    if (a.node().kind == Kind::Constant) return expr_constant(-a.node().constant);
    return ScalarExpr(make_node(Kind::Neg, 0.0, -1, a.root()));
}

// The binary builders fold constant identities; programmatically composed
// charts (catalog metrics, deformed structures) would otherwise drown in
// 0*x terms. User input goes through the parser, which never folds.
ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b)
{
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a.node().kind == Kind::Constant && b.node().kind == Kind::Constant)
        return expr_constant(a.node().constant + b.node().constant);
    return ScalarExpr(make_node(Kind::Add, 0.0, -1, a.root(), b.root()));
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b)
{
    if (is_const(b, 0.0)) return a;
    if (a.node().kind == Kind::Constant && b.node().kind == Kind::Constant)
        return expr_constant(a.node().constant - b.node().constant);
    if (is_const(a, 0.0)) return -b;
    return ScalarExpr(make_node(Kind::Sub, 0.0, -1, a.root(), b.root()));
}

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b)
{
    if (is_const(a, 0.0) || is_const(b, 0.0)) return expr_constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a.node().kind == Kind::Constant && b.node().kind == Kind::Constant)
        return expr_constant(a.node().constant * b.node().constant);
    return ScalarExpr(make_node(Kind::Mul, 0.0, -1, a.root(), b.root()));
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b)
{
    if (is_const(b, 1.0)) return a;
    if (is_const(a, 0.0) && !b.empty() && b.node().kind == Kind::Constant && b.node().constant != 0.0)
        return expr_constant(0.0);
    return ScalarExpr(make_node(Kind::Div, 0.0, -1, a.root(), b.root()));
}

ScalarExpr expr_sin(const ScalarExpr& a) { return ScalarExpr(make_node(Kind::Sin, 0.0, -1, a.root())); }
ScalarExpr expr_cos(const ScalarExpr& a) { return ScalarExpr(make_node(Kind::Cos, 0.0, -1, a.root())); }
ScalarExpr expr_exp(const ScalarExpr& a) { return ScalarExpr(make_node(Kind::Exp, 0.0, -1, a.root())); }
ScalarExpr expr_sqrt(const ScalarExpr& a) { return ScalarExpr(make_node(Kind::Sqrt, 0.0, -1, a.root())); }
ScalarExpr expr_ln(const ScalarExpr& a) { return ScalarExpr(make_node(Kind::Ln, 0.0, -1, a.root())); }

ScalarExpr expr_pow(const ScalarExpr& a, double exponent)
{
    if (exponent == 1.0) return a;
    if (exponent == 0.0) return expr_constant(1.0);
    return ScalarExpr(make_node(Kind::Pow, exponent, -1, a.root()));
}

// -- evaluation ----------------------------------------------------------

namespace {

double eval_node(const Node& n, std::span<const double> p)
{
    switch (n.kind) {
        case Kind::Constant: return n.constant;
        case Kind::Variable: return p[static_cast<size_t>(n.var)];
        case Kind::Neg: return -eval_node(*n.a, p);
        case Kind::Sin: return std::sin(eval_node(*n.a, p));
        case Kind::Cos: return std::cos(eval_node(*n.a, p));
        case Kind::Exp: return std::exp(eval_node(*n.a, p));
        case Kind::Sqrt: {
            const double v = eval_node(*n.a, p);
            if (v <= 0.0) throw DomainError("sqrt of nonpositive value");
            return std::sqrt(v);
        }
        case Kind::Ln: {
            const double v = eval_node(*n.a, p);
            if (v <= 0.0) throw DomainError("ln of nonpositive value");
            return std::log(v);
        }
        case Kind::Add: return eval_node(*n.a, p) + eval_node(*n.b, p);
        case Kind::Sub: return eval_node(*n.a, p) - eval_node(*n.b, p);
        case Kind::Mul: return eval_node(*n.a, p) * eval_node(*n.b, p);
        case Kind::Div: {
            const double d = eval_node(*n.b, p);
            if (d == 0.0) throw DomainError("division by zero");
            return eval_node(*n.a, p) / d;
        }
        case Kind::Pow: {
            const double base = eval_node(*n.a, p);
            const double c = n.constant;
            if (c == std::nearbyint(c) && std::abs(c) <= 64.0) {
                double r = 1.0;
                const long m = static_cast<long>(std::abs(c));
                for (long k = 0; k < m; ++k) r *= base;
                if (c < 0.0) {
                    if (r == 0.0) throw DomainError("negative power of zero");
                    r = 1.0 / r;
                }
                return r;
            }
            if (base <= 0.0) throw DomainError("real power of nonpositive base");
            return std::pow(base, c);
        }
    }
    throw std::logic_error("unreachable expression kind");
}

Jet eval_jet_node(const Node& n, std::span<const double> p, int dim)
{
    switch (n.kind) {
        case Kind::Constant: return Jet::constant(n.constant, dim);
        case Kind::Variable: return Jet::variable(p[static_cast<size_t>(n.var)], n.var, dim);
        case Kind::Neg: return -eval_jet_node(*n.a, p, dim);
        case Kind::Sin: return sin(eval_jet_node(*n.a, p, dim));
        case Kind::Cos: return cos(eval_jet_node(*n.a, p, dim));
        case Kind::Exp: return exp(eval_jet_node(*n.a, p, dim));
        case Kind::Sqrt: return sqrt(eval_jet_node(*n.a, p, dim));
        case Kind::Ln: return log(eval_jet_node(*n.a, p, dim));
        case Kind::Add: return eval_jet_node(*n.a, p, dim) + eval_jet_node(*n.b, p, dim);
        case Kind::Sub: return eval_jet_node(*n.a, p, dim) - eval_jet_node(*n.b, p, dim);
        case Kind::Mul: return eval_jet_node(*n.a, p, dim) * eval_jet_node(*n.b, p, dim);
        case Kind::Div: return eval_jet_node(*n.a, p, dim) / eval_jet_node(*n.b, p, dim);
        case Kind::Pow: return pow(eval_jet_node(*n.a, p, dim), n.constant);
    }
    throw std::logic_error("unreachable expression kind");
}

} // namespace

double ScalarExpr::eval(std::span<const double> point) const
{
    assert(root_);
    return eval_node(*root_, point);
}

Jet ScalarExpr::eval_jet(std::span<const double> point) const
{
    assert(root_);
    if (point.size() > kMaxJetDim) throw std::invalid_argument("chart dimension exceeds jet capacity");
    return eval_jet_node(*root_, point, static_cast<int>(point.size()));
}

JetValue eval_jet2(const ScalarExpr& e, std::span<const double> point)
{
    const Jet j = e.eval_jet(point);
    JetValue out;
    out.value = j.v;
    out.partials.assign(j.g.begin(), j.g.begin() + j.dim);
    out.second_packed.assign(j.h.begin(), j.h.begin() + packed_size(j.dim));
    return out;
}

// -- parser --------------------------------------------------------------

namespace {

struct Parser {
    const std::string& src;
    const std::vector<std::string>& vars;
    size_t pos = 0;

    void skip_ws()
    {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    char peek()
    {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    bool accept(char c)
    {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos);
    }

    ScalarExpr parse()
    {
        ScalarExpr e = expression();
        skip_ws();
        if (pos != src.size()) throw ParseError("unexpected trailing input", pos);
        return e;
    }

    ScalarExpr expression()
    {
        ScalarExpr e = term();
        for (;;) {
            if (accept('+'))
                e = join(Kind::Add, e, term());
            else if (accept('-'))
                e = join(Kind::Sub, e, term());
            else
                return e;
        }
    }

    ScalarExpr term()
    {
        ScalarExpr e = factor();
        for (;;) {
            if (accept('*'))
                e = join(Kind::Mul, e, factor());
            else if (accept('/'))
                e = join(Kind::Div, e, factor());
            else
                return e;
        }
    }

    ScalarExpr factor()
    {
        if (accept('-')) return ScalarExpr(make_node(Kind::Neg, 0.0, -1, factor().root()));
        return power();
    }

    ScalarExpr power()
    {
        ScalarExpr base = atom();
        if (!accept('^')) return base;
        const size_t at = pos;
        ScalarExpr expo = factor(); // right associative: a^b^c = a^(b^c)
        double c;
        if (!fold_constant(expo, c))
            throw ParseError("exponent must be a numeric constant", at);
        return ScalarExpr(make_node(Kind::Pow, c, -1, base.root()));
    }

    // Exponent subtrees must fold to a literal constant.
    static bool fold_constant(const ScalarExpr& e, double& out)
    {
        const Node& n = e.node();
        switch (n.kind) {
            case Kind::Constant: out = n.constant; return true;
            case Kind::Neg: {
                double v;
                if (!fold_constant(ScalarExpr(n.a), v)) return false;
                out = -v;
                return true;
            }
            case Kind::Pow: {
                double v;
                if (!fold_constant(ScalarExpr(n.a), v)) return false;
                out = std::pow(v, n.constant);
                return true;
            }
            default: return false;
        }
    }

    ScalarExpr atom()
    {
        skip_ws();
        if (pos >= src.size()) throw ParseError("unexpected end of input", pos);
        const char c = src[pos];
        if (c == '(') {
            ++pos;
            ScalarExpr e = expression();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError("unexpected character", pos);
    }

    ScalarExpr number()
    {
        const size_t start = pos;
        double value = 0.0;
        const char* begin = src.data() + pos;
        const char* end = src.data() + src.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{}) throw ParseError("malformed number", start);
        pos += static_cast<size_t>(ptr - begin);
        return expr_constant(value);
    }

    ScalarExpr identifier()
    {
        const size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        const std::string name = src.substr(start, pos - start);

        if (peek() == '(') {
            Kind k;
            if (name == "sin")
                k = Kind::Sin;
            else if (name == "cos")
                k = Kind::Cos;
            else if (name == "exp")
                k = Kind::Exp;
            else if (name == "sqrt")
                k = Kind::Sqrt;
            else if (name == "ln")
                k = Kind::Ln;
            else
                throw ParseError("unknown function '" + name + "'", start);
            expect('(');
            ScalarExpr arg = expression();
            if (peek() == ',') throw ParseError("'" + name + "' takes exactly one argument", pos);
            expect(')');
            return ScalarExpr(make_node(k, 0.0, -1, arg.root()));
        }

        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == name) return expr_var(static_cast<int>(i));
        throw ParseError("unbound identifier '" + name + "'", start);
    }

    static ScalarExpr join(Kind k, const ScalarExpr& a, const ScalarExpr& b)
    {
        return ScalarExpr(make_node(k, 0.0, -1, a.root(), b.root()));
    }
};

} // namespace

ScalarExpr parse_expr(const std::string& source, const std::vector<std::string>& variables)
{
    Parser p{source, variables};
    return p.parse();
}

std::vector<std::string> default_variables(int dim, const std::string& stem)
{
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) names.push_back(stem + std::to_string(i));
    return names;
}

// -- printing ------------------------------------------------------------

namespace {

std::string format_double(double v)
{
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    assert(ec == std::errc{});
    return std::string(buf, ptr);
}

void print_node(const Node& n, const std::vector<std::string>& vars, std::string& out)
{
    switch (n.kind) {
        case Kind::Constant:
            if (n.constant < 0.0) {
                out += "(";
                out += format_double(n.constant);
                out += ")";
            } else {
                out += format_double(n.constant);
            }
            return;
        case Kind::Variable: out += vars.at(static_cast<size_t>(n.var)); return;
        case Kind::Neg:
            out += "(-";
            print_node(*n.a, vars, out);
            out += ")";
            return;
        case Kind::Sin:
        case Kind::Cos:
        case Kind::Exp:
        case Kind::Sqrt:
        case Kind::Ln: {
            const char* f = n.kind == Kind::Sin    ? "sin"
                            : n.kind == Kind::Cos  ? "cos"
                            : n.kind == Kind::Exp  ? "exp"
                            : n.kind == Kind::Sqrt ? "sqrt"
                                                   : "ln";
            out += f;
            out += "(";
            print_node(*n.a, vars, out);
            out += ")";
            return;
        }
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div: {
            const char op = n.kind == Kind::Add ? '+' : n.kind == Kind::Sub ? '-' : n.kind == Kind::Mul ? '*' : '/';
            out += "(";
            print_node(*n.a, vars, out);
            out += op;
            print_node(*n.b, vars, out);
            out += ")";
            return;
        }
        case Kind::Pow:
            out += "(";
            print_node(*n.a, vars, out);
            out += "^";
            if (n.constant < 0.0) {
                out += "(";
                out += format_double(n.constant);
                out += ")";
            } else {
                out += format_double(n.constant);
            }
            out += ")";
            return;
    }
}

} // namespace

std::string to_string(const ScalarExpr& e, const std::vector<std::string>& variables)
{
    std::string out;
    print_node(e.node(), variables, out);
    return out;
}

// -- finite-difference oracle ---------------------------------------------

JetValue derivative_oracle(const ScalarExpr& e, std::span<const double> point, double h)
{
    if (h <= 0.0) throw std::invalid_argument("derivative_oracle: step must be positive");
    const int d = static_cast<int>(point.size());
    std::vector<double> p(point.begin(), point.end());

    const auto at = [&](int i, double di, int j, double dj) {
        const double pi = p[static_cast<size_t>(i)];
        const double pj = p[static_cast<size_t>(j)];
        p[static_cast<size_t>(i)] += di;
        p[static_cast<size_t>(j)] += dj;
        const double v = e.eval(p);
        p[static_cast<size_t>(i)] = pi;
        p[static_cast<size_t>(j)] = pj;
        return v;
    };

    JetValue out;
    out.value = e.eval(p);
    out.partials.resize(static_cast<size_t>(d));
    out.second_packed.resize(static_cast<size_t>(packed_size(d)));

    // 4th-order central stencils.
    for (int i = 0; i < d; ++i) {
        out.partials[static_cast<size_t>(i)] =
            (at(i, -2 * h, i, 0) - 8 * at(i, -h, i, 0) + 8 * at(i, h, i, 0) - at(i, 2 * h, i, 0)) / (12 * h);
    }
    for (int i = 0; i < d; ++i) {
        out.second_packed[static_cast<size_t>(packed_index(i, i))] =
            (-at(i, -2 * h, i, 0) + 16 * at(i, -h, i, 0) - 30 * out.value + 16 * at(i, h, i, 0) -
             at(i, 2 * h, i, 0)) /
            (12 * h * h);
    }
    // Mixed partials: tensor product of two 4th-order first-derivative stencils.
    const double w[4] = {1.0, -8.0, 8.0, -1.0};
    const double s[4] = {-2.0, -1.0, 1.0, 2.0};
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < j; ++i) {
            double acc = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) acc += w[a] * w[b] * at(i, s[a] * h, j, s[b] * h);
            out.second_packed[static_cast<size_t>(packed_index(i, j))] = acc / (144 * h * h);
        }
    return out;
}

} // namespace psk
