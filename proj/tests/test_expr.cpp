#include <doctest.h>

#include <cmath>
#include <numbers>

#include "psk/expr.hpp"
#include "psk/rng.hpp"

using namespace psk;

namespace {

const std::vector<std::string> kXY = {"x0", "x1"};
const std::vector<std::string> kX = {"x0"};

double eval1(const std::string& src, double x)
{
    const double p[] = {x};
    return parse_expr(src, kX).eval(p);
}

} // namespace

TEST_CASE("parse and evaluate basic expressions")
{
    const double p2[] = {std::numbers::pi / 2.0, 3.0};
    CHECK(parse_expr("sin(x0)*x1", kXY).eval(p2) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(eval1("x0^2 + 1", 0.0) == doctest::Approx(1.0));
    CHECK(eval1("2*x0 - x0/4", 8.0) == doctest::Approx(14.0));
    CHECK(eval1("-x0^2", 3.0) == doctest::Approx(-9.0)); // unary minus binds looser than ^
    CHECK(eval1("x0^-2", 2.0) == doctest::Approx(0.25));
    CHECK(eval1("2^2^3", 1.0) == doctest::Approx(256.0)); // right associative
    CHECK(eval1("exp(ln(x0))", 5.0) == doctest::Approx(5.0));
}

TEST_CASE("parse errors carry positions and names")
{
    CHECK_THROWS_AS(parse_expr("x0 + ", kX), ParseError);
    CHECK_THROWS_AS(parse_expr("y3 + 1", kX), ParseError);       // unbound identifier
    CHECK_THROWS_AS(parse_expr("foo(x0)", kX), ParseError);      // unknown function
    CHECK_THROWS_AS(parse_expr("sin(x0, x0)", kX), ParseError);  // arity
    CHECK_THROWS_AS(parse_expr("x0 ^ x0", kX), ParseError);      // non-constant exponent
    CHECK_THROWS_AS(parse_expr("(x0", kX), ParseError);
    CHECK_THROWS_AS(parse_expr("x0 1", kX), ParseError);

    try {
        parse_expr("1 + unknown7", kX);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position == 4);
        CHECK(std::string(e.what()).find("unknown7") != std::string::npos);
    }
}

TEST_CASE("domain violations are reported")
{
    CHECK_THROWS_AS(eval1("1/x0", 0.0), DomainError);
    CHECK_THROWS_AS(eval1("sqrt(x0)", -1.0), DomainError);
    CHECK_THROWS_AS(eval1("ln(x0)", 0.0), DomainError);
    CHECK_THROWS_AS(eval1("x0^0.5", -2.0), DomainError);
}

TEST_CASE("second-order jets of elementary cases")
{
    // exp at 1: value, first and second partial all e
    const double p1[] = {1.0};
    const JetValue je = eval_jet2(parse_expr("exp(x0)", kX), p1);
    CHECK(je.value == doctest::Approx(std::numbers::e).epsilon(1e-15));
    CHECK(je.partials[0] == doctest::Approx(std::numbers::e).epsilon(1e-15));
    CHECK(je.second(0, 0) == doctest::Approx(std::numbers::e).epsilon(1e-15));

    // bilinear: value 6, partials (3,2), mixed second 1
    const double p23[] = {2.0, 3.0};
    const JetValue jb = eval_jet2(parse_expr("x0*x1", kXY), p23);
    CHECK(jb.value == doctest::Approx(6.0));
    CHECK(jb.partials[0] == doctest::Approx(3.0));
    CHECK(jb.partials[1] == doctest::Approx(2.0));
    CHECK(jb.second(0, 1) == doctest::Approx(1.0));
    CHECK(jb.second(0, 0) == doctest::Approx(0.0));

    const double p0[] = {0.0};
    const JetValue jc = eval_jet2(parse_expr("cos(x0)", kX), p0);
    CHECK(jc.value == doctest::Approx(1.0));
    CHECK(jc.partials[0] == doctest::Approx(0.0));
    CHECK(jc.second(0, 0) == doctest::Approx(-1.0));

    const double pp[] = {2.0};
    const JetValue jp = eval_jet2(parse_expr("x0^3", kX), pp);
    CHECK(jp.value == doctest::Approx(8.0));
    CHECK(jp.partials[0] == doctest::Approx(12.0));
    CHECK(jp.second(0, 0) == doctest::Approx(12.0));
}

TEST_CASE("derivative oracle on closed forms")
{
    const double p1[] = {1.0};
    const JetValue o = derivative_oracle(parse_expr("sin(x0)", kX), p1, 1e-3);
    CHECK(std::abs(o.partials[0] - std::cos(1.0)) < 1e-10);

    const JetValue oc = derivative_oracle(parse_expr("5", kX), p1, 1e-3);
    CHECK(oc.partials[0] == 0.0);
    CHECK(oc.second(0, 0) == 0.0);

    const double p3[] = {3.0};
    const JetValue oq = derivative_oracle(parse_expr("x0^2", kX), p3, 1e-2);
    CHECK(std::abs(oq.second(0, 0) - 2.0) < 1e-8);
}

namespace {

// random expression trees of bounded depth, safe to evaluate on [-1,1]^d
ScalarExpr random_expr(Rng& rng, int dim, int depth)
{
    const double pick = rng.unit();
    if (depth == 0 || pick < 0.25) {
        if (rng.unit() < 0.4) return expr_constant(std::round(rng.uniform(-4.0, 4.0) * 8.0) / 8.0);
        return expr_var(static_cast<int>(rng.uniform(0.0, static_cast<double>(dim))));
    }
    if (pick < 0.55) {
        const ScalarExpr a = random_expr(rng, dim, depth - 1);
        const ScalarExpr b = random_expr(rng, dim, depth - 1);
        const double op = rng.unit();
        if (op < 0.33) return a + b;
        if (op < 0.66) return a - b;
        return a * b;
    }
    const ScalarExpr a = random_expr(rng, dim, depth - 1);
    const double op = rng.unit();
    if (op < 0.2) return expr_sin(a);
    if (op < 0.4) return expr_cos(a);
    if (op < 0.55) return expr_exp(a);                                     // arg bounded by depth
    if (op < 0.7) return expr_sqrt(a * a + expr_constant(1.0));            // stays positive
    if (op < 0.8) return expr_ln(a * a + expr_constant(1.5));              // stays positive
    if (op < 0.9) return expr_pow(a, static_cast<double>(2 + (static_cast<int>(rng.uniform(0, 3)))));
    return -a;
}

} // namespace

TEST_CASE("jets agree with the finite-difference oracle on random expressions")
{
    Rng rng(1234);
    const int dim = 2;
    int tested = 0;
    while (tested < 1000) {
        const ScalarExpr e = random_expr(rng, dim, 4);
        const std::vector<double> p = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        JetValue exact, approx;
        try {
            exact = eval_jet2(e, p);
            approx = derivative_oracle(e, p, 1e-3);
        } catch (const DomainError&) {
            continue;
        }
        // skip wildly scaled trees; the oracle step is tuned for O(1) data
        bool sane = std::abs(exact.value) < 1e3;
        for (int i = 0; i < dim && sane; ++i)
            sane = std::abs(exact.partials[static_cast<size_t>(i)]) < 1e3 &&
                   std::abs(exact.second(i, i)) < 1e3;
        if (!sane) continue;

        for (int i = 0; i < dim; ++i) {
            const double scale = 1.0 + std::abs(exact.partials[static_cast<size_t>(i)]);
            CHECK(std::abs(exact.partials[static_cast<size_t>(i)] - approx.partials[static_cast<size_t>(i)]) / scale < 1e-6);
            for (int j = i; j < dim; ++j) {
                const double s2 = 1.0 + std::abs(exact.second(i, j));
                CHECK(std::abs(exact.second(i, j) - approx.second(i, j)) / s2 < 1e-6);
            }
        }
        ++tested;
    }
    CHECK(tested == 1000);
}

TEST_CASE("jets are linear and satisfy the product rule")
{
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const ScalarExpr e1 = random_expr(rng, 2, 3);
        const ScalarExpr e2 = random_expr(rng, 2, 3);
        const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
        const std::vector<double> p = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};

        JetValue j1, j2, jsum, jprod;
        try {
            j1 = eval_jet2(e1, p);
            j2 = eval_jet2(e2, p);
            jsum = eval_jet2(expr_constant(a) * e1 + expr_constant(b) * e2, p);
            jprod = eval_jet2(e1 * e2, p);
        } catch (const DomainError&) {
            continue;
        }
        if (std::abs(j1.value) > 1e3 || std::abs(j2.value) > 1e3) continue;

        const auto near = [](double x, double y, double scale) {
            return std::abs(x - y) <= 1e-12 * (1.0 + scale);
        };
        CHECK(near(jsum.value, a * j1.value + b * j2.value, std::abs(jsum.value)));
        CHECK(near(jprod.value, j1.value * j2.value, std::abs(jprod.value)));
        for (int i = 0; i < 2; ++i) {
            CHECK(near(jsum.partials[static_cast<size_t>(i)],
                       a * j1.partials[static_cast<size_t>(i)] + b * j2.partials[static_cast<size_t>(i)],
                       std::abs(jsum.partials[static_cast<size_t>(i)])));
            CHECK(near(jprod.partials[static_cast<size_t>(i)],
                       j1.partials[static_cast<size_t>(i)] * j2.value + j1.value * j2.partials[static_cast<size_t>(i)],
                       std::abs(jprod.partials[static_cast<size_t>(i)]) + std::abs(j1.value * j2.value)));
            for (int j = i; j < 2; ++j) {
                const double leibniz = j1.second(i, j) * j2.value + j1.value * j2.second(i, j) +
                                       j1.partials[static_cast<size_t>(i)] * j2.partials[static_cast<size_t>(j)] +
                                       j1.partials[static_cast<size_t>(j)] * j2.partials[static_cast<size_t>(i)];
                CHECK(near(jprod.second(i, j), leibniz, std::abs(leibniz)));
            }
        }
    }
}

TEST_CASE("print then reparse is evaluation-identical")
{
    Rng rng(42);
    for (int trial = 0; trial < 120; ++trial) {
        const ScalarExpr e = random_expr(rng, 2, 4);
        const std::string printed = to_string(e, kXY);
        const ScalarExpr back = parse_expr(printed, kXY);
        for (int k = 0; k < 100; ++k) {
            const std::vector<double> p = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            double v1, v2;
            try {
                v1 = e.eval(p);
                v2 = back.eval(p);
            } catch (const DomainError&) {
                continue;
            }
            CHECK(v1 == v2); // bit-exact round trip
        }
    }
}
