#include <doctest.h>

#include <cstring>

#include <omp.h>

#include "lmx/core/rng.hpp"
#include "lmx/symreg/crossover.hpp"
#include "lmx/symreg/kernels.hpp"
#include "lmx/symreg/parser.hpp"
#include "oracle.hpp"

using namespace lmx;
using namespace lmx::symreg;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, core::RngStream& rng)
{
    Matrix m;
    m.rows = rows;
    m.cols = cols;
    m.data.resize(rows * cols);
    for (auto& v : m.data) {
        v = rng.uniform(-3.0, 3.0);
    }
    return m;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("parallel evaluation is bitwise identical to serial and to the tree walk")
{
    core::RngStream rng(5, "kernels");
    const Matrix X = random_matrix(5300, 2, rng);
    std::size_t valid = 0;
    for (int i = 0; i < 200; ++i) {
        const Expr e = random_expression(6, 2, rng);
        const auto s = kernels::evaluate_serial(e, X);
        const auto p = kernels::evaluate_parallel(e, X);
        const auto o = oracle::eval_all(e, X);
        REQUIRE(s.has_value() == p.has_value());
        REQUIRE(s.has_value() == o.has_value());
        if (s) {
            ++valid;
            CHECK(bitwise_equal(*s, *p));
            CHECK(bitwise_equal(*s, *o));
        }
    }
    CHECK(valid > 50);
}

TEST_CASE("evaluation result does not depend on the thread count")
{
    core::RngStream rng(6, "threads");
    const Matrix X = random_matrix(3000, 2, rng);
    const Expr e = *parse_expression("sin(1.5*x1)*cos(0.5*x2) + x1**2/(1 + x2**2)");
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = kernels::evaluate_parallel(e, X);
    omp_set_num_threads(4);
    const auto four = kernels::evaluate_parallel(e, X);
    omp_set_num_threads(saved);
    REQUIRE(one);
    REQUIRE(four);
    CHECK(bitwise_equal(*one, *four));
}

TEST_CASE("r2 reduction is thread-count independent and matches the reference")
{
    core::RngStream rng(7, "r2");
    for (std::size_t n : {2UL, 3UL, 1023UL, 1024UL, 1025UL, 5300UL, 100000UL}) {
        std::vector<double> y(n), y_hat(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.uniform(-5, 5);
            y_hat[i] = y[i] + rng.uniform(-1, 1);
        }
        const int saved = omp_get_max_threads();
        omp_set_num_threads(1);
        const double a = kernels::r2_parallel(y, y_hat);
        omp_set_num_threads(3);
        const double b = kernels::r2_parallel(y, y_hat);
        omp_set_num_threads(saved);
        CHECK(a == b);
        CHECK(r2(y, y_hat) == a);
        const double ref = oracle::r2(y, y_hat);
        CHECK(std::abs(a - ref) < 1e-12);
        CHECK(std::abs(kernels::r2_serial(y, y_hat) - ref) < 1e-12);
    }
}

TEST_CASE("a single bad row invalidates the whole evaluation in both kernels")
{
    Matrix X;
    X.cols = 1;
    X.rows = 4000;
    X.data.assign(4000, 2.0);
    X.data[3999] = 0.0;
    const Expr e = *parse_expression("1/x1");
    CHECK_FALSE(kernels::evaluate_serial(e, X));
    CHECK_FALSE(kernels::evaluate_parallel(e, X));
    X.data[3999] = 4.0;
    REQUIRE(kernels::evaluate_parallel(e, X));
    CHECK(kernels::evaluate_parallel(e, X)->back() == 0.25);
}

TEST_CASE("deep expressions spill past the inline stack")
{
    // right-leaning chain x1 + (x1 + (... + x1)) needs a deep operand stack
    Expr e = Expr::variable(1);
    for (int i = 0; i < 150; ++i) {
        e = Expr::binary(BinaryOp::add, Expr::variable(1), e);
    }
    Matrix X;
    X.cols = 1;
    X.rows = 3;
    X.data = {1.0, 2.0, -0.5};
    const auto s = kernels::evaluate_serial(e, X);
    const auto p = kernels::evaluate_parallel(e, X);
    REQUIRE(s);
    REQUIRE(p);
    CHECK((*s)[0] == 151.0);
    CHECK((*p)[1] == 302.0);
    CHECK((*p)[2] == -75.5);
}

TEST_CASE("program reports the largest variable and rejects short rows")
{
    const Program prog(*parse_expression("x3*x1"));
    CHECK(prog.max_variable() == 3);
    const std::vector<double> row{2.0, 0.0, 4.0};
    CHECK(prog.evaluate_row(row) == std::optional<double>(8.0));
    Matrix narrow;
    narrow.cols = 2;
    narrow.rows = 1;
    narrow.data = {1.0, 1.0};
    CHECK_FALSE(kernels::evaluate_serial(*parse_expression("x3*x1"), narrow));
    CHECK_FALSE(kernels::evaluate_parallel(*parse_expression("x3*x1"), narrow));
}

TEST_CASE("empty matrix evaluates to an empty vector")
{
    Matrix X;
    X.cols = 2;
    auto s = kernels::evaluate_serial(*parse_expression("x1+x2"), X);
    auto p = kernels::evaluate_parallel(*parse_expression("x1+x2"), X);
    REQUIRE(s);
    REQUIRE(p);
    CHECK(s->empty());
    CHECK(p->empty());
}
