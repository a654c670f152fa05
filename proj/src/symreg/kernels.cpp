#include "lmx/symreg/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "lmx/core/error.hpp"

namespace lmx::symreg {

namespace {

double apply(UnaryOp op, double a)
{
    switch (op) {
    case UnaryOp::neg: return -a;
    case UnaryOp::sin: return std::sin(a);
    case UnaryOp::cos: return std::cos(a);
    case UnaryOp::tan: return std::tan(a);
    case UnaryOp::exp: return std::exp(a);
    case UnaryOp::log: return std::log(a);
    case UnaryOp::sqrt: return std::sqrt(a);
    case UnaryOp::abs: return std::fabs(a);
    }
    return a;
}

double apply(BinaryOp op, double a, double b)
{
    switch (op) {
    case BinaryOp::add: return a + b;
    case BinaryOp::sub: return a - b;
    case BinaryOp::mul: return a * b;
    case BinaryOp::div: return a / b;
    case BinaryOp::pow: return std::pow(a, b);
    }
    return a;
}

} // namespace

Program::Program(const Expr& e)
{
    std::size_t depth = 0;
    auto walk = [&](auto&& self, const Expr& n) -> void {
        for (const auto& c : n.children) {
            self(self, c);
        }
        Instr in{};
        switch (n.kind) {
        case Expr::Kind::constant:
            in.code = Instr::Code::constant;
            in.value = n.value;
            ++depth;
            break;
        case Expr::Kind::variable:
            in.code = Instr::Code::variable;
            in.index = n.index;
            max_var_ = std::max(max_var_, n.index);
            ++depth;
            break;
        case Expr::Kind::unary:
            in.code = Instr::Code::unary;
            in.uop = n.unary_op;
            break;
        case Expr::Kind::binary:
            in.code = Instr::Code::binary;
            in.bop = n.binary_op;
            --depth;
            break;
        }
        stack_depth_ = std::max(stack_depth_, depth);
        code_.push_back(in);
    };
    walk(walk, e);
}

std::optional<double> Program::evaluate_row(std::span<const double> row) const
{
    if (max_var_ > row.size()) {
        return std::nullopt;
    }
    double small[64];
    std::vector<double> big;
    double* stack = small;
    if (stack_depth_ > 64) {
        big.resize(stack_depth_);
        stack = big.data();
    }
    std::size_t top = 0;
    for (const auto& in : code_) {
        double v = 0.0;
        switch (in.code) {
        case Instr::Code::constant:
            v = in.value;
            stack[top++] = v;
            break;
        case Instr::Code::variable:
            v = row[in.index - 1];
            stack[top++] = v;
            break;
        case Instr::Code::unary:
            v = apply(in.uop, stack[top - 1]);
            stack[top - 1] = v;
            break;
        case Instr::Code::binary:
            v = apply(in.bop, stack[top - 2], stack[top - 1]);
            --top;
            stack[top - 1] = v;
            break;
        }
        if (!std::isfinite(v)) {
            return std::nullopt;
        }
    }
    return stack[0];
}

namespace kernels {

std::optional<std::vector<double>> evaluate_serial(const Expr& e, const Matrix& X)
{
    const Program prog(e);
    if (prog.max_variable() > X.cols) {
        return std::nullopt;
    }
    std::vector<double> out(X.rows);
    for (std::size_t r = 0; r < X.rows; ++r) {
        auto v = prog.evaluate_row(X.row(r));
        if (!v) {
            return std::nullopt;
        }
        out[r] = *v;
    }
    return out;
}

std::optional<std::vector<double>> evaluate_parallel(const Expr& e, const Matrix& X)
{
    const Program prog(e);
    if (prog.max_variable() > X.cols) {
        return std::nullopt;
    }
    std::vector<double> out(X.rows);
    const auto n = static_cast<std::ptrdiff_t>(X.rows);
    int ok = 1;
#pragma omp parallel for schedule(static) reduction(min : ok)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        if (!ok) {
            continue;
        }
        auto v = prog.evaluate_row(X.row(static_cast<std::size_t>(r)));
        if (v) {
            out[static_cast<std::size_t>(r)] = *v;
        } else {
            ok = 0;
        }
    }
    if (!ok) {
        return std::nullopt;
    }
    return out;
}

namespace {

void check_r2_inputs(std::span<const double> y, std::span<const double> y_hat)
{
    if (y.size() != y_hat.size()) {
        throw PreconditionError("r2: length mismatch");
    }
    if (y.size() < 2) {
        throw PreconditionError("r2: need at least two samples");
    }
}

} // namespace

double r2_serial(std::span<const double> y, std::span<const double> y_hat)
{
    check_r2_inputs(y, y_hat);
    double sum = 0.0;
    for (double v : y) {
        sum += v;
    }
    const double mean = sum / static_cast<double>(y.size());
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - mean;
        const double r = y[i] - y_hat[i];
        ss_tot += d * d;
        ss_res += r * r;
    }
    if (ss_tot == 0.0) {
        throw PreconditionError("r2: target has zero variance");
    }
    return 1.0 - ss_res / ss_tot;
}

double r2_parallel(std::span<const double> y, std::span<const double> y_hat)
{
    check_r2_inputs(y, y_hat);
    const std::size_t n = y.size();
    const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
    const auto nb = static_cast<std::ptrdiff_t>(blocks);

    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t hi = std::min(n, lo + kReductionBlock);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            s += y[i];
        }
        partial[static_cast<std::size_t>(b)] = s;
    }
    double sum = 0.0;
    for (double s : partial) {
        sum += s;
    }
    const double mean = sum / static_cast<double>(n);

    std::vector<double> tot(blocks, 0.0);
    std::vector<double> res(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t hi = std::min(n, lo + kReductionBlock);
        double t = 0.0;
        double r = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double d = y[i] - mean;
            const double e = y[i] - y_hat[i];
            t += d * d;
            r += e * e;
        }
        tot[static_cast<std::size_t>(b)] = t;
        res[static_cast<std::size_t>(b)] = r;
    }
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        ss_tot += tot[b];
        ss_res += res[b];
    }
    if (ss_tot == 0.0) {
        throw PreconditionError("r2: target has zero variance");
    }
    return 1.0 - ss_res / ss_tot;
}

} // namespace kernels

std::optional<std::vector<double>> evaluate(const Expr& e, const Matrix& X)
{
    return kernels::evaluate_parallel(e, X);
}

double r2(std::span<const double> y, std::span<const double> y_hat)
{
    return kernels::r2_parallel(y, y_hat);
}

} // namespace lmx::symreg
