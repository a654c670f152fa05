#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lmx/symreg/expr.hpp"

namespace lmx::symreg {

/// Row-major sample matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    [[nodiscard]] std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

/// Flat postfix form of an Expr, evaluated row by row with a small stack.
class Program {
public:
    explicit Program(const Expr& e);

    // nullopt when any intermediate value is non-finite.
    [[nodiscard]] std::optional<double> evaluate_row(std::span<const double> row) const;
    [[nodiscard]] std::size_t max_variable() const noexcept { return max_var_; }

private:
    struct Instr {
        enum class Code { constant, variable, unary, binary } code;
        double value;
        std::size_t index;
        UnaryOp uop;
        BinaryOp bop;
    };
    std::vector<Instr> code_;
    std::size_t max_var_ = 0;
    std::size_t stack_depth_ = 0;
};

namespace kernels {

// Reference implementations. Evaluation fails as a whole when any row does,
// or when the expression references a column the matrix lacks.
std::optional<std::vector<double>> evaluate_serial(const Expr& e, const Matrix& X);
double r2_serial(std::span<const double> y, std::span<const double> y_hat);

// OpenMP versions. Evaluation is bitwise identical to the serial one. R^2
// sums fixed-size blocks and combines them in block order, so the result
// does not depend on the thread count.
std::optional<std::vector<double>> evaluate_parallel(const Expr& e, const Matrix& X);
double r2_parallel(std::span<const double> y, std::span<const double> y_hat);

inline constexpr std::size_t kReductionBlock = 1024;

} // namespace kernels

// Dispatches to the parallel kernel.
std::optional<std::vector<double>> evaluate(const Expr& e, const Matrix& X);

// 1 - SS_res / SS_tot. Throws PreconditionError for fewer than two samples,
// mismatched lengths, or zero variance in y.
double r2(std::span<const double> y, std::span<const double> y_hat);

} // namespace lmx::symreg
