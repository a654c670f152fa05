#include "lmx/symreg/simplify.hpp"

#include <cmath>

namespace lmx::symreg {

namespace {

double fold(UnaryOp op, double a)
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

double fold(BinaryOp op, double a, double b)
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

Expr simplify(const Expr& e)
{
    switch (e.kind) {
    case Expr::Kind::constant:
    case Expr::Kind::variable:
        return e;
    case Expr::Kind::unary: {
        Expr c = simplify(e.children[0]);
        if (c.is_constant()) {
            const double v = fold(e.unary_op, c.value);
            if (std::isfinite(v)) {
                return Expr::constant(v);
            }
        }
        if (e.unary_op == UnaryOp::neg && c.kind == Expr::Kind::unary && c.unary_op == UnaryOp::neg) {
            return std::move(c.children[0]);
        }
        return Expr::unary(e.unary_op, std::move(c));
    }
    case Expr::Kind::binary: {
        Expr l = simplify(e.children[0]);
        Expr r = simplify(e.children[1]);
        if (l.is_constant() && r.is_constant()) {
            const double v = fold(e.binary_op, l.value, r.value);
            if (std::isfinite(v)) {
                return Expr::constant(v);
            }
        }
        switch (e.binary_op) {
        case BinaryOp::add:
            if (l.is_constant(0.0)) return r;
            if (r.is_constant(0.0)) return l;
            break;
        case BinaryOp::sub:
            if (r.is_constant(0.0)) return l;
            break;
        case BinaryOp::mul:
            if (l.is_constant(0.0) || r.is_constant(0.0)) return Expr::constant(0.0);
            if (l.is_constant(1.0)) return r;
            if (r.is_constant(1.0)) return l;
            break;
        case BinaryOp::div:
            if (r.is_constant(1.0)) return l;
            break;
        case BinaryOp::pow:
            if (r.is_constant(1.0)) return l;
            break;
        }
        return Expr::binary(e.binary_op, std::move(l), std::move(r));
    }
    }
    return e;
}

} // namespace lmx::symreg
