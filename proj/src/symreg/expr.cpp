#include "lmx/symreg/expr.hpp"

#include <algorithm>
#include <cmath>

#include "lmx/core/error.hpp"
#include "lmx/core/io.hpp"

namespace lmx::symreg {

std::string_view to_string(UnaryOp op) noexcept
{
    switch (op) {
    case UnaryOp::neg: return "-";
    case UnaryOp::sin: return "sin";
    case UnaryOp::cos: return "cos";
    case UnaryOp::tan: return "tan";
    case UnaryOp::exp: return "exp";
    case UnaryOp::log: return "log";
    case UnaryOp::sqrt: return "sqrt";
    case UnaryOp::abs: return "abs";
    }
    return "?";
}

std::string_view to_string(BinaryOp op) noexcept
{
    switch (op) {
    case BinaryOp::add: return " + ";
    case BinaryOp::sub: return " - ";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::pow: return "**";
    }
    return "?";
}

Expr Expr::constant(double v)
{
    Expr e;
    e.kind = Kind::constant;
    e.value = v;
    return e;
}

Expr Expr::variable(std::size_t index)
{
    Expr e;
    e.kind = Kind::variable;
    e.index = index;
    return e;
}

Expr Expr::unary(UnaryOp op, Expr child)
{
    Expr e;
    e.kind = Kind::unary;
    e.unary_op = op;
    e.children.push_back(std::move(child));
    return e;
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs)
{
    Expr e;
    e.kind = Kind::binary;
    e.binary_op = op;
    e.children.reserve(2);
    e.children.push_back(std::move(lhs));
    e.children.push_back(std::move(rhs));
    return e;
}

std::size_t expression_size(const Expr& e) noexcept
{
    std::size_t n = 1;
    for (const auto& c : e.children) {
        n += expression_size(c);
    }
    return n;
}

std::size_t expression_depth(const Expr& e) noexcept
{
    std::size_t d = 0;
    for (const auto& c : e.children) {
        d = std::max(d, 1 + expression_depth(c));
    }
    return d;
}

std::size_t max_variable(const Expr& e) noexcept
{
    std::size_t m = e.kind == Expr::Kind::variable ? e.index : 0;
    for (const auto& c : e.children) {
        m = std::max(m, max_variable(c));
    }
    return m;
}

namespace {

// Binding strength used to decide where parentheses are needed.
int precedence(const Expr& e)
{
    switch (e.kind) {
    case Expr::Kind::constant: return std::signbit(e.value) ? 3 : 5;
    case Expr::Kind::variable: return 5;
    case Expr::Kind::unary: return e.unary_op == UnaryOp::neg ? 3 : 5;
    case Expr::Kind::binary:
        switch (e.binary_op) {
        case BinaryOp::add:
        case BinaryOp::sub: return 1;
        case BinaryOp::mul:
        case BinaryOp::div: return 2;
        case BinaryOp::pow: return 4;
        }
    }
    return 5;
}

void emit(const Expr& e, std::string& out);

void emit_wrapped(const Expr& e, bool wrap, std::string& out)
{
    if (wrap) {
        out += '(';
    }
    emit(e, out);
    if (wrap) {
        out += ')';
    }
}

void emit(const Expr& e, std::string& out)
{
    switch (e.kind) {
    case Expr::Kind::constant:
        if (std::signbit(e.value)) {
            out += '-';
            out += core::format_double(-e.value);
        } else {
            out += core::format_double(e.value);
        }
        return;
    case Expr::Kind::variable:
        out += 'x';
        out += std::to_string(e.index);
        return;
    case Expr::Kind::unary:
        if (e.unary_op == UnaryOp::neg) {
            out += '-';
            emit_wrapped(e.children[0], precedence(e.children[0]) < 3, out);
        } else {
            out += to_string(e.unary_op);
            emit_wrapped(e.children[0], true, out);
        }
        return;
    case Expr::Kind::binary: {
        const int p = precedence(e);
        const int lp = precedence(e.children[0]);
        const int rp = precedence(e.children[1]);
        bool wrap_left = lp < p;
        bool wrap_right = rp <= p;
        if (e.binary_op == BinaryOp::pow) {
            wrap_left = lp <= p;
            wrap_right = rp < 3;
        }
        emit_wrapped(e.children[0], wrap_left, out);
        out += to_string(e.binary_op);
        emit_wrapped(e.children[1], wrap_right, out);
        return;
    }
    }
}

template <typename E>
E* find_preorder(E& e, std::size_t& remaining)
{
    if (remaining == 0) {
        return &e;
    }
    --remaining;
    for (auto& c : e.children) {
        if (auto* hit = find_preorder(c, remaining)) {
            return hit;
        }
    }
    return nullptr;
}

} // namespace

std::string to_string(const Expr& e)
{
    std::string out;
    emit(e, out);
    return out;
}

const Expr& node_at(const Expr& e, std::size_t preorder_index)
{
    std::size_t r = preorder_index;
    const Expr* hit = find_preorder(e, r);
    if (!hit) {
        throw PreconditionError("node index out of range");
    }
    return *hit;
}

Expr& node_at(Expr& e, std::size_t preorder_index)
{
    std::size_t r = preorder_index;
    Expr* hit = find_preorder(e, r);
    if (!hit) {
        throw PreconditionError("node index out of range");
    }
    return *hit;
}

} // namespace lmx::symreg
