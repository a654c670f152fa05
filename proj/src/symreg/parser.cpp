#include "lmx/symreg/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace lmx::symreg {

namespace {

constexpr std::size_t kMaxNesting = 256;

struct Failure {
    std::size_t position;
    std::string message;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse()
    {
        Expr e = expr();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return e;
    }

private:
    [[noreturn]] void fail(std::string message) const { throw Failure{pos_, std::move(message)}; }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool peek(std::string_view tok)
    {
        skip_ws();
        return text_.substr(pos_, tok.size()) == tok;
    }

    bool accept(std::string_view tok)
    {
        if (peek(tok)) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view tok)
    {
        if (!accept(tok)) {
            fail("expected '" + std::string(tok) + "'");
        }
    }

    struct Nest {
        explicit Nest(Parser& p) : p_(p)
        {
            if (++p_.depth_ > kMaxNesting) {
                p_.fail("expression nested too deeply");
            }
        }
        ~Nest() { --p_.depth_; }
        Parser& p_;
    };

    Expr expr()
    {
        Nest guard(*this);
        Expr lhs = term();
        while (true) {
            if (accept("+")) {
                lhs = Expr::binary(BinaryOp::add, std::move(lhs), term());
            } else if (accept("-")) {
                lhs = Expr::binary(BinaryOp::sub, std::move(lhs), term());
            } else {
                return lhs;
            }
        }
    }

    Expr term()
    {
        Expr lhs = unary();
        while (true) {
            if (peek("**")) {
                fail("unexpected '**'");
            }
            if (accept("*")) {
                lhs = Expr::binary(BinaryOp::mul, std::move(lhs), unary());
            } else if (accept("/")) {
                lhs = Expr::binary(BinaryOp::div, std::move(lhs), unary());
            } else {
                return lhs;
            }
        }
    }

    Expr unary()
    {
        Nest guard(*this);
        if (accept("-")) {
            return Expr::unary(UnaryOp::neg, unary());
        }
        if (accept("+")) {
            return unary();
        }
        return power();
    }

    Expr power()
    {
        Expr base = primary();
        if (accept("**")) {
            return Expr::binary(BinaryOp::pow, std::move(base), unary());
        }
        return base;
    }

    Expr primary()
    {
        skip_ws();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return identifier();
        }
        if (accept("(")) {
            Expr inner = expr();
            expect(")");
            return inner;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Expr number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t n = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) {
            fail("malformed number");
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            const std::size_t save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                ++pos_;
            }
            if (digits() == 0) {
                pos_ = save;
            }
        }
        double v = 0.0;
        const auto* first = text_.data() + start;
        const auto* last = text_.data() + pos_;
        // from_chars rejects a leading '.', so parse ".5" as "0.5".
        std::string tmp;
        if (*first == '.') {
            tmp = "0" + std::string(first, last);
            first = tmp.data();
            last = tmp.data() + tmp.size();
        }
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
            fail("malformed number");
        }
        return Expr::constant(v);
    }

    Expr identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name.size() >= 2 && name[0] == 'x' && name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
            std::size_t idx = 0;
            auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
            if (ec != std::errc() || idx == 0) {
                pos_ = start;
                fail("bad variable '" + std::string(name) + "'");
            }
            return Expr::variable(idx);
        }
        static constexpr std::pair<std::string_view, UnaryOp> funcs[] = {
            {"sin", UnaryOp::sin},   {"cos", UnaryOp::cos},   {"tan", UnaryOp::tan}, {"exp", UnaryOp::exp},
            {"log", UnaryOp::log},   {"sqrt", UnaryOp::sqrt}, {"abs", UnaryOp::abs},
        };
        for (const auto& [fname, op] : funcs) {
            if (name == fname) {
                expect("(");
                Expr arg = expr();
                expect(")");
                return Expr::unary(op, std::move(arg));
            }
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t depth_ = 0;
};

} // namespace

std::optional<Expr> parse_expression(std::string_view text, ParseError* error)
{
    try {
        return Parser(text).parse();
    } catch (const Failure& f) {
        if (error) {
            error->position = f.position;
            error->message = f.message;
        }
        return std::nullopt;
    }
}

} // namespace lmx::symreg
