#include "lmx/symreg/benchmarks.hpp"

#include <algorithm>
#include <sstream>

#include "lmx/core/error.hpp"
#include "lmx/core/io.hpp"
#include "lmx/symreg/parser.hpp"

namespace lmx::symreg {

std::vector<Expr> parse_benchmarks(std::string_view text)
{
    std::vector<Expr> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line.erase(std::remove(line.begin(), line.end(), '\''), line.end());
        std::istringstream fields(line);
        std::size_t arity = 0;
        if (!(fields >> arity)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            throw ConfigError("benchmarks:" + std::to_string(line_no) + ": expected a variable count");
        }
        std::string rest;
        std::getline(fields, rest);
        ParseError err;
        auto e = parse_expression(rest, &err);
        if (!e) {
            throw ConfigError("benchmarks:" + std::to_string(line_no) + ": " + err.message);
        }
        if (max_variable(*e) > arity) {
            throw ConfigError("benchmarks:" + std::to_string(line_no) + ": uses more than " + std::to_string(arity) +
                              " variables");
        }
        out.push_back(std::move(*e));
    }
    return out;
}

std::vector<Expr> load_benchmarks(const std::filesystem::path& path)
{
    return parse_benchmarks(core::read_file(path));
}

namespace {

void remap(Expr& e, const std::vector<std::size_t>& mapping)
{
    if (e.kind == Expr::Kind::variable) {
        e.index = mapping[e.index];
    }
    for (auto& c : e.children) {
        remap(c, mapping);
    }
}

} // namespace

Expr sample_benchmark(const std::vector<Expr>& benchmarks, std::size_t var_count, core::RngStream& rng)
{
    if (benchmarks.empty()) {
        throw PreconditionError("no benchmark expressions to sample from");
    }
    if (var_count == 0) {
        throw PreconditionError("var_count must be positive");
    }
    Expr e = benchmarks[rng.uniform_index(benchmarks.size())];
    std::vector<std::size_t> mapping(max_variable(e) + 1, 0);
    for (std::size_t v = 1; v < mapping.size(); ++v) {
        mapping[v] = 1 + rng.uniform_index(var_count);
    }
    remap(e, mapping);
    return e;
}

std::vector<Expr> seed_population(const std::vector<Expr>& benchmarks, std::size_t n, std::size_t var_count,
                                  core::RngStream& rng)
{
    std::vector<Expr> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(sample_benchmark(benchmarks, var_count, rng));
    }
    return out;
}

} // namespace lmx::symreg
