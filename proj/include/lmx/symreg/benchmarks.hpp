#pragma once

#include <cstddef>
#include <filesystem>
#include <string_view>
#include <vector>

#include "lmx/core/rng.hpp"
#include "lmx/symreg/expr.hpp"

namespace lmx::symreg {

// One expression per line, prefixed by its variable count:
//
//   # comment
//   2 sin(x1') + sin(x2'**2)
//
// Primes on source variables are optional.
std::vector<Expr> parse_benchmarks(std::string_view text);
std::vector<Expr> load_benchmarks(const std::filesystem::path& path);

// Uniform benchmark choice, then every source variable is mapped
// independently and uniformly onto x1..x<var_count>.
Expr sample_benchmark(const std::vector<Expr>& benchmarks, std::size_t var_count, core::RngStream& rng);
std::vector<Expr> seed_population(const std::vector<Expr>& benchmarks, std::size_t n, std::size_t var_count,
                                  core::RngStream& rng);

} // namespace lmx::symreg
