#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lmx/core/individual.hpp"
#include "lmx/core/rng.hpp"

namespace lmx::op {

enum class Ordering { random, ascending, descending, given };

enum class TrailerMode {
    literal,        // appended as-is, e.g. an empty "Prompt:"
    forced_prefix   // opening of the first child; prepended to the completion before parsing
};

/// How parents are laid out in a prompt.
///
///   [header delim] prefix+p1 delim prefix+p2 ... delim [trailer]
struct PromptTemplate {
    std::optional<std::string> header;
    std::string item_prefix;
    std::string delimiter = "\n";
    std::optional<std::string> trailer;
    TrailerMode trailer_mode = TrailerMode::literal;
    Ordering ordering = Ordering::random;
    // Prompt length cap in characters (about 500 tokens at 4 chars/token).
    std::size_t char_budget = 2000;
    // Maps a genotype to its in-prompt form (e.g. the underscore codec).
    std::function<std::string(std::string_view)> encode;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parent order the template's policy dictates. Sorted orders are stable and
// need every parent evaluated (PreconditionError otherwise).
std::vector<std::size_t> prompt_order(std::span<const core::Individual> parents, Ordering ordering,
                                      core::RngStream& rng);

// Throws PreconditionError for no parents or an empty delimiter, and
// BudgetExceeded when the prompt is longer than template.char_budget.
std::string format_prompt(std::span<const core::Individual> parents, const PromptTemplate& tmpl,
                          core::RngStream& rng);

} // namespace lmx::op
