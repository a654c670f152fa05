#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lmx::op {

struct OffspringParser {
    std::string split_delimiter = "\n";
    std::string item_prefix;
    // Applied to the decoded item. Empty = accept everything.
    std::function<bool(std::string_view)> validator;
    // In-prompt form back to a genotype; nullopt rejects the line. Empty = identity.
    std::function<std::optional<std::string>(std::string_view)> decode;
    std::size_t max_children = 3;
    bool dedup_against_parents = false;
    // Trimmed lines shorter than this are dropped before validation.
    std::size_t min_chars = 2;
};

struct ParsedOffspring {
    std::vector<std::string> children;
    std::size_t considered = 0;  // non-empty lines that reached validation
    std::size_t rejected = 0;    // of those, failed decode or validation
};

// Split, strip prefix, trim, drop short lines, decode, validate, optionally
// drop parent copies, then keep at most max_children in order.
ParsedOffspring parse_offspring(std::string_view completion, const OffspringParser& parser,
                                std::span<const std::string> parents);

std::string_view trim(std::string_view s) noexcept;

} // namespace lmx::op
