#include "lmx/op/offspring.hpp"

#include <algorithm>

namespace lmx::op {

std::string_view trim(std::string_view s) noexcept
{
    constexpr std::string_view ws = " \t\r\n\v\f";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

ParsedOffspring parse_offspring(std::string_view completion, const OffspringParser& parser,
                                std::span<const std::string> parents)
{
    ParsedOffspring out;
    const std::string_view delim = parser.split_delimiter.empty() ? std::string_view("\n") : parser.split_delimiter;

    std::size_t start = 0;
    while (start <= completion.size() && out.children.size() < parser.max_children) {
        auto end = completion.find(delim, start);
        if (end == std::string_view::npos) {
            end = completion.size();
        }
        std::string_view item = trim(completion.substr(start, end - start));
        start = end + delim.size();

        const std::string_view prefix = trim(parser.item_prefix);
        if (!prefix.empty() && item.substr(0, prefix.size()) == prefix) {
            item = trim(item.substr(prefix.size()));
        }
        if (item.size() < parser.min_chars || item.empty()) {
            continue;
        }
        ++out.considered;

        std::optional<std::string> decoded = parser.decode ? parser.decode(item) : std::optional<std::string>(item);
        if (!decoded || (parser.validator && !parser.validator(*decoded))) {
            ++out.rejected;
            continue;
        }
        if (parser.dedup_against_parents &&
            std::find(parents.begin(), parents.end(), *decoded) != parents.end()) {
            continue;
        }
        out.children.push_back(std::move(*decoded));
    }
    return out;
}

} // namespace lmx::op
