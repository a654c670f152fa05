#include "lmx/op/prompt.hpp"

#include <algorithm>
#include <numeric>

#include "lmx/core/error.hpp"

namespace lmx::op {

std::vector<std::size_t> prompt_order(std::span<const core::Individual> parents, Ordering ordering,
                                      core::RngStream& rng)
{
    std::vector<std::size_t> order(parents.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    switch (ordering) {
    case Ordering::given:
        break;
    case Ordering::random:
        std::shuffle(order.begin(), order.end(), rng.engine());
        break;
    case Ordering::ascending:
    case Ordering::descending:
        for (const auto& p : parents) {
            if (!p.evaluated()) {
                throw PreconditionError("fitness-ordered prompts need evaluated parents");
            }
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return ordering == Ordering::ascending ? parents[a].fitness() < parents[b].fitness()
                                                   : parents[a].fitness() > parents[b].fitness();
        });
        break;
    }
    return order;
}

std::string format_prompt(std::span<const core::Individual> parents, const PromptTemplate& tmpl,
                          core::RngStream& rng)
{
    if (parents.empty()) {
        throw PreconditionError("format_prompt: no parents");
    }
    if (tmpl.delimiter.empty()) {
        throw PreconditionError("format_prompt: delimiter must be non-empty");
    }
    std::string out;
    if (tmpl.header) {
        out += *tmpl.header;
        out += tmpl.delimiter;
    }
    for (std::size_t i : prompt_order(parents, tmpl.ordering, rng)) {
        out += tmpl.item_prefix;
        out += tmpl.encode ? tmpl.encode(parents[i].genotype()) : parents[i].genotype();
        out += tmpl.delimiter;
    }
    if (tmpl.trailer) {
        out += *tmpl.trailer;
    }
    if (out.size() > tmpl.char_budget) {
        throw BudgetExceeded("prompt of " + std::to_string(out.size()) + " chars exceeds budget of " +
                             std::to_string(tmpl.char_budget));
    }
    return out;
}

} // namespace lmx::op
