#include "lmx/backend/subtree_mock.hpp"

#include <vector>

#include "lmx/symreg/crossover.hpp"
#include "lmx/symreg/parser.hpp"

namespace lmx::backend {

CompletionResponse SubtreeMockEngine::complete(const CompletionRequest& req)
{
    std::vector<symreg::Expr> parents;
    std::size_t start = 0;
    while (start <= req.prompt.size()) {
        auto nl = req.prompt.find('\n', start);
        if (nl == std::string::npos) {
            nl = req.prompt.size();
        }
        const std::string_view line(req.prompt.data() + start, nl - start);
        // Header and junk lines simply fail to parse.
        if (auto e = symreg::parse_expression(line)) {
            parents.push_back(std::move(*e));
        }
        start = nl + 1;
    }

    CompletionResponse resp;
    resp.finish_reason = FinishReason::stop_sequence;
    if (parents.empty()) {
        return resp;
    }

    const std::uint64_t seed = req.params.seed ? core::stream_key(seed_, std::to_string(*req.params.seed))
                                               : core::stream_key(seed_, req.prompt);
    core::RngStream rng(seed, label_);
    const auto& a = parents[rng.uniform_index(parents.size())];
    const auto& b = parents[rng.uniform_index(parents.size())];
    std::string text = symreg::to_string(symreg::subtree_crossover(a, b, rng)) + "\n";

    apply_stop_sequences(text, req.params.stop);
    if (apply_length_limit(text, req.params.max_new_tokens)) {
        resp.finish_reason = FinishReason::length;
    }
    resp.text = std::move(text);
    return resp;
}

std::unique_ptr<SubtreeMockEngine> make_subtree_mock(core::RngStream rng)
{
    return std::make_unique<SubtreeMockEngine>(std::move(rng));
}

} // namespace lmx::backend
