#include "lmx/analysis/ordering.hpp"

#include <sstream>

#include "lmx/binary/domain.hpp"
#include "lmx/core/error.hpp"
#include "lmx/core/individual.hpp"
#include "lmx/op/lmx.hpp"

namespace lmx::analysis {

std::size_t OrderingHistogram::total() const
{
    std::size_t n = 0;
    for (auto c : counts) {
        n += c;
    }
    return n;
}

double OrderingHistogram::mean_score() const
{
    const std::size_t n = total();
    if (n == 0) {
        return 0.0;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        s += static_cast<double>(i * counts[i]);
    }
    return s / static_cast<double>(n);
}

std::string_view to_string(op::Ordering o) noexcept
{
    switch (o) {
    case op::Ordering::random: return "random";
    case op::Ordering::ascending: return "ascending";
    case op::Ordering::descending: return "descending";
    case op::Ordering::given: return "given";
    }
    return "?";
}

std::string_view to_string(SortKey k) noexcept
{
    return k == SortKey::ones ? "ones" : "leading_ones";
}

namespace {

std::size_t score(std::string_view bits, SortKey key)
{
    return key == SortKey::ones ? binary::onemax(bits) : binary::leading_ones(bits);
}

} // namespace

std::vector<OrderingHistogram> ordering_bias_experiment(const OrderingBiasOptions& options,
                                                        backend::CompletionEngine& engine,
                                                        const core::RngStream& rng)
{
    if (options.length == 0 || options.parents_per_experiment == 0 || options.orders.empty()) {
        throw ConfigError("order_bias needs length, parents_per_experiment and orders to be non-empty");
    }
    options.params.validate();
    const binary::BitstringSpec spec{options.length, options.codec};

    op::OffspringParser parser;
    parser.max_children = options.offspring_cap;
    parser.min_chars = 1;
    parser.decode = [codec = options.codec](std::string_view s) { return binary::decode(s, codec); };
    parser.validator = [spec](std::string_view s) { return binary::is_valid(s, spec); };

    std::vector<OrderingHistogram> hist;
    for (auto o : options.orders) {
        hist.push_back(OrderingHistogram{o, std::vector<std::size_t>(options.length + 1, 0)});
    }

    for (std::size_t e = 0; e < options.experiments; ++e) {
        auto stream = rng.derive("experiment/" + std::to_string(e));
        std::vector<core::Individual> parents;
        parents.reserve(options.parents_per_experiment);
        for (std::size_t i = 0; i < options.parents_per_experiment; ++i) {
            core::Individual ind(binary::random_bitstring(options.length, stream), core::Provenance::seed);
            ind.set_fitness(static_cast<double>(score(ind.genotype(), options.sort_key)));
            parents.push_back(std::move(ind));
        }
        for (std::size_t oi = 0; oi < options.orders.size(); ++oi) {
            auto tmpl = binary::binary_template(options.codec);
            tmpl.ordering = options.orders[oi];
            auto call_rng = stream.derive(std::string(to_string(options.orders[oi])));
            std::size_t collected = 0;
            for (std::size_t call = 0; call < 2 * options.children_per_experiment &&
                                       collected < options.children_per_experiment;
                 ++call) {
                const auto result = op::lmx(parents, engine, tmpl, parser, options.params, call_rng);
                for (const auto& child : result.offspring.children) {
                    if (collected == options.children_per_experiment) {
                        break;
                    }
                    ++hist[oi].counts[score(child, options.sort_key)];
                    ++collected;
                }
            }
        }
    }
    return hist;
}

std::string ordering_bias_csv(const std::vector<OrderingHistogram>& histograms)
{
    std::ostringstream out;
    out << "order,score,count\n";
    for (const auto& h : histograms) {
        for (std::size_t s = 0; s < h.counts.size(); ++s) {
            out << to_string(h.order) << ',' << s << ',' << h.counts[s] << '\n';
        }
    }
    return out.str();
}

} // namespace lmx::analysis
