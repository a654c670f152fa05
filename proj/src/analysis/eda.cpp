#include "lmx/analysis/eda.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "lmx/core/error.hpp"
#include "lmx/core/individual.hpp"
#include "lmx/core/io.hpp"

namespace lmx::analysis {

MarginalDistribution umda_marginals(std::span<const std::string> parents)
{
    if (parents.empty()) {
        throw PreconditionError("umda_marginals needs at least one parent");
    }
    const std::size_t len = parents.front().size();
    std::vector<std::size_t> ones(len, 0);
    for (const auto& p : parents) {
        if (p.size() != len || !binary::is_bitstring(p)) {
            throw PreconditionError("umda_marginals needs equal-length bitstrings");
        }
        for (std::size_t j = 0; j < len; ++j) {
            ones[j] += p[j] == '1' ? 1 : 0;
        }
    }
    MarginalDistribution m;
    m.p_one.reserve(len);
    for (auto c : ones) {
        m.p_one.push_back(static_cast<double>(c) / static_cast<double>(parents.size()));
    }
    return m;
}

MarginalDistribution lmx_marginals(std::span<const std::string> parents, backend::CompletionEngine& engine,
                                   const op::PromptTemplate& tmpl, binary::Codec codec, core::RngStream& rng,
                                   double temperature, core::RunLog* log)
{
    if (!engine.supports_logprobs()) {
        throw backend::CapabilityError("engine '" + engine.name() + "' does not provide per-token probabilities");
    }
    if (parents.empty()) {
        throw PreconditionError("lmx_marginals needs at least one parent");
    }
    const std::size_t len = parents.front().size();
    std::vector<core::Individual> individuals;
    individuals.reserve(parents.size());
    for (const auto& p : parents) {
        if (p.size() != len || !binary::is_bitstring(p)) {
            throw PreconditionError("lmx_marginals needs equal-length bitstrings");
        }
        individuals.emplace_back(p, core::Provenance::seed);
    }
    const std::string prompt = op::format_prompt(individuals, tmpl, rng) + tmpl.item_prefix;
    static const std::vector<std::string> candidates{"0", "1"};

    MarginalDistribution m;
    m.p_one.reserve(len);
    std::string committed;
    for (std::size_t j = 0; j < len; ++j) {
        std::string prefix = prompt + binary::encode(committed, codec);
        if (codec == binary::Codec::underscore) {
            prefix += '_';
        }
        const auto dist = engine.next_token_distribution(prefix, candidates, temperature);
        const double p1 = dist.probability("1");
        const double p0 = dist.probability("0");
        m.p_one.push_back(p1);
        if (log) {
            log->note(0, "marginal-query", rng.label(),
                      {{"position", j}, {"committed", committed}, {"p_one", p1}, {"approximated", dist.approximated}});
        }
        committed += p1 > p0 ? '1' : '0';
    }
    return m;
}

double mean_abs_diff(const MarginalDistribution& a, const MarginalDistribution& b)
{
    if (a.p_one.size() != b.p_one.size()) {
        throw PreconditionError("mean_abs_diff: length mismatch");
    }
    if (a.p_one.empty()) {
        return 0.0;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < a.p_one.size(); ++j) {
        s += std::fabs(a.p_one[j] - b.p_one[j]);
    }
    return s / static_cast<double>(a.p_one.size());
}

std::vector<EdaCompareRow> eda_compare_experiment(const EdaCompareOptions& options, backend::CompletionEngine& engine,
                                                  const op::PromptTemplate& tmpl, const core::RngStream& rng)
{
    if (!engine.supports_logprobs()) {
        throw backend::CapabilityError("engine '" + engine.name() + "' does not provide per-token probabilities");
    }
    if (options.length == 0 || options.repeats == 0 || options.parent_counts.empty()) {
        throw ConfigError("eda_compare needs length, repeats and parent_counts to be non-empty");
    }
    for (auto m : options.parent_counts) {
        if (m == 0) {
            throw ConfigError("eda_compare.parent_counts entries must be >= 1");
        }
    }
    const std::size_t counts = options.parent_counts.size();
    // samples[r][c]
    std::vector<std::vector<double>> samples(options.repeats, std::vector<double>(counts, 0.0));
    std::exception_ptr failure;
    const auto repeats = static_cast<std::ptrdiff_t>(options.repeats);

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t r = 0; r < repeats; ++r) {
        try {
            auto stream = rng.derive("repeat/" + std::to_string(r));
            std::vector<double> p(options.length);
            for (auto& v : p) {
                v = stream.uniform01();
            }
            for (std::size_t c = 0; c < counts; ++c) {
                auto sub = stream.derive("parents/" + std::to_string(options.parent_counts[c]));
                std::vector<std::string> parents(options.parent_counts[c], std::string(options.length, '0'));
                for (auto& s : parents) {
                    for (std::size_t j = 0; j < options.length; ++j) {
                        s[j] = sub.bernoulli(p[j]) ? '1' : '0';
                    }
                }
                const auto explicit_model = umda_marginals(parents);
                const auto implicit_model =
                    lmx_marginals(parents, engine, tmpl, options.codec, sub, options.temperature, options.log);
                samples[static_cast<std::size_t>(r)][c] = mean_abs_diff(explicit_model, implicit_model);
            }
        } catch (...) {
#pragma omp critical(lmx_eda_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<EdaCompareRow> rows;
    rows.reserve(counts);
    for (std::size_t c = 0; c < counts; ++c) {
        EdaCompareRow row;
        row.parents = options.parent_counts[c];
        for (std::size_t r = 0; r < options.repeats; ++r) {
            row.samples.push_back(samples[r][c]);
        }
        double sum = 0.0;
        for (double v : row.samples) {
            sum += v;
        }
        row.mean = sum / static_cast<double>(row.samples.size());
        double var = 0.0;
        for (double v : row.samples) {
            var += (v - row.mean) * (v - row.mean);
        }
        row.stddev = std::sqrt(var / static_cast<double>(row.samples.size()));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string eda_compare_csv(const std::vector<EdaCompareRow>& rows)
{
    std::ostringstream out;
    out << "parents,mean_abs_diff,stddev,repeats\n";
    for (const auto& r : rows) {
        out << r.parents << ',' << core::format_double(r.mean) << ',' << core::format_double(r.stddev) << ','
            << r.samples.size() << '\n';
    }
    return out.str();
}

} // namespace lmx::analysis
