#include "lmx/core/run_log.hpp"

namespace lmx::core {

namespace {

nlohmann::json base(std::size_t generation, std::string_view event, std::string_view stream)
{
    return nlohmann::json{{"generation", generation}, {"event", event}, {"stream", stream}};
}

} // namespace

void RunLog::write(const nlohmann::json& record)
{
    if (!sink_) {
        return;
    }
    const std::string line = record.dump();
    std::lock_guard lock(mutex_);
    (*sink_) << line << '\n';
}

void RunLog::evaluation(std::size_t generation, const Individual& ind, std::string_view stream)
{
    if (!sink_) {
        return;
    }
    auto r = base(generation, "evaluation", stream);
    r["genotype"] = ind.genotype();
    r["fitness"] = ind.maybe_fitness() ? nlohmann::json(*ind.maybe_fitness()) : nlohmann::json(nullptr);
    r["provenance"] = to_string(ind.provenance());
    write(r);
}

void RunLog::selection(std::size_t generation, const Individual& ind, std::string_view stream)
{
    if (!sink_) {
        return;
    }
    auto r = base(generation, "selection", stream);
    r["genotype"] = ind.genotype();
    r["fitness"] = ind.maybe_fitness() ? nlohmann::json(*ind.maybe_fitness()) : nlohmann::json(nullptr);
    r["provenance"] = to_string(ind.provenance());
    write(r);
}

void RunLog::lmx_call(std::size_t generation, std::string_view stream, std::string_view prompt,
                      std::string_view completion, const std::vector<std::string>& children,
                      std::string_view skipped_reason)
{
    if (!sink_) {
        return;
    }
    auto r = base(generation, "lmx-call", stream);
    r["prompt"] = prompt;
    r["completion"] = completion;
    r["children"] = children;
    r["provenance"] = to_string(Provenance::lmx);
    if (!skipped_reason.empty()) {
        r["skipped"] = skipped_reason;
    }
    write(r);
}

void RunLog::note(std::size_t generation, std::string_view event, std::string_view stream, nlohmann::json extra)
{
    if (!sink_) {
        return;
    }
    auto r = base(generation, event, stream);
    if (extra.is_object()) {
        r.update(extra);
    }
    write(r);
}

} // namespace lmx::core
