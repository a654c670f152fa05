#include "lmx/symreg/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lmx/core/error.hpp"

namespace lmx::symreg {

void RegressionDataset::validate() const
{
    if (X.data.size() != X.rows * X.cols) {
        throw PreconditionError("dataset matrix has inconsistent shape");
    }
    if (y.size() != X.rows) {
        throw PreconditionError("dataset has " + std::to_string(X.rows) + " rows but " + std::to_string(y.size()) +
                                " targets");
    }
    for (double v : X.data) {
        if (!std::isfinite(v)) {
            throw PreconditionError("dataset contains a non-finite input");
        }
    }
    for (double v : y) {
        if (!std::isfinite(v)) {
            throw PreconditionError("dataset contains a non-finite target");
        }
    }
    for (auto idx : {&train, &test}) {
        for (auto i : *idx) {
            if (i >= X.rows) {
                throw PreconditionError("split index out of range");
            }
        }
    }
}

Matrix RegressionDataset::rows(const std::vector<std::size_t>& idx) const
{
    Matrix m;
    m.rows = idx.size();
    m.cols = X.cols;
    m.data.reserve(m.rows * m.cols);
    for (auto i : idx) {
        auto r = X.row(i);
        m.data.insert(m.data.end(), r.begin(), r.end());
    }
    return m;
}

std::vector<double> RegressionDataset::targets(const std::vector<std::size_t>& idx) const
{
    std::vector<double> out;
    out.reserve(idx.size());
    for (auto i : idx) {
        out.push_back(y[i]);
    }
    return out;
}

void assign_split(RegressionDataset& d, double train_fraction, std::uint64_t seed)
{
    if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
        throw ConfigError("train_fraction must be in (0, 1]");
    }
    std::vector<std::size_t> order(d.X.rows);
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    core::RngStream rng(seed, "dataset/split");
    std::shuffle(order.begin(), order.end(), rng.engine());
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(order.size())));
    n_train = std::clamp<std::size_t>(n_train, std::min<std::size_t>(order.size(), 2), order.size());
    d.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    d.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(d.train.begin(), d.train.end());
    std::sort(d.test.begin(), d.test.end());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) {
            field.pop_back();
        }
        while (!field.empty() && field.front() == ' ') {
            field.erase(field.begin());
        }
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

} // namespace

RegressionDataset load_dataset_csv(const std::filesystem::path& path, double train_fraction, std::uint64_t seed)
{
    std::ifstream in(path);
    if (!in) {
        throw DatasetNotFound("dataset not found: " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError(path.string() + ": empty dataset file");
    }
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header.back() != "y") {
        throw ConfigError(path.string() + ":1: header must be x1,...,xd,y");
    }
    for (std::size_t c = 0; c + 1 < header.size(); ++c) {
        if (header[c] != "x" + std::to_string(c + 1)) {
            throw ConfigError(path.string() + ":1: expected column x" + std::to_string(c + 1) + ", got '" +
                              header[c] + "'");
        }
    }
    RegressionDataset d;
    d.X.cols = header.size() - 1;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            double v = 0.0;
            const auto& f = fields[c];
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
                throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + f + "'");
            }
            if (c + 1 < fields.size()) {
                d.X.data.push_back(v);
            } else {
                d.y.push_back(v);
            }
        }
        ++d.X.rows;
    }
    if (d.X.rows < 2) {
        throw ConfigError(path.string() + ": dataset needs at least two rows");
    }
    assign_split(d, train_fraction, seed);
    d.validate();
    return d;
}

} // namespace lmx::symreg
