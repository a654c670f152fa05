#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "lmx/core/rng.hpp"
#include "lmx/symreg/kernels.hpp"

namespace lmx::symreg {

struct RegressionDataset {
    Matrix X;
    std::vector<double> y;
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;

    // Throws PreconditionError for mismatched sizes or non-finite entries.
    void validate() const;

    [[nodiscard]] Matrix rows(const std::vector<std::size_t>& idx) const;
    [[nodiscard]] std::vector<double> targets(const std::vector<std::size_t>& idx) const;
};

class DatasetNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// CSV with a header row "x1,...,xd,y". The split is a seeded shuffle with
// `train_fraction` of the rows in train.
RegressionDataset load_dataset_csv(const std::filesystem::path& path, double train_fraction, std::uint64_t seed);

void assign_split(RegressionDataset& d, double train_fraction, std::uint64_t seed);

} // namespace lmx::symreg
