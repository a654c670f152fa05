#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

namespace lmx::core {

// Writes `content` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Output stream that lands at `path` only on commit(). Abandoned files are removed.
class AtomicOutputFile {
public:
    explicit AtomicOutputFile(std::filesystem::path path);
    ~AtomicOutputFile();
    AtomicOutputFile(const AtomicOutputFile&) = delete;
    AtomicOutputFile& operator=(const AtomicOutputFile&) = delete;

    std::ofstream& stream() noexcept { return out_; }
    void commit();

private:
    std::filesystem::path path_;
    std::filesystem::path temp_;
    std::ofstream out_;
    bool committed_ = false;
};

std::string read_file(const std::filesystem::path& path);

// RFC 4180 quoting when the field needs it.
std::string csv_field(std::string_view s);

// Shortest text that parses back to the same double.
std::string format_double(double v);

} // namespace lmx::core
