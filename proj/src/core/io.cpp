#include "lmx/core/io.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace lmx::core {

namespace fs = std::filesystem;

namespace {

fs::path temp_sibling(const fs::path& path)
{
    fs::path t = path;
    t += ".tmp";
    return t;
}

} // namespace

void write_file_atomic(const fs::path& path, std::string_view content)
{
    AtomicOutputFile f(path);
    f.stream() << content;
    f.commit();
}

AtomicOutputFile::AtomicOutputFile(fs::path path) : path_(std::move(path)), temp_(temp_sibling(path_))
{
    if (path_.has_parent_path()) {
        fs::create_directories(path_.parent_path());
    }
    out_.open(temp_, std::ios::binary | std::ios::trunc);
    if (!out_) {
        throw std::runtime_error("cannot open " + temp_.string() + " for writing");
    }
}

AtomicOutputFile::~AtomicOutputFile()
{
    if (!committed_) {
        out_.close();
        std::error_code ec;
        fs::remove(temp_, ec);
    }
}

void AtomicOutputFile::commit()
{
    out_.flush();
    if (!out_) {
        throw std::runtime_error("write failed for " + temp_.string());
    }
    out_.close();
    fs::rename(temp_, path_);
    committed_ = true;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

} // namespace lmx::core
