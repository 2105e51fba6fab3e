#include "saudit/io.hpp"

#include "saudit/errors.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace saudit::io {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw DataError("read failed for " + path);
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw DataError("write failed for " + path);
}

void append_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw DataError("cannot open " + path + " for appending");
    out << content;
    out.flush();
    if (!out) throw DataError("append failed for " + path);
}

bool file_exists(const std::string& path) {
    std::error_code ec;
    return std::filesystem::exists(path, ec);
}

std::string dirname(const std::string& path) {
    return std::filesystem::path(path).parent_path().string();
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    return (std::filesystem::path(dir) / name).string();
}

} // namespace saudit::io
