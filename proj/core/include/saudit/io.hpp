#pragma once

#include <string>

namespace saudit::io {

// Whole-file read/write; failures throw DataError naming the path.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
void append_text_file(const std::string& path, const std::string& content);

bool file_exists(const std::string& path);

// Directory part of a path ("" when none) and directory-aware joining, for
// resolving paths named inside config files against the config's location.
std::string dirname(const std::string& path);
std::string join_path(const std::string& dir, const std::string& name);

} // namespace saudit::io
