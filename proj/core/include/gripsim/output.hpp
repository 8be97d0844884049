#pragma once

#include <filesystem>
#include <string_view>

namespace gripsim {

/// Writes `contents` to a sibling temp file and renames it over `path`, so
/// readers never observe a partially written file. Creates parent
/// directories as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace gripsim
