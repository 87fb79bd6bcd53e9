#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace ringprobe {

// Locale-independent "%.12g" with "." decimal separator.
std::string format_double(double value);

// Write via a temp file in the same directory, then rename into place.
void atomic_write(const std::filesystem::path& path, std::string_view content);

// FNV-1a 64-bit, hex string. Stable across platforms for byte-identical input.
std::string fnv1a_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

std::string utc_timestamp();

}  // namespace ringprobe
