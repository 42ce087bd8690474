#ifndef DMNKIT_UTIL_HPP
#define DMNKIT_UTIL_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dmnkit {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
// Lowercases and collapses runs of whitespace to single spaces.
std::string normalize_name(std::string_view s);
bool contains_ci(std::string_view haystack, std::string_view needle);
std::vector<std::string> split(std::string_view s, char sep);

std::uint64_t fnv1a64(std::string_view s);
std::string sha256_hex(std::string_view data);

std::string read_file(const std::filesystem::path& p);        // throws IoError
void write_file(const std::filesystem::path& p, std::string_view data);
void ensure_dir(const std::filesystem::path& p);

// Regular files directly under `dir` whose name matches *`ext`, sorted by filename.
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              std::string_view ext);

// Content of the first ``` fenced block (language tag allowed on the opening
// line). An unclosed fence runs to the end of the text; no fence -> nullopt.
std::optional<std::string> first_fenced_block(std::string_view text);

// Fixed-precision decimal formatting with '.' separator, stable across locales.
std::string format_double(double v, int decimals);

}  // namespace dmnkit

#endif
