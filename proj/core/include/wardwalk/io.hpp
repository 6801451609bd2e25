#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wardwalk {

// Shortest decimal form that round-trips to the same double. Locale-free.
std::string format_double(double value);

// Strict numeric parsing; `context` names the field in error messages.
double parse_double(std::string_view text, std::string_view context);
long long parse_int(std::string_view text, std::string_view context);

// Comma-split without quoting; fields may not contain the delimiter.
std::vector<std::string_view> split_fields(std::string_view line, char delim = ',');

// Reads a whole text file, throws IoError on failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

// Correctly rounded sum of doubles (Shewchuk partials), independent of
// input order up to permutation of equal real sums.
double exact_sum(std::span<const double> values);

// FNV-1a over bytes, for content hashes.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xCBF29CE484222325ULL);
std::string to_hex(std::uint64_t value);

}  // namespace wardwalk
