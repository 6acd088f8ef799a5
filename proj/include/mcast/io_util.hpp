#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mcast {

// Split one CSV line on commas. No quoting support; the project's file
// formats never embed commas in fields.
std::vector<std::string> split_csv_line(const std::string& line);

// Parse a double, rejecting NaN/Inf and trailing garbage.
double parse_double(const std::string& s, const std::string& context);

// Locale-independent shortest-exact formatting ( %.17g ), used everywhere a
// file must round-trip doubles bit-exactly.
std::string format_double(double v);

// FNV-1a 64-bit, used for file checksums and config hashes.
std::uint64_t fnv1a(const std::string& data);
std::string fnv1a_hex(const std::string& data);

std::string read_file(const std::string& path); // throws MissingInputError
void write_file(const std::string& path, const std::string& content);

} // namespace mcast
