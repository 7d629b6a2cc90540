#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace scorp {

std::vector<std::string> split_ws(std::string_view s);
std::vector<std::string> split_char(std::string_view s, char sep);
std::string_view trim(std::string_view s);

bool parse_double(std::string_view s, double& out);
bool parse_u64(std::string_view s, std::uint64_t& out);

// Byte length of the UTF-8 sequence starting with this lead byte (1 for
// malformed input, so iteration always advances).
std::size_t utf8_char_len(unsigned char lead);
std::vector<std::string> utf8_chars(std::string_view word);

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

void warn(const std::string& msg);

// Shortest decimal form that round-trips the exact double.
std::string format_g17(double v);
std::string format_fixed(double v, int decimals);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
bool file_exists(const std::string& path);

}  // namespace scorp
