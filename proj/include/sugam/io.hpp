#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sugam {

// Shortest decimal string that round-trips the exact double (to_chars).
// Every float we serialize goes through this, which is what makes
// parse -> serialize -> parse a fixed point and reruns byte-identical.
std::string format_double(double x);

std::string format_int(long long x);

// Strict double parse of the whole token; throws UserError with `context`
// on failure.
double parse_double(std::string_view token, const std::string& context);

long long parse_int(std::string_view token, const std::string& context);

// Whole file as a string; UserError if unreadable.
std::string read_text_file(const std::string& path);

void write_text_file(const std::string& path, std::string_view content);

// FNV-1a 64-bit over raw bytes, rendered as 16 hex digits. Used to fingerprint
// inputs in sidecar metadata and fold assignments.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);
std::string hash_file_hex(const std::string& path);

// Split one CSV line on commas. No quoting: none of our formats needs it,
// and the parsers reject stray quotes as malformed input.
std::vector<std::string_view> split_csv_line(std::string_view line);

// Split text into lines; accepts \n and \r\n, drops a trailing blank line.
std::vector<std::string_view> split_lines(std::string_view text);

// Split on runs of spaces/tabs.
std::vector<std::string_view> split_whitespace(std::string_view line);

std::string to_lower(std::string_view s);

}  // namespace sugam
