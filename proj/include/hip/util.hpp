#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hip {

std::string_view trim(std::string_view s);

// ASCII-only uppercase; bytes outside [a-z] pass through untouched.
std::string upper_ascii(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Returns the byte offset of the first invalid UTF-8 sequence, or npos
// if the whole buffer decodes cleanly.
std::size_t find_invalid_utf8(std::string_view bytes);

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

// Write-temp-then-rename so concurrent readers never see partial content.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// RFC 4180-ish CSV: quoted fields, "" escapes, LF or CRLF rows.
// Throws MalformedSource on unterminated quotes or stray quote chars.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

std::string csv_escape(std::string_view field);

std::string xml_escape(std::string_view s);

}  // namespace hip
