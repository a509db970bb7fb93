#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace cmg {

// Reads a whole file as raw bytes. Throws Err::Io if unreadable.
std::string read_file(const std::filesystem::path& path);

// Splits text into lines on '\n', stripping one trailing '\r' per line
// (corpora may arrive with CRLF endings). A trailing final newline does not
// produce an extra empty line.
std::vector<std::string> split_lines(const std::string& text);

// read_file + split_lines.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Replaces every invalid UTF-8 sequence with U+FFFD, one replacement per
// undecodable byte run start, resuming at the next plausible lead byte.
std::string sanitize_utf8(const std::string& bytes);

// Writes atomically: temp file in the target directory, then rename.
// Creates parent directories as needed. Throws Err::Io on failure.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

// Shortest decimal form that round-trips the double exactly.
std::string format_double(double value);

// Inverse of format_double; accepts any strtod-parsable spelling.
double parse_double(const std::string& text);

// FNV-1a over bytes; used to fingerprint resolved configs.
uint64_t fnv1a(const std::string& bytes);

}  // namespace cmg
