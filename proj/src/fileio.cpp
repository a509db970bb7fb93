#include "cmg/fileio.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "cmg/errors.hpp"

namespace cmg {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Err::Io, strf("cannot open %s for reading", path.c_str()));
  }
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(Err::Io, strf("read failed on %s", path.c_str()));
  }
  return data;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    size_t len = nl - start;
    if (len > 0 && text[start + len - 1] == '\r') --len;
    lines.push_back(text.substr(start, len));
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string> read_lines(const fs::path& path) {
  return split_lines(read_file(path));
}

namespace {

// Length of a valid UTF-8 sequence starting at s[i], or 0 if invalid.
size_t utf8_seq_len(const std::string& s, size_t i) {
  const auto byte = [&](size_t k) -> unsigned {
    return static_cast<unsigned char>(s[k]);
  };
  unsigned b0 = byte(i);
  if (b0 < 0x80) return 1;
  if (b0 < 0xC2) return 0;  // continuation byte or overlong lead
  size_t need;
  unsigned lo = 0x80, hi = 0xBF;
  if (b0 < 0xE0) {
    need = 1;
  } else if (b0 < 0xF0) {
    need = 2;
    if (b0 == 0xE0) lo = 0xA0;            // no overlong
    if (b0 == 0xED) hi = 0x9F;            // no surrogates
  } else if (b0 < 0xF5) {
    need = 3;
    if (b0 == 0xF0) lo = 0x90;            // no overlong
    if (b0 == 0xF4) hi = 0x8F;            // <= U+10FFFF
  } else {
    return 0;
  }
  if (i + need >= s.size()) return 0;  // sequence runs past the buffer
  for (size_t k = 1; k <= need; ++k) {
    unsigned b = byte(i + k);
    unsigned klo = (k == 1) ? lo : 0x80;
    unsigned khi = (k == 1) ? hi : 0xBF;
    if (b < klo || b > khi) return 0;
  }
  return need + 1;
}

}  // namespace

std::string sanitize_utf8(const std::string& bytes) {
  static const char kReplacement[] = "\xEF\xBF\xBD";  // U+FFFD
  std::string out;
  out.reserve(bytes.size());
  size_t i = 0;
  while (i < bytes.size()) {
    size_t len = utf8_seq_len(bytes, i);
    if (len == 0) {
      out.append(kReplacement, 3);
      ++i;  // resync one byte at a time
    } else {
      out.append(bytes, i, len);
      i += len;
    }
  }
  return out;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path dir = path.parent_path();
  if (!dir.empty()) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
      throw Error(Err::Io, strf("cannot create directory %s: %s", dir.c_str(),
                                ec.message().c_str()));
    }
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(Err::Io, strf("cannot open %s for writing", tmp.c_str()));
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw Error(Err::Io, strf("write failed on %s", tmp.c_str()));
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    throw Error(Err::Io, strf("cannot rename %s to %s: %s", tmp.c_str(),
                              path.c_str(), ec.message().c_str()));
  }
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str()) {
    throw Error(Err::BadModelFile, strf("not a number: '%s'", text.c_str()));
  }
  return v;
}

uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace cmg
