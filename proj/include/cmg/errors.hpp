#pragma once

#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace cmg {

// Every failure the library reports deliberately. The enum value decides the
// process exit code; messages are for humans and never load-bearing.
enum class Err {
  // usage / configuration (exit 1)
  Config,
  // data / format (exit 2)
  LineCountMismatch,
  EmptyCorpus,
  NotARepository,
  GitUnavailable,
  Io,
  VocabTooSmall,
  MalformedHeader,
  TruncatedFile,
  DimensionZero,
  DimensionMismatch,
  LengthMismatch,
  EmptyIndex,
  BackendMismatch,
  EmptyInput,
  BadModelFile,
  // bugs / impossible states (exit 3)
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(Err code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

inline int exit_code_for(Err code) {
  switch (code) {
    case Err::Config:
      return 1;
    case Err::Internal:
      return 3;
    default:
      return 2;
  }
}

// printf-style std::string builder (no std::format in libstdc++ 11).
inline std::string strf(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  va_list copy;
  va_copy(copy, args);
  int n = std::vsnprintf(nullptr, 0, fmt, copy);
  va_end(copy);
  std::string out;
  if (n > 0) {
    out.resize(static_cast<size_t>(n));
    std::vsnprintf(out.data(), out.size() + 1, fmt, args);
  }
  va_end(args);
  return out;
}

}  // namespace cmg
