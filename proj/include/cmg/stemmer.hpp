#pragma once

#include <string>
#include <string_view>

namespace cmg {

// Porter's original suffix-stripping algorithm, as published in 1980:
// steps 1a, 1b (+cleanup), 1c, 2, 3, 4, 5a, 5b, longest-match-per-step.
// Notably this variant maps abli->able, has no special rule for -logi, and
// does not skip short words. Input is assumed lowercase; non-alphabetic
// input passes through on the same rules (digits count as consonants).
std::string porter_stem(std::string_view word);

}  // namespace cmg
