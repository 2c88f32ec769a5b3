#pragma once

#include <string>
#include <string_view>

namespace tweetsense {

// Porter's suffix-stripping stemmer, original rule set. Input is expected
// lowercase; non-letters are treated as consonants. Words of any length are
// processed (the reference C implementation's short-word shortcut is not
// part of the algorithm).
std::string porter_stem(std::string_view word);

}  // namespace tweetsense
