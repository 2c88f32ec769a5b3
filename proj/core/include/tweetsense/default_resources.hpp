#pragma once

#include <string_view>

namespace tweetsense::resources {

// Contents of the files under data/, compiled into the library so the
// tool works without an install tree.
std::string_view default_stopwords();
std::string_view default_covid_lexicon();
std::string_view default_valence_lexicon();

}  // namespace tweetsense::resources
