#pragma once

#include <string>
#include <string_view>

namespace homophily::text {

/// Porter (1980) suffix-stripping stemmer for lowercase ASCII words. Words
/// shorter than 3 characters or containing non-letters are returned as is.
std::string porter_stem(std::string_view word);

}  // namespace homophily::text
