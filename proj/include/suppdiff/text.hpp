#pragma once

// Deterministic text normalization for author names and titles, plus the
// edit-distance similarity used by fuzzy author matching.

#include <cstddef>
#include <string>
#include <string_view>

namespace suppdiff {

/// Normalize an author name for comparison: fold Latin diacritics and
/// ligatures to ASCII, casefold, drop punctuation except "." and "-",
/// collapse whitespace, and rewrite "Last, First" to "First Last" when the
/// name contains exactly one comma. Idempotent. Throws std::invalid_argument
/// on empty input.
std::string normalize_name(std::string_view raw);

/// Title/subject variant of the same pipeline: no comma reordering.
/// Empty input is allowed and yields "".
std::string normalize_title(std::string_view raw);

/// Number of Unicode codepoints in a UTF-8 string (invalid bytes count as
/// one codepoint each).
std::size_t utf8_length(std::string_view s);

std::size_t levenshtein(std::string_view a, std::string_view b);

/// Normalized edit similarity in [0,1]: 1 - dist/max(len). Returns 0 when
/// either input is empty; an empty normalized name carries no identity
/// evidence.
double name_similarity(std::string_view a, std::string_view b);

}  // namespace suppdiff
