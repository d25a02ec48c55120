#pragma once

// Aligns the author lists of a publication/supplement pair and classifies
// authorship variation events, exceptions, and shuffle adjacency.

#include <optional>
#include <string>
#include <vector>

#include "suppdiff/core_model.hpp"

namespace suppdiff {

struct MatchConfig {
    bool fuzzy_enabled = true;
    /// Normalized edit similarity required for a fuzzy match, in (0,1].
    double fuzzy_threshold = 0.90;
    /// Lowercase substrings marking a collective byline entry.
    std::vector<std::string> group_patterns = {"team", "group", "consortium",
                                               "collaboration", "data curation"};

    void validate() const;
};

/// One-to-one alignment of the two bylines, built in three passes: ORCID
/// equality, normalized-name equality, then greedy highest-similarity-first
/// fuzzy pairs at or above the threshold (ties broken by lower publication
/// position, then lower supplement position). Unmatched publication
/// mentions become removals; unmatched supplement mentions, additions.
AuthorAlignment match_author_sets(const AuthorList& publication,
                                  const AuthorList& supplement,
                                  const MatchConfig& cfg);

/// Binary per-pair event flags. An event is flagged at most once per pair
/// regardless of how many authors it involves.
struct EventFlags {
    bool addition = false;
    bool removal = false;
    bool shuffle = false;

    bool any() const { return addition || removal || shuffle; }
    bool operator==(const EventFlags&) const = default;
};

/// addition: some author appears only in the supplement; removal: some
/// author appears only in the publication; shuffle: more than one matched
/// author and their relative order differs between the two bylines.
/// Insertions and deletions of other authors never produce a shuffle.
EventFlags detect_events(const AuthorAlignment& alignment);

/// Annotation exceptions, checked in order: a supplement byline entry that
/// names a group rather than a person; a null intersection between two
/// non-empty bylines; an empty byline on either side.
std::optional<ExceptionClass> classify_exception(const AuthorAlignment& alignment,
                                                 const MatchConfig& cfg);

/// For a pair whose matched authors are shuffled: involves_non_adjacent
/// when some inverted pair of matched authors is non-adjacent in the
/// intersection sequence ordered by publication position. Throws
/// std::invalid_argument when the alignment carries no shuffle.
ShuffleAdjacency classify_shuffle_adjacency(const AuthorAlignment& alignment);

struct PairAnnotation {
    AuthorAlignment alignment;
    VariationAnnotation annotation;

    /// Distinct match methods used, in orcid/exact/fuzzy order.
    std::vector<MatchMethod> methods_used() const;
};

/// Full per-pair procedure: align, classify exceptions, flag events, and
/// classify shuffle adjacency. Excepted pairs carry no event flags.
PairAnnotation annotate_pair(const SupplementPair& pair, const MatchConfig& cfg);

/// Annotate pairs with a worker pool. jobs = 0 uses the hardware thread
/// count. Results keep the input order regardless of the job count.
std::vector<PairAnnotation> annotate_pairs(const std::vector<SupplementPair>& pairs,
                                           const MatchConfig& cfg,
                                           unsigned jobs = 0);

}  // namespace suppdiff
