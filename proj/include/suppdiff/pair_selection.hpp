#pragma once

// Builds the analyzable set of publication -> supplement pairs: relation
// filtering, supplement-semantics selection, and dedup-noise exclusion.

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "suppdiff/core_model.hpp"

namespace suppdiff {

/// Parameters of the automatic dedup-noise rule. A supplement is noise when
/// its normalized title is blocklisted, or when the title is short and the
/// record gathers supplement relations from many distinct publications.
struct NoisePolicy {
    std::set<std::string> generic_title_blocklist = {"index data"};
    int fanin_threshold = 5;    // distinct supplemented publications, >= 2
    int min_title_length = 12;  // codepoints, >= 1

    void validate() const;
};

/// Reads one normalized title per line; '#' starts a comment.
std::set<std::string> load_blocklist(std::istream& in);
std::set<std::string> load_blocklist_file(const std::string& path);

struct ProductIndexResult {
    ProductIndex index;
    std::uint64_t duplicate_ids = 0;  // later records with an already-seen id
};

/// Index products by id; the first record wins on duplicate ids.
ProductIndexResult build_product_index(const std::vector<ProductPtr>& products);

/// Publications with at least one relation, of any semantics and in either
/// direction, to a dataset or software.
std::set<std::string> select_linked_publications(
    const ProductIndex& index, const std::vector<Relation>& relations);

struct PairSelectionReport {
    std::uint64_t supplement_relations = 0;  // IsSupplementedBy relations seen
    std::uint64_t dangling = 0;              // endpoint id not in the graph
    std::uint64_t kind_mismatches = 0;       // endpoints not publication+supplement
    std::uint64_t duplicates_collapsed = 0;  // extra relations for an already-built pair
};

/// One pair per distinct (publication, supplement) couple linked by an
/// IsSupplementedBy relation in either orientation; endpoint kinds decide
/// which side is the publication. Output is ordered by publication id,
/// then supplement id. Asserted provenance wins over inferred when several
/// relations produce the same pair.
std::pair<std::vector<SupplementPair>, PairSelectionReport> select_supplement_pairs(
    const ProductIndex& index, const std::vector<Relation>& relations);

struct FlaggedPair {
    SupplementPair pair;
    std::string reason;  // "generic_title" or "short_title_high_fanin"
};

struct NoiseSplit {
    std::vector<SupplementPair> kept;
    std::vector<FlaggedPair> flagged;
};

/// Partition pairs into kept and dedup-noise. Fan-in is counted over the
/// input pairs themselves (distinct publications per supplement id).
NoiseSplit detect_dedup_noise(const std::vector<SupplementPair>& pairs,
                              const NoisePolicy& policy);

}  // namespace suppdiff
