#pragma once

// Shared domain types for the supplementary-material authorship toolkit.
// Pure data model: constructors enforce invariants, no I/O, no policy.

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace suppdiff {

using CalendarDate = std::chrono::year_month_day;

/// Whole days between two calendar dates (b - a).
long days_between(const CalendarDate& a, const CalendarDate& b);

std::string format_date(const CalendarDate& d);

enum class ProductKind { publication, dataset, software };

std::string_view to_string(ProductKind k);
std::optional<ProductKind> product_kind_from_string(std::string_view s);

enum class Provenance { asserted, inferred };

std::string_view to_string(Provenance p);
std::optional<Provenance> provenance_from_string(std::string_view s);

/// One author occurrence in a byline: 1-based position plus the name as
/// spelt in the record.
class AuthorMention {
public:
    AuthorMention(int position, std::string full_name,
                  std::optional<std::string> orcid = std::nullopt);

    int position() const { return position_; }
    const std::string& full_name() const { return full_name_; }
    const std::optional<std::string>& orcid() const { return orcid_; }

    bool operator==(const AuthorMention&) const = default;

private:
    int position_;
    std::string full_name_;
    std::optional<std::string> orcid_;
};

/// Ordered byline. Positions are unique; iteration is ascending by position.
class AuthorList {
public:
    AuthorList() = default;
    explicit AuthorList(std::vector<AuthorMention> mentions);

    const std::vector<AuthorMention>& mentions() const { return mentions_; }
    std::size_t size() const { return mentions_.size(); }
    bool empty() const { return mentions_.empty(); }

    auto begin() const { return mentions_.begin(); }
    auto end() const { return mentions_.end(); }

    bool operator==(const AuthorList&) const = default;

private:
    std::vector<AuthorMention> mentions_;  // sorted by position
};

/// One publication, dataset, or software record of the metadata graph.
/// "dataset" is the umbrella kind: proper datasets, figures, tables.
struct ResearchProduct {
    std::string id;
    ProductKind kind = ProductKind::publication;
    std::string title;
    AuthorList authors;
    std::optional<CalendarDate> date;
    std::set<std::string> subjects;

    bool operator==(const ResearchProduct&) const = default;
};

using ProductPtr = std::shared_ptr<const ResearchProduct>;

/// id -> product lookup for one ingested graph.
using ProductIndex = std::map<std::string, ProductPtr, std::less<>>;

enum class RelationType { is_supplemented_by, cites, references, other };

/// Typed relation label. The three analysis-relevant DataCite types are
/// recognised case-insensitively; anything else is kept verbatim as `other`.
class RelationSemantics {
public:
    static RelationSemantics from_label(std::string_view label);
    static RelationSemantics is_supplemented_by();
    static RelationSemantics cites();
    static RelationSemantics references();

    RelationType type() const { return type_; }
    const std::string& label() const { return label_; }

    bool operator==(const RelationSemantics&) const = default;

private:
    RelationSemantics(RelationType t, std::string label)
        : type_(t), label_(std::move(label)) {}

    RelationType type_;
    std::string label_;
};

/// Directed edge between two product ids.
struct Relation {
    std::string source_id;
    std::string target_id;
    RelationSemantics semantics = RelationSemantics::cites();
    Provenance provenance = Provenance::asserted;

    bool operator==(const Relation&) const = default;
};

/// A (publication, supplement) pair selected for analysis.
class SupplementPair {
public:
    SupplementPair(ProductPtr publication, ProductPtr supplement,
                   Provenance provenance);

    const ResearchProduct& publication() const { return *publication_; }
    const ResearchProduct& supplement() const { return *supplement_; }
    const ProductPtr& publication_ptr() const { return publication_; }
    const ProductPtr& supplement_ptr() const { return supplement_; }
    Provenance provenance() const { return provenance_; }

    bool operator==(const SupplementPair& o) const;

private:
    ProductPtr publication_;
    ProductPtr supplement_;
    Provenance provenance_;
};

enum class MatchMethod { orcid, exact, fuzzy };

std::string_view to_string(MatchMethod m);
std::optional<MatchMethod> match_method_from_string(std::string_view s);

/// One matched author across the two bylines of a pair.
class MatchedAuthor {
public:
    MatchedAuthor(AuthorMention p_mention, AuthorMention d_mention,
                  MatchMethod method, double score);

    const AuthorMention& p_mention() const { return p_mention_; }
    const AuthorMention& d_mention() const { return d_mention_; }
    MatchMethod method() const { return method_; }
    double score() const { return score_; }

    bool operator==(const MatchedAuthor&) const = default;

private:
    AuthorMention p_mention_;
    AuthorMention d_mention_;
    MatchMethod method_;
    double score_;
};

/// One-to-one matching between the publication byline (A_p) and the
/// supplement byline (A_d): matches plus the unmatched leftovers on each
/// side. Matches are kept ordered by publication position; additions and
/// removals by position.
class AuthorAlignment {
public:
    AuthorAlignment() = default;
    AuthorAlignment(std::vector<MatchedAuthor> matches,
                    std::vector<AuthorMention> additions,
                    std::vector<AuthorMention> removals);

    const std::vector<MatchedAuthor>& matches() const { return matches_; }
    /// Mentions present in A_d only.
    const std::vector<AuthorMention>& additions() const { return additions_; }
    /// Mentions present in A_p only.
    const std::vector<AuthorMention>& removals() const { return removals_; }

    bool operator==(const AuthorAlignment&) const = default;

private:
    std::vector<MatchedAuthor> matches_;
    std::vector<AuthorMention> additions_;
    std::vector<AuthorMention> removals_;
};

enum class ExceptionKind { group_attribution, null_intersection, other };

std::string_view to_string(ExceptionKind k);

/// Why a pair was excluded from event annotation.
struct ExceptionClass {
    ExceptionKind kind = ExceptionKind::other;
    std::string reason;  // non-empty only for `other`

    bool operator==(const ExceptionClass&) const = default;
};

enum class ShuffleAdjacency { adjacent_only, involves_non_adjacent };

std::string_view to_string(ShuffleAdjacency a);
std::optional<ShuffleAdjacency> shuffle_adjacency_from_string(std::string_view s);

/// Per-pair annotation: binary event flags, optional exception class and,
/// for shuffles, the adjacency class.
class VariationAnnotation {
public:
    VariationAnnotation() = default;
    VariationAnnotation(bool addition, bool removal, bool shuffle,
                        std::optional<ExceptionClass> exception = std::nullopt,
                        std::optional<ShuffleAdjacency> shuffle_adjacency = std::nullopt);

    bool addition() const { return addition_; }
    bool removal() const { return removal_; }
    bool shuffle() const { return shuffle_; }
    bool varied() const { return addition_ || removal_ || shuffle_; }
    const std::optional<ExceptionClass>& exception() const { return exception_; }
    const std::optional<ShuffleAdjacency>& shuffle_adjacency() const {
        return shuffle_adjacency_;
    }

    bool operator==(const VariationAnnotation&) const = default;

private:
    bool addition_ = false;
    bool removal_ = false;
    bool shuffle_ = false;
    std::optional<ExceptionClass> exception_;
    std::optional<ShuffleAdjacency> shuffle_adjacency_;
};

// JSON serialization. Round-trips are loss-free and re-encoding a decoded
// value is byte-identical.
void to_json(nlohmann::ordered_json& j, const AuthorMention& m);
void to_json(nlohmann::ordered_json& j, const AuthorList& l);
void to_json(nlohmann::ordered_json& j, const ResearchProduct& p);
void to_json(nlohmann::ordered_json& j, const RelationSemantics& s);
void to_json(nlohmann::ordered_json& j, const Relation& r);
void to_json(nlohmann::ordered_json& j, const SupplementPair& p);
void to_json(nlohmann::ordered_json& j, const MatchedAuthor& m);
void to_json(nlohmann::ordered_json& j, const AuthorAlignment& a);
void to_json(nlohmann::ordered_json& j, const ExceptionClass& e);
void to_json(nlohmann::ordered_json& j, const VariationAnnotation& v);

AuthorMention author_mention_from_json(const nlohmann::ordered_json& j);
AuthorList author_list_from_json(const nlohmann::ordered_json& j);
ResearchProduct research_product_from_json(const nlohmann::ordered_json& j);
RelationSemantics relation_semantics_from_json(const nlohmann::ordered_json& j);
Relation relation_from_json(const nlohmann::ordered_json& j);
SupplementPair supplement_pair_from_json(const nlohmann::ordered_json& j);
MatchedAuthor matched_author_from_json(const nlohmann::ordered_json& j);
AuthorAlignment author_alignment_from_json(const nlohmann::ordered_json& j);
ExceptionClass exception_class_from_json(const nlohmann::ordered_json& j);
VariationAnnotation variation_annotation_from_json(const nlohmann::ordered_json& j);

}  // namespace suppdiff
