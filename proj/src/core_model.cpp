#include "suppdiff/core_model.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace suppdiff {

namespace {

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isspace(c) != 0;
    });
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

}  // namespace

long days_between(const CalendarDate& a, const CalendarDate& b) {
    using std::chrono::sys_days;
    return (sys_days{b} - sys_days{a}).count();
}

std::string format_date(const CalendarDate& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(d.year()),
                  unsigned(d.month()), unsigned(d.day()));
    return buf;
}

std::string_view to_string(ProductKind k) {
    switch (k) {
        case ProductKind::publication: return "publication";
        case ProductKind::dataset: return "dataset";
        case ProductKind::software: return "software";
    }
    return "publication";
}

std::optional<ProductKind> product_kind_from_string(std::string_view s) {
    if (s == "publication") return ProductKind::publication;
    if (s == "dataset") return ProductKind::dataset;
    if (s == "software") return ProductKind::software;
    return std::nullopt;
}

std::string_view to_string(Provenance p) {
    return p == Provenance::asserted ? "asserted" : "inferred";
}

std::optional<Provenance> provenance_from_string(std::string_view s) {
    if (s == "asserted") return Provenance::asserted;
    if (s == "inferred") return Provenance::inferred;
    return std::nullopt;
}

AuthorMention::AuthorMention(int position, std::string full_name,
                             std::optional<std::string> orcid)
    : position_(position),
      full_name_(std::move(full_name)),
      orcid_(std::move(orcid)) {
    if (position_ < 1)
        throw std::invalid_argument("author position must be >= 1, got " +
                                    std::to_string(position_));
    if (full_name_.empty() || is_blank(full_name_))
        throw std::invalid_argument("author full_name must be non-empty");
}

AuthorList::AuthorList(std::vector<AuthorMention> mentions)
    : mentions_(std::move(mentions)) {
    std::sort(mentions_.begin(), mentions_.end(),
              [](const AuthorMention& a, const AuthorMention& b) {
                  return a.position() < b.position();
              });
    for (std::size_t i = 1; i < mentions_.size(); ++i) {
        if (mentions_[i - 1].position() == mentions_[i].position())
            throw std::invalid_argument(
                "duplicate author position " +
                std::to_string(mentions_[i].position()) + " in byline");
    }
}

RelationSemantics RelationSemantics::from_label(std::string_view label) {
    const std::string low = ascii_lower(label);
    if (low == "issupplementedby") return is_supplemented_by();
    if (low == "cites") return cites();
    if (low == "references") return references();
    return RelationSemantics(RelationType::other, std::string(label));
}

RelationSemantics RelationSemantics::is_supplemented_by() {
    return RelationSemantics(RelationType::is_supplemented_by, "IsSupplementedBy");
}

RelationSemantics RelationSemantics::cites() {
    return RelationSemantics(RelationType::cites, "Cites");
}

RelationSemantics RelationSemantics::references() {
    return RelationSemantics(RelationType::references, "References");
}

SupplementPair::SupplementPair(ProductPtr publication, ProductPtr supplement,
                               Provenance provenance)
    : publication_(std::move(publication)),
      supplement_(std::move(supplement)),
      provenance_(provenance) {
    if (!publication_ || !supplement_)
        throw std::invalid_argument("supplement pair endpoints must be non-null");
    if (publication_->kind != ProductKind::publication)
        throw std::invalid_argument("pair source '" + publication_->id +
                                    "' is not a publication");
    if (supplement_->kind != ProductKind::dataset &&
        supplement_->kind != ProductKind::software)
        throw std::invalid_argument("pair supplement '" + supplement_->id +
                                    "' is neither dataset nor software");
}

bool SupplementPair::operator==(const SupplementPair& o) const {
    return *publication_ == *o.publication_ && *supplement_ == *o.supplement_ &&
           provenance_ == o.provenance_;
}

std::string_view to_string(MatchMethod m) {
    switch (m) {
        case MatchMethod::orcid: return "orcid";
        case MatchMethod::exact: return "exact";
        case MatchMethod::fuzzy: return "fuzzy";
    }
    return "exact";
}

std::optional<MatchMethod> match_method_from_string(std::string_view s) {
    if (s == "orcid") return MatchMethod::orcid;
    if (s == "exact") return MatchMethod::exact;
    if (s == "fuzzy") return MatchMethod::fuzzy;
    return std::nullopt;
}

MatchedAuthor::MatchedAuthor(AuthorMention p_mention, AuthorMention d_mention,
                             MatchMethod method, double score)
    : p_mention_(std::move(p_mention)),
      d_mention_(std::move(d_mention)),
      method_(method),
      score_(score) {
    if (!(score_ >= 0.0 && score_ <= 1.0))
        throw std::invalid_argument("match score outside [0,1]");
    if ((method_ == MatchMethod::orcid || method_ == MatchMethod::exact) &&
        score_ != 1.0)
        throw std::invalid_argument("orcid/exact matches must have score 1.0");
}

namespace {

void check_distinct_positions(std::vector<int>& positions, const char* side) {
    std::sort(positions.begin(), positions.end());
    if (std::adjacent_find(positions.begin(), positions.end()) != positions.end())
        throw std::invalid_argument(std::string("alignment is not one-to-one on the ") +
                                    side + " side");
}

}  // namespace

AuthorAlignment::AuthorAlignment(std::vector<MatchedAuthor> matches,
                                 std::vector<AuthorMention> additions,
                                 std::vector<AuthorMention> removals)
    : matches_(std::move(matches)),
      additions_(std::move(additions)),
      removals_(std::move(removals)) {
    std::sort(matches_.begin(), matches_.end(),
              [](const MatchedAuthor& a, const MatchedAuthor& b) {
                  return a.p_mention().position() < b.p_mention().position();
              });
    auto by_position = [](const AuthorMention& a, const AuthorMention& b) {
        return a.position() < b.position();
    };
    std::sort(additions_.begin(), additions_.end(), by_position);
    std::sort(removals_.begin(), removals_.end(), by_position);

    std::vector<int> p_side;
    p_side.reserve(matches_.size() + removals_.size());
    for (const auto& m : matches_) p_side.push_back(m.p_mention().position());
    for (const auto& r : removals_) p_side.push_back(r.position());
    check_distinct_positions(p_side, "publication");

    std::vector<int> d_side;
    d_side.reserve(matches_.size() + additions_.size());
    for (const auto& m : matches_) d_side.push_back(m.d_mention().position());
    for (const auto& a : additions_) d_side.push_back(a.position());
    check_distinct_positions(d_side, "supplement");
}

std::string_view to_string(ExceptionKind k) {
    switch (k) {
        case ExceptionKind::group_attribution: return "group_attribution";
        case ExceptionKind::null_intersection: return "null_intersection";
        case ExceptionKind::other: return "other";
    }
    return "other";
}

std::string_view to_string(ShuffleAdjacency a) {
    return a == ShuffleAdjacency::adjacent_only ? "adjacent_only"
                                                : "involves_non_adjacent";
}

std::optional<ShuffleAdjacency> shuffle_adjacency_from_string(std::string_view s) {
    if (s == "adjacent_only") return ShuffleAdjacency::adjacent_only;
    if (s == "involves_non_adjacent") return ShuffleAdjacency::involves_non_adjacent;
    return std::nullopt;
}

VariationAnnotation::VariationAnnotation(
    bool addition, bool removal, bool shuffle,
    std::optional<ExceptionClass> exception,
    std::optional<ShuffleAdjacency> shuffle_adjacency)
    : addition_(addition),
      removal_(removal),
      shuffle_(shuffle),
      exception_(std::move(exception)),
      shuffle_adjacency_(shuffle_adjacency) {
    if (exception_ && (addition_ || removal_ || shuffle_))
        throw std::invalid_argument(
            "excepted pairs must carry no event flags");
    if (shuffle_adjacency_.has_value() != shuffle_)
        throw std::invalid_argument(
            "shuffle_adjacency must be present exactly when shuffle is set");
}

// --- JSON ---

using ordered_json = nlohmann::ordered_json;

void to_json(ordered_json& j, const AuthorMention& m) {
    j = ordered_json{{"position", m.position()}, {"full_name", m.full_name()}};
    if (m.orcid()) j["orcid"] = *m.orcid();
}

AuthorMention author_mention_from_json(const ordered_json& j) {
    std::optional<std::string> orcid;
    if (j.contains("orcid")) orcid = j.at("orcid").get<std::string>();
    return AuthorMention(j.at("position").get<int>(),
                         j.at("full_name").get<std::string>(), std::move(orcid));
}

void to_json(ordered_json& j, const AuthorList& l) {
    j = ordered_json::array();
    for (const auto& m : l) j.push_back(ordered_json(m));
}

AuthorList author_list_from_json(const ordered_json& j) {
    std::vector<AuthorMention> mentions;
    mentions.reserve(j.size());
    for (const auto& e : j) mentions.push_back(author_mention_from_json(e));
    return AuthorList(std::move(mentions));
}

void to_json(ordered_json& j, const ResearchProduct& p) {
    j = ordered_json{{"id", p.id},
                     {"kind", to_string(p.kind)},
                     {"title", p.title},
                     {"authors", ordered_json(p.authors)}};
    if (p.date) j["date"] = format_date(*p.date);
    j["subjects"] = p.subjects;
}

ResearchProduct research_product_from_json(const ordered_json& j) {
    ResearchProduct p;
    p.id = j.at("id").get<std::string>();
    auto kind = product_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("unknown product kind");
    p.kind = *kind;
    p.title = j.at("title").get<std::string>();
    p.authors = author_list_from_json(j.at("authors"));
    if (j.contains("date")) {
        const auto s = j.at("date").get<std::string>();
        if (s.size() != 10)
            throw std::invalid_argument("expected YYYY-MM-DD date: " + s);
        CalendarDate d{std::chrono::year(std::stoi(s.substr(0, 4))),
                       std::chrono::month(unsigned(std::stoi(s.substr(5, 2)))),
                       std::chrono::day(unsigned(std::stoi(s.substr(8, 2))))};
        if (!d.ok()) throw std::invalid_argument("invalid date: " + s);
        p.date = d;
    }
    if (j.contains("subjects"))
        p.subjects = j.at("subjects").get<std::set<std::string>>();
    return p;
}

void to_json(ordered_json& j, const RelationSemantics& s) {
    j = ordered_json{{"label", s.label()}};
}

RelationSemantics relation_semantics_from_json(const ordered_json& j) {
    return RelationSemantics::from_label(j.at("label").get<std::string>());
}

void to_json(ordered_json& j, const Relation& r) {
    j = ordered_json{{"source_id", r.source_id},
                     {"target_id", r.target_id},
                     {"semantics", ordered_json(r.semantics)},
                     {"provenance", to_string(r.provenance)}};
}

Relation relation_from_json(const ordered_json& j) {
    Relation r;
    r.source_id = j.at("source_id").get<std::string>();
    r.target_id = j.at("target_id").get<std::string>();
    r.semantics = relation_semantics_from_json(j.at("semantics"));
    auto prov = provenance_from_string(j.at("provenance").get<std::string>());
    if (!prov) throw std::invalid_argument("unknown provenance");
    r.provenance = *prov;
    return r;
}

void to_json(ordered_json& j, const SupplementPair& p) {
    j = ordered_json{{"publication", ordered_json(p.publication())},
                     {"supplement", ordered_json(p.supplement())},
                     {"provenance", to_string(p.provenance())}};
}

SupplementPair supplement_pair_from_json(const ordered_json& j) {
    auto pub = std::make_shared<ResearchProduct>(
        research_product_from_json(j.at("publication")));
    auto sup = std::make_shared<ResearchProduct>(
        research_product_from_json(j.at("supplement")));
    auto prov = provenance_from_string(j.at("provenance").get<std::string>());
    if (!prov) throw std::invalid_argument("unknown provenance");
    return SupplementPair(std::move(pub), std::move(sup), *prov);
}

void to_json(ordered_json& j, const MatchedAuthor& m) {
    j = ordered_json{{"p_mention", ordered_json(m.p_mention())},
                     {"d_mention", ordered_json(m.d_mention())},
                     {"method", to_string(m.method())},
                     {"score", m.score()}};
}

MatchedAuthor matched_author_from_json(const ordered_json& j) {
    auto method = match_method_from_string(j.at("method").get<std::string>());
    if (!method) throw std::invalid_argument("unknown match method");
    return MatchedAuthor(author_mention_from_json(j.at("p_mention")),
                         author_mention_from_json(j.at("d_mention")), *method,
                         j.at("score").get<double>());
}

void to_json(ordered_json& j, const AuthorAlignment& a) {
    auto matches = ordered_json::array();
    for (const auto& m : a.matches()) matches.push_back(ordered_json(m));
    auto additions = ordered_json::array();
    for (const auto& m : a.additions()) additions.push_back(ordered_json(m));
    auto removals = ordered_json::array();
    for (const auto& m : a.removals()) removals.push_back(ordered_json(m));
    j = ordered_json{{"matches", std::move(matches)},
                     {"additions", std::move(additions)},
                     {"removals", std::move(removals)}};
}

AuthorAlignment author_alignment_from_json(const ordered_json& j) {
    std::vector<MatchedAuthor> matches;
    for (const auto& e : j.at("matches"))
        matches.push_back(matched_author_from_json(e));
    std::vector<AuthorMention> additions;
    for (const auto& e : j.at("additions"))
        additions.push_back(author_mention_from_json(e));
    std::vector<AuthorMention> removals;
    for (const auto& e : j.at("removals"))
        removals.push_back(author_mention_from_json(e));
    return AuthorAlignment(std::move(matches), std::move(additions),
                           std::move(removals));
}

void to_json(ordered_json& j, const ExceptionClass& e) {
    j = ordered_json{{"kind", to_string(e.kind)}};
    if (!e.reason.empty()) j["reason"] = e.reason;
}

ExceptionClass exception_class_from_json(const ordered_json& j) {
    ExceptionClass e;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "group_attribution") e.kind = ExceptionKind::group_attribution;
    else if (kind == "null_intersection") e.kind = ExceptionKind::null_intersection;
    else if (kind == "other") e.kind = ExceptionKind::other;
    else throw std::invalid_argument("unknown exception kind: " + kind);
    if (j.contains("reason")) e.reason = j.at("reason").get<std::string>();
    return e;
}

void to_json(ordered_json& j, const VariationAnnotation& v) {
    j = ordered_json{{"addition", v.addition()},
                     {"removal", v.removal()},
                     {"shuffle", v.shuffle()}};
    if (v.exception()) j["exception"] = ordered_json(*v.exception());
    if (v.shuffle_adjacency())
        j["shuffle_adjacency"] = to_string(*v.shuffle_adjacency());
}

VariationAnnotation variation_annotation_from_json(const ordered_json& j) {
    std::optional<ExceptionClass> exception;
    if (j.contains("exception"))
        exception = exception_class_from_json(j.at("exception"));
    std::optional<ShuffleAdjacency> adjacency;
    if (j.contains("shuffle_adjacency")) {
        adjacency = shuffle_adjacency_from_string(
            j.at("shuffle_adjacency").get<std::string>());
        if (!adjacency) throw std::invalid_argument("unknown shuffle adjacency");
    }
    return VariationAnnotation(j.at("addition").get<bool>(),
                               j.at("removal").get<bool>(),
                               j.at("shuffle").get<bool>(), std::move(exception),
                               adjacency);
}

}  // namespace suppdiff
