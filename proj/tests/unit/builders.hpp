#pragma once

// Small fixture builders shared across the unit suites.

#include <initializer_list>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "suppdiff/core_model.hpp"
#include "suppdiff/ingest.hpp"

namespace suppdiff::testing {

inline AuthorList byline(std::initializer_list<std::pair<int, const char*>> entries) {
    std::vector<AuthorMention> mentions;
    for (const auto& [pos, name] : entries) mentions.emplace_back(pos, name);
    return AuthorList(std::move(mentions));
}

/// Byline from names in order, positions 1..n.
inline AuthorList names(const std::vector<std::string>& list) {
    std::vector<AuthorMention> mentions;
    int pos = 0;
    for (const auto& n : list) mentions.emplace_back(++pos, n);
    return AuthorList(std::move(mentions));
}

inline ProductPtr product(std::string id, ProductKind kind,
                          AuthorList authors = {}, std::string title = "title",
                          std::optional<std::string> date = std::nullopt) {
    ResearchProduct p;
    p.id = std::move(id);
    p.kind = kind;
    p.title = std::move(title);
    p.authors = std::move(authors);
    if (date) p.date = parse_flexible_date(*date);
    return std::make_shared<const ResearchProduct>(std::move(p));
}

inline Relation relation(std::string source, std::string target,
                         const char* label,
                         Provenance provenance = Provenance::asserted) {
    return Relation{std::move(source), std::move(target),
                    RelationSemantics::from_label(label), provenance};
}

}  // namespace suppdiff::testing
