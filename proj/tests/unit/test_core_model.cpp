#include <doctest.h>

#include "suppdiff/core_model.hpp"

using namespace suppdiff;
using nlohmann::ordered_json;

namespace {

AuthorList byline(std::initializer_list<std::pair<int, const char*>> entries) {
    std::vector<AuthorMention> mentions;
    for (const auto& [pos, name] : entries) mentions.emplace_back(pos, name);
    return AuthorList(std::move(mentions));
}

ProductPtr make_product(std::string id, ProductKind kind, std::string title,
                        AuthorList authors = {}) {
    ResearchProduct p;
    p.id = std::move(id);
    p.kind = kind;
    p.title = std::move(title);
    p.authors = std::move(authors);
    return std::make_shared<const ResearchProduct>(std::move(p));
}

}  // namespace

TEST_CASE("AuthorMention enforces its invariants") {
    CHECK_THROWS_AS(AuthorMention(0, "Ada Lovelace"), std::invalid_argument);
    CHECK_THROWS_AS(AuthorMention(-3, "Ada Lovelace"), std::invalid_argument);
    CHECK_THROWS_AS(AuthorMention(1, ""), std::invalid_argument);
    CHECK_THROWS_AS(AuthorMention(1, "   \t"), std::invalid_argument);
    const AuthorMention ok(2, "Ada Lovelace", "0000-0001-0000-0000");
    CHECK(ok.position() == 2);
}

TEST_CASE("AuthorList rejects duplicate positions and orders mentions") {
    CHECK_THROWS_AS(byline({{1, "a"}, {1, "b"}}), std::invalid_argument);
    const auto list = byline({{3, "c"}, {1, "a"}, {2, "b"}});
    REQUIRE(list.size() == 3);
    CHECK(list.mentions()[0].position() == 1);
    CHECK(list.mentions()[1].position() == 2);
    CHECK(list.mentions()[2].position() == 3);
}

TEST_CASE("RelationSemantics recognizes the analysis labels case-insensitively") {
    CHECK(RelationSemantics::from_label("IsSupplementedBy").type() ==
          RelationType::is_supplemented_by);
    CHECK(RelationSemantics::from_label("issupplementedby").type() ==
          RelationType::is_supplemented_by);
    CHECK(RelationSemantics::from_label("CITES").type() == RelationType::cites);
    CHECK(RelationSemantics::from_label("References").type() ==
          RelationType::references);
    const auto other = RelationSemantics::from_label("HasVersion");
    CHECK(other.type() == RelationType::other);
    CHECK(other.label() == "HasVersion");  // verbatim
}

TEST_CASE("SupplementPair checks endpoint kinds") {
    const auto pub = make_product("p", ProductKind::publication, "t");
    const auto data = make_product("d", ProductKind::dataset, "t");
    const auto sw = make_product("s", ProductKind::software, "t");
    CHECK_NOTHROW(SupplementPair(pub, data, Provenance::asserted));
    CHECK_NOTHROW(SupplementPair(pub, sw, Provenance::inferred));
    CHECK_THROWS_AS(SupplementPair(data, pub, Provenance::asserted),
                    std::invalid_argument);
    CHECK_THROWS_AS(SupplementPair(pub, pub, Provenance::asserted),
                    std::invalid_argument);
}

TEST_CASE("MatchedAuthor requires score 1.0 for orcid and exact matches") {
    const AuthorMention a(1, "x");
    const AuthorMention b(1, "y");
    CHECK_NOTHROW(MatchedAuthor(a, b, MatchMethod::exact, 1.0));
    CHECK_THROWS_AS(MatchedAuthor(a, b, MatchMethod::exact, 0.95),
                    std::invalid_argument);
    CHECK_THROWS_AS(MatchedAuthor(a, b, MatchMethod::orcid, 0.5),
                    std::invalid_argument);
    CHECK_NOTHROW(MatchedAuthor(a, b, MatchMethod::fuzzy, 0.92));
    CHECK_THROWS_AS(MatchedAuthor(a, b, MatchMethod::fuzzy, 1.2),
                    std::invalid_argument);
}

TEST_CASE("AuthorAlignment rejects one-to-many matchings") {
    const AuthorMention p1(1, "a");
    const AuthorMention d1(1, "a");
    const AuthorMention d2(2, "b");
    // p1 matched twice.
    CHECK_THROWS_AS(
        AuthorAlignment({MatchedAuthor(p1, d1, MatchMethod::exact, 1.0),
                         MatchedAuthor(p1, d2, MatchMethod::fuzzy, 0.95)},
                        {}, {}),
        std::invalid_argument);
    // p1 both matched and removed.
    CHECK_THROWS_AS(
        AuthorAlignment({MatchedAuthor(p1, d1, MatchMethod::exact, 1.0)}, {},
                        {p1}),
        std::invalid_argument);
    // d1 both matched and added.
    CHECK_THROWS_AS(
        AuthorAlignment({MatchedAuthor(p1, d1, MatchMethod::exact, 1.0)}, {d1},
                        {}),
        std::invalid_argument);
}

TEST_CASE("AuthorAlignment keeps matches ordered by publication position") {
    const auto m1 = MatchedAuthor(AuthorMention(2, "b"), AuthorMention(1, "b"),
                                  MatchMethod::exact, 1.0);
    const auto m2 = MatchedAuthor(AuthorMention(1, "a"), AuthorMention(2, "a"),
                                  MatchMethod::exact, 1.0);
    const AuthorAlignment alignment({m1, m2}, {}, {});
    CHECK(alignment.matches()[0].p_mention().position() == 1);
    CHECK(alignment.matches()[1].p_mention().position() == 2);
}

TEST_CASE("VariationAnnotation invariants") {
    // Excepted pairs carry no flags.
    CHECK_THROWS_AS(
        VariationAnnotation(true, false, false,
                            ExceptionClass{ExceptionKind::group_attribution, {}}),
        std::invalid_argument);
    // Adjacency present iff shuffle.
    CHECK_THROWS_AS(VariationAnnotation(false, false, true), std::invalid_argument);
    CHECK_THROWS_AS(VariationAnnotation(true, false, false, std::nullopt,
                                        ShuffleAdjacency::adjacent_only),
                    std::invalid_argument);
    CHECK_NOTHROW(VariationAnnotation(false, true, true, std::nullopt,
                                      ShuffleAdjacency::involves_non_adjacent));
    CHECK_NOTHROW(VariationAnnotation(
        false, false, false, ExceptionClass{ExceptionKind::other, "empty author list"}));
}

TEST_CASE("calendar helpers") {
    const CalendarDate a{std::chrono::year(2021), std::chrono::month(7),
                         std::chrono::day(1)};
    const CalendarDate b{std::chrono::year(2021), std::chrono::month(12),
                         std::chrono::day(31)};
    CHECK(days_between(a, b) == 183);
    CHECK(days_between(b, a) == -183);
    CHECK(format_date(a) == "2021-07-01");
}

TEST_CASE("serialization round-trips are loss-free and stable") {
    ResearchProduct p;
    p.id = "prod/1";
    p.kind = ProductKind::dataset;
    p.title = "Tidal, data \"raw\"";
    p.authors = byline({{1, "Ada Lovelace"}, {2, "Müller, J."}});
    p.date = CalendarDate{std::chrono::year(2020), std::chrono::month(2),
                          std::chrono::day(29)};
    p.subjects = {"tides", "ocean"};

    SUBCASE("research product") {
        const ordered_json j(p);
        const auto back = research_product_from_json(j);
        CHECK(back == p);
        CHECK(ordered_json(back).dump() == j.dump());
    }

    SUBCASE("supplement pair") {
        const auto pub = make_product("p", ProductKind::publication, "t",
                                      byline({{1, "Ada Lovelace"}}));
        const SupplementPair pair(pub, std::make_shared<const ResearchProduct>(p),
                                  Provenance::inferred);
        const ordered_json j(pair);
        const auto back = supplement_pair_from_json(j);
        CHECK(back == pair);
        CHECK(ordered_json(back).dump() == j.dump());
    }

    SUBCASE("relation") {
        const Relation r{"a", "b", RelationSemantics::from_label("HasPart"),
                         Provenance::asserted};
        const ordered_json j(r);
        const auto back = relation_from_json(j);
        CHECK(back == r);
        CHECK(ordered_json(back).dump() == j.dump());
    }

    SUBCASE("alignment and annotation") {
        const AuthorAlignment alignment(
            {MatchedAuthor(AuthorMention(1, "a"), AuthorMention(2, "a"),
                           MatchMethod::exact, 1.0),
             MatchedAuthor(AuthorMention(2, "b"), AuthorMention(1, "bb"),
                           MatchMethod::fuzzy, 0.95)},
            {AuthorMention(3, "new")}, {AuthorMention(3, "gone")});
        const ordered_json ja(alignment);
        CHECK(author_alignment_from_json(ja) == alignment);
        CHECK(ordered_json(author_alignment_from_json(ja)).dump() == ja.dump());

        const VariationAnnotation v(true, true, true, std::nullopt,
                                    ShuffleAdjacency::adjacent_only);
        const ordered_json jv(v);
        CHECK(variation_annotation_from_json(jv) == v);

        const VariationAnnotation exc(
            false, false, false, ExceptionClass{ExceptionKind::other, "why"});
        const ordered_json je(exc);
        CHECK(variation_annotation_from_json(je) == exc);
        CHECK(ordered_json(variation_annotation_from_json(je)).dump() == je.dump());
    }
}
