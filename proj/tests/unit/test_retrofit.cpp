#include <doctest.h>

#include "builders.hpp"
#include "suppdiff/pair_selection.hpp"
#include "suppdiff/retrofit.hpp"

using namespace suppdiff;
using namespace suppdiff::testing;

namespace {

struct RuleFixture {
    std::vector<ProductPtr> products;
    std::vector<Relation> relations;

    ProductIndex index() const { return build_product_index(products).index; }
};

// One publication, three candidate datasets with varying rule outcomes.
RuleFixture basic_fixture() {
    RuleFixture f;
    f.products = {
        product("p", ProductKind::publication, names({"Ada Lovelace", "Grace Hopper"}),
                "pub", "2021-01-01"),
        product("near", ProductKind::dataset, names({"Ada Lovelace"}), "d1",
                "2021-04-01"),  // 90 days, shared author
        product("far", ProductKind::dataset, names({"Ada Lovelace"}), "d2",
                "2021-08-29"),  // 240 days
        product("stranger", ProductKind::dataset, names({"Zo Zologist"}), "d3",
                "2021-01-01"),  // same day, no shared author
    };
    f.relations = {
        relation("p", "near", "Cites"),
        relation("p", "far", "Cites"),
        relation("p", "stranger", "References"),
    };
    return f;
}

}  // namespace

TEST_CASE("the rule retrofits qualifying vanilla relations only") {
    const auto f = basic_fixture();
    const auto outcome =
        retrofit_by_rule(f.index(), f.relations, RetrofitRuleConfig{}, MatchConfig{});
    REQUIRE(outcome.inferred.size() == 1);
    const auto& r = outcome.inferred[0];
    CHECK(r.source_id == "p");
    CHECK(r.target_id == "near");
    CHECK(r.semantics.type() == RelationType::is_supplemented_by);
    CHECK(r.provenance == Provenance::inferred);
    CHECK(outcome.skipped_window == 1);
    CHECK(outcome.skipped_shared_authors == 1);
}

TEST_CASE("retrofit evaluates both orientations, emitting canonical p->d") {
    auto f = basic_fixture();
    f.relations = {relation("near", "p", "Cites")};  // dataset cites publication
    const auto outcome =
        retrofit_by_rule(f.index(), f.relations, RetrofitRuleConfig{}, MatchConfig{});
    REQUIRE(outcome.inferred.size() == 1);
    CHECK(outcome.inferred[0].source_id == "p");
    CHECK(outcome.inferred[0].target_id == "near");
}

TEST_CASE("candidates with missing dates are skipped and counted") {
    RuleFixture f;
    f.products = {
        product("p", ProductKind::publication, names({"Ada Lovelace"}), "pub"),
        product("d", ProductKind::dataset, names({"Ada Lovelace"}), "data",
                "2021-01-01"),
    };
    f.relations = {relation("p", "d", "Cites")};
    const auto outcome =
        retrofit_by_rule(f.index(), f.relations, RetrofitRuleConfig{}, MatchConfig{});
    CHECK(outcome.inferred.empty());
    CHECK(outcome.skipped_missing_date == 1);
}

TEST_CASE("asserted supplement relations are never overridden") {
    auto f = basic_fixture();
    f.relations.push_back(relation("p", "near", "IsSupplementedBy"));
    const auto outcome =
        retrofit_by_rule(f.index(), f.relations, RetrofitRuleConfig{}, MatchConfig{});
    CHECK(outcome.inferred.empty());
    CHECK(outcome.skipped_existing == 1);
}

TEST_CASE("retrofitting twice adds nothing new") {
    auto f = basic_fixture();
    const auto first =
        retrofit_by_rule(f.index(), f.relations, RetrofitRuleConfig{}, MatchConfig{});
    REQUIRE(first.inferred.size() == 1);
    auto enlarged = f.relations;
    enlarged.insert(enlarged.end(), first.inferred.begin(), first.inferred.end());
    const auto second =
        retrofit_by_rule(f.index(), enlarged, RetrofitRuleConfig{}, MatchConfig{});
    CHECK(second.inferred.empty());
}

TEST_CASE("enlarging the window never removes an inferred relation") {
    const auto f = basic_fixture();
    RetrofitRuleConfig narrow;  // 183 days
    RetrofitRuleConfig wide;
    wide.window_days = 365;
    const auto small =
        retrofit_by_rule(f.index(), f.relations, narrow, MatchConfig{});
    const auto large = retrofit_by_rule(f.index(), f.relations, wide, MatchConfig{});
    for (const auto& r : small.inferred)
        CHECK(std::find(large.inferred.begin(), large.inferred.end(), r) !=
              large.inferred.end());
    CHECK(large.inferred.size() == 2);  // the 240-day pair now qualifies
}

TEST_CASE("rule config validation") {
    RetrofitRuleConfig bad;
    bad.window_days = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.window_days = 183;
    bad.min_shared_authors = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("feature vectors capture date, title, subject and author overlap") {
    ResearchProduct pub;
    pub.id = "p";
    pub.kind = ProductKind::publication;
    pub.title = "Tidal data survey";
    pub.authors = names({"Ada Lovelace", "Grace Hopper"});
    pub.date = parse_flexible_date("2021-01-01");
    pub.subjects = {"Tides", "ocean"};

    ResearchProduct sup;
    sup.id = "d";
    sup.kind = ProductKind::dataset;
    sup.title = "Tidal survey";
    sup.authors = names({"Ada Lovelace"});
    sup.date = parse_flexible_date("2021-01-31");
    sup.subjects = {"tides"};

    const auto fv = build_feature_vector(pub, sup, MatchConfig{});
    CHECK(fv.date_delta_days == 30);
    CHECK(fv.title_similarity == doctest::Approx(2.0 / 3.0));  // {tidal,survey} of 3
    CHECK(fv.subject_overlap == doctest::Approx(0.5));
    CHECK(fv.author_overlap == doctest::Approx(0.5));

    sup.date.reset();
    const auto fv2 = build_feature_vector(pub, sup, MatchConfig{});
    CHECK(!fv2.date_delta_days.has_value());
}

TEST_CASE("score is the weighted mean of the feature components") {
    FeatureVector fv;
    const ScoreWeights uniform;

    SUBCASE("all ones") {
        fv.date_delta_days = 0;
        fv.title_similarity = fv.subject_overlap = fv.author_overlap = 1.0;
        CHECK(score(fv, uniform) == doctest::Approx(1.0));
    }
    SUBCASE("all zeros") {
        fv.date_delta_days = 365;
        CHECK(score(fv, uniform) == doctest::Approx(0.0));
    }
    SUBCASE("hand arithmetic") {
        fv.date_delta_days = 0;       // component 1.0
        fv.title_similarity = 0.5;
        fv.subject_overlap = 0.0;
        fv.author_overlap = 0.5;
        CHECK(score(fv, uniform) == doctest::Approx(0.5));
    }
    SUBCASE("an absent date contributes zero but keeps its weight") {
        fv.title_similarity = fv.subject_overlap = fv.author_overlap = 1.0;
        CHECK(score(fv, uniform) == doctest::Approx(0.75));
    }
    SUBCASE("dates beyond a year clamp to zero") {
        fv.date_delta_days = 4000;
        CHECK(score(fv, uniform) == doctest::Approx(0.0));
    }
}

TEST_CASE("score weights validate") {
    CHECK_THROWS_AS(score(FeatureVector{}, ScoreWeights{0.5, 0.5, 0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(score(FeatureVector{}, ScoreWeights{-0.5, 0.5, 0.5, 0.5}),
                    std::invalid_argument);
}

namespace {

// Author-overlap-only scoring makes exact score values constructible:
// |matches| / max sizes.
ScoreWeights authors_only() { return ScoreWeights{0.0, 0.0, 0.0, 1.0}; }

SupplementPair pair_with_overlap(int shared, int total, const std::string& tag) {
    std::vector<std::string> pub_names;
    for (int i = 0; i < total; ++i)
        pub_names.push_back("author " + tag + std::to_string(i));
    std::vector<std::string> sup_names(pub_names.begin(),
                                       pub_names.begin() + shared);
    return SupplementPair(
        product("p" + tag, ProductKind::publication, names(pub_names)),
        product("d" + tag, ProductKind::dataset, names(sup_names)),
        Provenance::asserted);
}

}  // namespace

TEST_CASE("calibrate_interval: scores {0.8, 0.9, 1.0} give [0.7, 1.1]") {
    const std::vector<SupplementPair> known = {
        pair_with_overlap(4, 5, "a"),    // 0.8
        pair_with_overlap(9, 10, "b"),   // 0.9
        pair_with_overlap(1, 1, "c"),    // 1.0
    };
    const auto interval =
        calibrate_interval(known, authors_only(), MatchConfig{});
    CHECK(interval.mean == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(interval.std == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(interval.low() == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(interval.high() == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(interval.contains(0.85));
    CHECK(!interval.contains(0.5));
}

TEST_CASE("equal scores calibrate to a degenerate interval") {
    const std::vector<SupplementPair> known = {
        pair_with_overlap(3, 5, "a"),
        pair_with_overlap(3, 5, "b"),
        pair_with_overlap(3, 5, "c"),
    };
    const auto interval =
        calibrate_interval(known, authors_only(), MatchConfig{});
    CHECK(interval.std == doctest::Approx(0.0));
    CHECK(interval.low() == doctest::Approx(interval.high()));
}

TEST_CASE("calibration requires at least two known pairs") {
    const std::vector<SupplementPair> known = {pair_with_overlap(1, 1, "a")};
    CHECK_THROWS_AS(calibrate_interval(known, authors_only(), MatchConfig{}),
                    std::invalid_argument);
}

TEST_CASE("infer_supplement admits scores inside the interval only") {
    // Interval [0.7, 1.1] as calibrated above.
    const ScoreInterval interval{0.9, 0.1, 2.0};

    std::vector<ProductPtr> products;
    std::vector<Relation> relations;
    const auto add_candidate = [&](int shared, int total, const std::string& tag) {
        std::vector<std::string> pub_names;
        for (int i = 0; i < total; ++i)
            pub_names.push_back("author " + tag + std::to_string(i));
        std::vector<std::string> sup_names(pub_names.begin(),
                                           pub_names.begin() + shared);
        products.push_back(
            product("p" + tag, ProductKind::publication, names(pub_names)));
        products.push_back(
            product("d" + tag, ProductKind::dataset, names(sup_names)));
        relations.push_back(relation("p" + tag, "d" + tag, "Cites"));
    };
    add_candidate(17, 20, "in");   // score 0.85
    add_candidate(1, 2, "out");    // score 0.5

    const auto index = build_product_index(products).index;
    const auto outcome = infer_supplement(index, relations, interval,
                                          authors_only(), MatchConfig{});
    REQUIRE(outcome.inferred.size() == 1);
    CHECK(outcome.inferred[0].source_id == "pin");
    CHECK(outcome.inferred[0].target_id == "din");
    CHECK(outcome.skipped_score == 1);

    // An already-supplemented couple is not re-emitted.
    relations.push_back(relation("pin", "din", "IsSupplementedBy"));
    const auto again = infer_supplement(index, relations, interval,
                                        authors_only(), MatchConfig{});
    CHECK(again.inferred.empty());
    CHECK(again.skipped_existing == 1);
}

TEST_CASE("inferred relations satisfy their generating rule when re-checked") {
    const auto f = basic_fixture();
    const auto index = f.index();
    const RetrofitRuleConfig cfg;
    const auto outcome = retrofit_by_rule(index, f.relations, cfg, MatchConfig{});
    for (const auto& r : outcome.inferred) {
        const auto& pub = *index.at(r.source_id);
        const auto& sup = *index.at(r.target_id);
        REQUIRE(pub.date.has_value());
        REQUIRE(sup.date.has_value());
        CHECK(std::abs(days_between(*pub.date, *sup.date)) <= cfg.window_days);
        const auto alignment =
            match_author_sets(pub.authors, sup.authors, MatchConfig{});
        CHECK(alignment.matches().size() >=
              static_cast<std::size_t>(cfg.min_shared_authors));
    }
}
