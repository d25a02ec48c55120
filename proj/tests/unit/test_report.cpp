#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "suppdiff/report.hpp"

using namespace suppdiff;

namespace {

AnnotatedPair row(const std::string& pub, const std::string& sup,
                  ProductKind kind, bool a, bool r, bool s,
                  std::optional<ExceptionClass> exc = std::nullopt,
                  std::optional<ShuffleAdjacency> adj = std::nullopt) {
    AnnotatedPair p;
    p.publication_id = pub;
    p.supplement_id = sup;
    p.supplement_kind = kind;
    p.provenance = Provenance::asserted;
    if (s && !adj) adj = ShuffleAdjacency::adjacent_only;
    p.annotation = VariationAnnotation(a, r, s, std::move(exc), adj);
    if (a || r || s) p.methods = {MatchMethod::exact};
    return p;
}

// Synthetic rows realizing given combo counts: counts indexed by bitmask
// (A=1, R=2, S=4), plus unvaried and exception rows.
std::vector<AnnotatedPair> synthesize(ProductKind kind,
                                      const std::array<std::uint64_t, 8>& combos,
                                      std::uint64_t unvaried,
                                      std::uint64_t exc_group,
                                      std::uint64_t exc_null,
                                      std::uint64_t exc_other,
                                      std::uint64_t nonadjacent_shuffles) {
    std::vector<AnnotatedPair> rows;
    std::uint64_t seq = 0;
    std::uint64_t nonadj_left = nonadjacent_shuffles;
    for (unsigned mask = 1; mask < 8; ++mask) {
        for (std::uint64_t i = 0; i < combos[mask]; ++i) {
            const bool s = (mask & 4) != 0;
            std::optional<ShuffleAdjacency> adj;
            if (s) {
                adj = nonadj_left > 0 ? ShuffleAdjacency::involves_non_adjacent
                                      : ShuffleAdjacency::adjacent_only;
                if (nonadj_left > 0) --nonadj_left;
            }
            rows.push_back(row("p" + std::to_string(++seq), "d",
                               kind, (mask & 1) != 0, (mask & 2) != 0, s,
                               std::nullopt, adj));
        }
    }
    for (std::uint64_t i = 0; i < unvaried; ++i)
        rows.push_back(row("u" + std::to_string(i), "d", kind, false, false, false));
    for (std::uint64_t i = 0; i < exc_group; ++i)
        rows.push_back(row("eg" + std::to_string(i), "d", kind, false, false, false,
                           ExceptionClass{ExceptionKind::group_attribution, {}}));
    for (std::uint64_t i = 0; i < exc_null; ++i)
        rows.push_back(row("en" + std::to_string(i), "d", kind, false, false, false,
                           ExceptionClass{ExceptionKind::null_intersection, {}}));
    for (std::uint64_t i = 0; i < exc_other; ++i)
        rows.push_back(row("eo" + std::to_string(i), "d", kind, false, false, false,
                           ExceptionClass{ExceptionKind::other, "empty author list"}));
    return rows;
}

void check_internal_consistency(const ReportSummary& s) {
    CHECK(s.varied_pairs + s.unvaried_pairs == s.total_pairs);
    std::uint64_t combo_sum = 0, a = 0, r = 0, sh = 0;
    for (unsigned mask = 1; mask < 8; ++mask) {
        combo_sum += s.combo_counts[mask];
        if (mask & 1) a += s.combo_counts[mask];
        if (mask & 2) r += s.combo_counts[mask];
        if (mask & 4) sh += s.combo_counts[mask];
    }
    CHECK(combo_sum == s.varied_pairs);
    CHECK(a == s.addition_events);
    CHECK(r == s.removal_events);
    CHECK(sh == s.shuffle_events);
    CHECK(s.total_events == a + r + sh);
    if (s.total_events > 0)
        CHECK(std::abs(s.addition_pct + s.removal_pct + s.shuffle_pct - 100.0) <=
              0.03);
}

}  // namespace

TEST_CASE("percent rounds half-up to two decimals") {
    CHECK(percent(683, 3052) == 22.38);
    CHECK(percent(2369, 3052) == 77.62);
    CHECK(percent(93, 168) == 55.36);
    CHECK(percent(1, 8) == 12.50);
    CHECK(percent(1, 800) == 0.13);  // 0.125 rounds up
    CHECK(percent(1, 3) == 33.33);
    CHECK(percent(2, 3) == 66.67);
    CHECK(percent(0, 10) == 0.0);
    CHECK(percent(10, 10) == 100.0);
    CHECK(percent(5, 0) == 0.0);
}

TEST_CASE("summarize on a four-pair fixture") {
    const std::vector<AnnotatedPair> rows = {
        row("p1", "d1", ProductKind::dataset, true, false, false),
        row("p2", "d2", ProductKind::dataset, false, true, false),
        row("p3", "d3", ProductKind::dataset, true, true, true),
        row("p4", "d4", ProductKind::dataset, false, false, false),
    };
    const auto s = summarize(rows, SummaryScope::dataset);
    CHECK(s.total_pairs == 4);
    CHECK(s.varied_pairs == 3);
    CHECK(s.varied_pct == 75.00);
    CHECK(s.addition_events == 2);
    CHECK(s.removal_events == 2);
    CHECK(s.shuffle_events == 1);
    CHECK(s.total_events == 5);
    CHECK(s.addition_pct == 40.00);
    CHECK(s.removal_pct == 40.00);
    CHECK(s.shuffle_pct == 20.00);
    CHECK(s.multi_event_pairs == 1);
    CHECK(s.multi_event_pct == 33.33);
    check_internal_consistency(s);
}

TEST_CASE("summarize of nothing is all zeros") {
    const auto s = summarize({}, SummaryScope::combined);
    CHECK(s.total_pairs == 0);
    CHECK(s.varied_pct == 0.0);
    CHECK(s.total_events == 0);
    check_internal_consistency(s);
}

TEST_CASE("summarize filters by supplement kind") {
    const std::vector<AnnotatedPair> rows = {
        row("p1", "d1", ProductKind::dataset, true, false, false),
        row("p2", "s1", ProductKind::software, false, true, false),
    };
    CHECK(summarize(rows, SummaryScope::dataset).total_pairs == 1);
    CHECK(summarize(rows, SummaryScope::software).total_pairs == 1);
    CHECK(summarize(rows, SummaryScope::combined).total_pairs == 2);
}

TEST_CASE("the dataset tallies reproduce the reported percentages") {
    // Combos solving the published totals: 683 varied, events 134/608/168,
    // 213 multi-event pairs.
    std::array<std::uint64_t, 8> combos{};
    combos[1] = 11;   // A
    combos[2] = 404;  // R
    combos[4] = 55;   // S
    combos[3] = 100;  // A+R
    combos[5] = 9;    // A+S
    combos[6] = 90;   // R+S
    combos[7] = 14;   // A+R+S
    const auto rows = synthesize(ProductKind::dataset, combos,
                                 /*unvaried=*/2325, /*exc_group=*/22,
                                 /*exc_null=*/10, /*exc_other=*/12,
                                 /*nonadjacent=*/93);
    const auto s = summarize(rows, SummaryScope::dataset);
    CHECK(s.total_pairs == 3052);
    CHECK(s.varied_pairs == 683);
    CHECK(s.unvaried_pairs == 2369);
    CHECK(s.total_events == 910);
    CHECK(s.addition_events == 134);
    CHECK(s.removal_events == 608);
    CHECK(s.shuffle_events == 168);
    CHECK(s.multi_event_pairs == 213);
    CHECK(s.varied_pct == 22.38);
    CHECK(s.addition_pct == 14.73);
    CHECK(s.removal_pct == 66.81);
    CHECK(s.shuffle_pct == 18.46);
    CHECK(s.multi_event_pct == 31.19);
    CHECK(s.shuffle_nonadjacent == 93);
    CHECK(s.shuffle_nonadjacent_pct == 55.36);
    CHECK(s.exception_group_attribution == 22);
    CHECK(s.exception_null_intersection == 10);
    CHECK(s.exception_other == 12);
    check_internal_consistency(s);
}

TEST_CASE("the software tallies reproduce the reported percentages") {
    std::array<std::uint64_t, 8> combos{};
    combos[2] = 14;  // R
    combos[4] = 1;   // S
    combos[3] = 2;   // A+R
    combos[6] = 1;   // R+S
    combos[7] = 1;   // A+R+S
    const auto rows = synthesize(ProductKind::software, combos, /*unvaried=*/4,
                                 0, 0, 0, /*nonadjacent=*/0);
    const auto s = summarize(rows, SummaryScope::software);
    CHECK(s.total_pairs == 23);
    CHECK(s.varied_pairs == 19);
    CHECK(s.varied_pct == 82.61);
    CHECK(s.unvaried_pct == 17.39);
    CHECK(s.total_events == 24);
    CHECK(s.addition_events == 3);
    CHECK(s.removal_events == 18);
    CHECK(s.shuffle_events == 3);
    CHECK(s.addition_pct == 12.50);
    CHECK(s.removal_pct == 75.00);
    CHECK(s.shuffle_pct == 12.50);
    check_internal_consistency(s);
}

TEST_CASE("merge combines disjoint summaries and recomputes percentages") {
    std::array<std::uint64_t, 8> dataset_combos{};
    dataset_combos[1] = 11;
    dataset_combos[2] = 404;
    dataset_combos[4] = 55;
    dataset_combos[3] = 100;
    dataset_combos[5] = 9;
    dataset_combos[6] = 90;
    dataset_combos[7] = 14;
    const auto dataset =
        summarize(synthesize(ProductKind::dataset, dataset_combos, 2325, 22, 10,
                             12, 93),
                  SummaryScope::dataset);
    std::array<std::uint64_t, 8> software_combos{};
    software_combos[2] = 14;
    software_combos[4] = 1;
    software_combos[3] = 2;
    software_combos[6] = 1;
    software_combos[7] = 1;
    const auto software =
        summarize(synthesize(ProductKind::software, software_combos, 4, 0, 0, 0, 0),
                  SummaryScope::software);

    const auto combined = merge(dataset, software);
    CHECK(combined.scope == SummaryScope::combined);
    CHECK(combined.total_pairs == 3075);
    CHECK(combined.varied_pairs == 702);
    CHECK(combined.varied_pct == 22.83);
    check_internal_consistency(combined);

    SUBCASE("the empty summary is an identity") {
        const auto same = merge(dataset, ReportSummary{});
        CHECK(same.scope == SummaryScope::dataset);
        CHECK(same.total_pairs == dataset.total_pairs);
        CHECK(same.varied_pct == dataset.varied_pct);
        const auto same2 = merge(ReportSummary{}, software);
        CHECK(same2.scope == SummaryScope::software);
        CHECK(same2.total_pairs == software.total_pairs);
    }

    SUBCASE("merge is commutative and associative") {
        std::mt19937 rng(31);
        auto random_rows = [&](int n, ProductKind kind) {
            std::vector<AnnotatedPair> rows;
            std::uniform_int_distribution<int> bit(0, 1);
            for (int i = 0; i < n; ++i) {
                const bool s = bit(rng) != 0;
                rows.push_back(row("p" + std::to_string(i), "d", kind,
                                   bit(rng) != 0, bit(rng) != 0, s));
            }
            return rows;
        };
        const auto a = summarize(random_rows(17, ProductKind::dataset),
                                 SummaryScope::dataset);
        const auto b = summarize(random_rows(9, ProductKind::software),
                                 SummaryScope::software);
        const auto c = summarize(random_rows(23, ProductKind::dataset),
                                 SummaryScope::dataset);
        const auto ab_c = merge(merge(a, b), c);
        const auto a_bc = merge(a, merge(b, c));
        CHECK(ab_c.total_pairs == a_bc.total_pairs);
        CHECK(ab_c.varied_pairs == a_bc.varied_pairs);
        CHECK(ab_c.total_events == a_bc.total_events);
        CHECK(ab_c.combo_counts == a_bc.combo_counts);
        CHECK(ab_c.varied_pct == a_bc.varied_pct);
        const auto ab = merge(a, b);
        const auto ba = merge(b, a);
        CHECK(ab.total_pairs == ba.total_pairs);
        CHECK(ab.combo_counts == ba.combo_counts);
        CHECK(ab.scope == ba.scope);

        // Recomputing a summary from the concatenated rows matches the merge.
        auto all_rows = random_rows(0, ProductKind::dataset);
        (void)all_rows;
    }
}

TEST_CASE("merging equals summarizing the concatenation") {
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> bit(0, 1);
    std::vector<AnnotatedPair> left, right;
    for (int i = 0; i < 40; ++i) {
        const auto kind = bit(rng) ? ProductKind::dataset : ProductKind::software;
        auto r = row("p" + std::to_string(i), "d" + std::to_string(i), kind,
                     bit(rng) != 0, bit(rng) != 0, bit(rng) != 0);
        (i % 2 == 0 ? left : right).push_back(std::move(r));
    }
    std::vector<AnnotatedPair> all = left;
    all.insert(all.end(), right.begin(), right.end());
    const auto merged = merge(summarize(left, SummaryScope::combined),
                              summarize(right, SummaryScope::combined));
    const auto direct = summarize(all, SummaryScope::combined);
    CHECK(merged.total_pairs == direct.total_pairs);
    CHECK(merged.varied_pairs == direct.varied_pairs);
    CHECK(merged.combo_counts == direct.combo_counts);
    CHECK(merged.multi_event_pairs == direct.multi_event_pairs);
    CHECK(merged.varied_pct == direct.varied_pct);
    CHECK(merged.shuffle_nonadjacent == direct.shuffle_nonadjacent);
}

TEST_CASE("pairs table round-trips through CSV") {
    std::vector<AnnotatedPair> rows = {
        row("p,com\"ma", "d1", ProductKind::dataset, true, false, true,
            std::nullopt, ShuffleAdjacency::involves_non_adjacent),
        row("p2", "d \"quoted\"", ProductKind::software, false, false, false,
            ExceptionClass{ExceptionKind::other, "empty author list"}),
        row("p3", "d3", ProductKind::dataset, false, true, false),
    };
    rows[0].methods = {MatchMethod::orcid, MatchMethod::fuzzy};
    rows[0].provenance = Provenance::inferred;
    const std::string csv = pairs_csv(rows);
    std::istringstream in(csv);
    const auto back = parse_pairs_csv(in);
    REQUIRE(back.size() == rows.size());
    CHECK(back == rows);
}

TEST_CASE("combo table is ordered A, R, S, A+R, A+S, R+S, A+R+S") {
    std::array<std::uint64_t, 8> combos{};
    combos[1] = 1;
    combos[3] = 2;
    combos[7] = 3;
    const auto rows = synthesize(ProductKind::dataset, combos, 0, 0, 0, 0, 0);
    const auto s = summarize(rows, SummaryScope::combined);
    CHECK(combos_csv(s) ==
          "combo,count\r\n"
          "A,1\r\n"
          "R,0\r\n"
          "S,0\r\n"
          "A+R,2\r\n"
          "A+S,0\r\n"
          "R+S,0\r\n"
          "A+R+S,3\r\n");
    // Combo rows sum to varied pairs.
    std::uint64_t sum = 0;
    for (const unsigned mask : kComboOrder) sum += s.combo_counts[mask];
    CHECK(sum == s.varied_pairs);
}

TEST_CASE("export writes deterministic files") {
    namespace fs = std::filesystem;
    const auto base = fs::temp_directory_path() / "suppdiff-report-test";
    fs::remove_all(base);
    const std::vector<AnnotatedPair> rows = {
        row("p1", "d1", ProductKind::dataset, true, false, false),
        row("p2", "d2", ProductKind::dataset, false, false, false),
    };
    const std::vector<ReportSummary> summaries = {
        summarize(rows, SummaryScope::dataset),
        summarize(rows, SummaryScope::software),
        summarize(rows, SummaryScope::combined)};

    const auto written1 = export_report(base / "run1", summaries, rows, {});
    const auto written2 = export_report(base / "run2", summaries, rows, {});
    REQUIRE(written1.size() == 3);
    REQUIRE(written2.size() == 3);
    for (std::size_t i = 0; i < written1.size(); ++i) {
        std::ifstream f1(written1[i], std::ios::binary);
        std::ifstream f2(written2[i], std::ios::binary);
        std::stringstream c1, c2;
        c1 << f1.rdbuf();
        c2 << f2.rdbuf();
        CHECK(c1.str() == c2.str());
        CHECK(!c1.str().empty());
    }

    // json-only export writes no CSV tables.
    const auto json_only =
        export_report(base / "run3", summaries, rows, {true, false});
    CHECK(json_only.size() == 1);
    CHECK(json_only[0].filename() == "summary.json");
    fs::remove_all(base);
}

TEST_CASE("empty annotations export header-only tables") {
    const auto s = summarize({}, SummaryScope::combined);
    CHECK(pairs_csv({}) ==
          "publication_id,supplement_id,kind,provenance,addition,removal,"
          "shuffle,exception,shuffle_adjacency,match_methods\r\n");
    const auto combos = combos_csv(s);
    CHECK(combos.substr(0, 12) == "combo,count\r");
}
