#pragma once

// Aggregates per-pair annotations into summary statistics and exports
// machine-readable tables and plot data.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "suppdiff/core_model.hpp"

namespace suppdiff {

enum class SummaryScope { dataset, software, combined };

std::string_view to_string(SummaryScope s);

/// Percentage of num over den, rounded half-up to 2 decimals. A zero
/// denominator yields 0.
double percent(std::uint64_t num, std::uint64_t den);

/// Event-combination bitmask: addition = 1, removal = 2, shuffle = 4.
/// Export order of the 7 non-empty combinations.
inline constexpr std::array<unsigned, 7> kComboOrder = {1, 2, 4, 3, 5, 6, 7};
std::string_view combo_label(unsigned mask);

struct ReportSummary {
    SummaryScope scope = SummaryScope::combined;

    std::uint64_t total_pairs = 0;
    std::uint64_t varied_pairs = 0;
    std::uint64_t unvaried_pairs = 0;  // includes excepted pairs
    std::uint64_t addition_events = 0;
    std::uint64_t removal_events = 0;
    std::uint64_t shuffle_events = 0;
    std::uint64_t total_events = 0;
    std::array<std::uint64_t, 8> combo_counts{};  // indexed by bitmask, [0] unused
    std::uint64_t multi_event_pairs = 0;
    std::uint64_t exception_group_attribution = 0;
    std::uint64_t exception_null_intersection = 0;
    std::uint64_t exception_other = 0;
    std::uint64_t shuffle_nonadjacent = 0;

    // Derived, under the round-half-up rule; recomputed by finalize().
    double varied_pct = 0.0;              // of total_pairs
    double unvaried_pct = 0.0;            // of total_pairs
    double addition_pct = 0.0;            // of total_events
    double removal_pct = 0.0;             // of total_events
    double shuffle_pct = 0.0;             // of total_events
    double multi_event_pct = 0.0;         // of varied_pairs
    double shuffle_nonadjacent_pct = 0.0; // of shuffle_events

    void finalize();
};

void to_json(nlohmann::ordered_json& j, const ReportSummary& s);

/// One pair of the annotations table, decoupled from the product records
/// so a table written by `annotate` can be re-read by `report`.
struct AnnotatedPair {
    std::string publication_id;
    std::string supplement_id;
    ProductKind supplement_kind = ProductKind::dataset;
    Provenance provenance = Provenance::asserted;
    VariationAnnotation annotation;
    std::vector<MatchMethod> methods;  // distinct, orcid/exact/fuzzy order

    bool operator==(const AnnotatedPair&) const = default;
};

/// Aggregate the annotations of the selected supplement kind (combined
/// takes all pairs). Excepted pairs count as unvaried.
ReportSummary summarize(const std::vector<AnnotatedPair>& annotations,
                        SummaryScope scope);

/// Field-wise sum over disjoint pair sets; commutative and associative,
/// with the empty summary as identity. Mixing scopes yields combined.
ReportSummary merge(const ReportSummary& a, const ReportSummary& b);

// CSV tables (RFC 4180: quoted fields, CRLF records).
std::string csv_field(std::string_view value);
/// Read one record; false at end of input. Tolerates LF-only endings.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields);
std::string pairs_csv(const std::vector<AnnotatedPair>& annotations);
std::string combos_csv(const ReportSummary& summary);
std::vector<AnnotatedPair> parse_pairs_csv(std::istream& in);
std::vector<AnnotatedPair> parse_pairs_csv_file(const std::string& path);

struct ExportFormats {
    bool json = true;
    bool csv = true;
};

/// Write summary.json, pairs.csv and combos.csv under out_dir, as selected
/// by formats. Contents are deterministic for identical inputs. Returns
/// the paths written. I/O failures raise std::runtime_error naming the path.
std::vector<std::filesystem::path> export_report(
    const std::filesystem::path& out_dir,
    const std::vector<ReportSummary>& summaries,
    const std::vector<AnnotatedPair>& annotations, ExportFormats formats);

}  // namespace suppdiff
