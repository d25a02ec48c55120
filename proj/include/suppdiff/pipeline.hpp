#pragma once

// End-to-end orchestration behind the CLI subcommands. Each stage can also
// consume the previous stage's file outputs, so partial pipelines are
// scriptable.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "suppdiff/authorship_diff.hpp"
#include "suppdiff/core_model.hpp"
#include "suppdiff/ingest.hpp"
#include "suppdiff/pair_selection.hpp"
#include "suppdiff/report.hpp"
#include "suppdiff/retrofit.hpp"

namespace suppdiff {

enum class RetrofitMode { off, rule, interval };

/// Invalid configuration or unusable input paths; the CLI maps this to
/// exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string products_path;
    std::string relations_path;
    std::optional<std::string> mapping_path;
    std::optional<std::string> blocklist_path;
    std::string out_dir = "suppdiff-out";

    MappingConfig mapping;
    NoisePolicy noise;
    MatchConfig match;
    RetrofitRuleConfig retrofit_rule;
    ScoreWeights weights;
    double interval_multiplier = 2.0;
    RetrofitMode retrofit_mode = RetrofitMode::off;

    unsigned jobs = 0;     // 0 = hardware parallelism
    bool strict = false;   // abort on the first bad input record
    bool dry_run = false;  // full computation, no files written

    ExportFormats formats;

    /// Resolve mapping/blocklist files and check that inputs exist.
    /// Throws ConfigError on problems.
    void prepare(bool need_relations = true);
};

struct PipelineResult {
    IngestReport products_report;
    IngestReport relations_report;
    PairSelectionReport selection;
    std::uint64_t flagged_pairs = 0;
    std::uint64_t inferred_relations = 0;
    ReportSummary combined;
};

/// Full pipeline: ingest, pair selection, optional retrofit, annotation,
/// report. Writes summary.json / pairs.csv / combos.csv (per formats),
/// flagged_pairs.csv and, with retrofit enabled, inferred_relations.ndjson
/// under out_dir. Prints the headline varied/total statistic on `out` and
/// skip diagnostics on `err`.
PipelineResult run_pipeline(const RunConfig& cfg, std::ostream& out,
                            std::ostream& err);

/// Stream both input files without collecting them; per-file ingest
/// reports are printed as JSON on `out`.
void run_ingest_check(RunConfig cfg, std::ostream& out, std::ostream& err);

/// Select supplement pairs and split off dedup noise; writes
/// selected_pairs.csv and flagged_pairs.csv.
void run_pairs_stage(RunConfig cfg, std::ostream& out, std::ostream& err);

/// Run retrofit only; writes inferred_relations.ndjson.
void run_retrofit_stage(RunConfig cfg, std::ostream& out, std::ostream& err);

/// Annotate pairs listed in a selected_pairs.csv file; writes pairs.csv.
void run_annotate_stage(RunConfig cfg, const std::string& pairs_file,
                        std::ostream& out, std::ostream& err);

/// Aggregate a pairs.csv annotations table; writes summary.json/combos.csv
/// and prints the headline statistic.
void run_report_stage(RunConfig cfg, const std::string& annotations_file,
                      std::ostream& out, std::ostream& err);

// Stage file formats.
std::string selected_pairs_csv(const std::vector<SupplementPair>& pairs);
std::string flagged_pairs_csv(const std::vector<FlaggedPair>& flagged);
/// Inferred relations in the relations file format, one JSON object per
/// line, tagged with the producing rule ("date-author" or "interval").
std::string relations_ndjson(const std::vector<Relation>& relations,
                             std::string_view rule);

std::string headline(const ReportSummary& combined);

}  // namespace suppdiff
