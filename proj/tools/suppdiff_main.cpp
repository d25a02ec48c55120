#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "suppdiff/pipeline.hpp"

namespace {

using namespace suppdiff;

struct CliState {
    RunConfig cfg;
    std::string mapping_path;
    std::string blocklist_path;
    std::string retrofit_mode = "off";
    std::string retrofit_stage_mode = "rule";  // the retrofit subcommand's own default
    std::string format = "both";
    std::string pairs_file;
    std::string annotations_file;
    std::vector<double> weights;
    bool no_fuzzy = false;

    std::function<void()> action;

    // Resolve string-valued flags into the typed config.
    void resolve() {
        if (!mapping_path.empty()) cfg.mapping_path = mapping_path;
        if (!blocklist_path.empty()) cfg.blocklist_path = blocklist_path;
        if (retrofit_mode == "rule") cfg.retrofit_mode = RetrofitMode::rule;
        else if (retrofit_mode == "interval") cfg.retrofit_mode = RetrofitMode::interval;
        else cfg.retrofit_mode = RetrofitMode::off;
        cfg.formats.json = format == "json" || format == "both";
        cfg.formats.csv = format == "csv" || format == "both";
        if (no_fuzzy) cfg.match.fuzzy_enabled = false;
        if (!weights.empty()) {
            if (weights.size() != 4)
                throw ConfigError("--weights needs 4 values: date,title,subjects,authors");
            cfg.weights = ScoreWeights{weights[0], weights[1], weights[2], weights[3]};
        }
    }
};

void add_input_options(CLI::App* cmd, CliState& s, bool relations = true) {
    cmd->add_option("--products", s.cfg.products_path, "Products file (NDJSON)");
    if (relations)
        cmd->add_option("--relations", s.cfg.relations_path, "Relations file (NDJSON)");
    cmd->add_option("--mapping", s.mapping_path, "Field-mapping config (JSON)");
    cmd->add_flag("--strict", s.cfg.strict, "Abort on the first bad input record");
}

void add_output_options(CLI::App* cmd, CliState& s) {
    cmd->add_option("--out", s.cfg.out_dir, "Output directory")
        ->default_val("suppdiff-out");
    cmd->add_flag("--dry-run", s.cfg.dry_run,
                  "Run the full computation but write nothing");
}

void add_match_options(CLI::App* cmd, CliState& s) {
    cmd->add_option("--fuzzy-threshold", s.cfg.match.fuzzy_threshold,
                    "Fuzzy name-match similarity threshold in (0,1]")
        ->default_val(0.90);
    cmd->add_flag("--no-fuzzy", s.no_fuzzy, "Disable fuzzy author matching");
}

void add_noise_options(CLI::App* cmd, CliState& s) {
    cmd->add_option("--blocklist", s.blocklist_path,
                    "Generic-title blocklist (one normalized title per line)");
    cmd->add_option("--fanin-threshold", s.cfg.noise.fanin_threshold,
                    "Distinct-publication fan-in marking a generic supplement")
        ->default_val(5);
    cmd->add_option("--min-title-length", s.cfg.noise.min_title_length,
                    "Titles shorter than this count as generic (codepoints)")
        ->default_val(12);
}

void add_retrofit_options(CLI::App* cmd, CliState& s, std::string& mode_var) {
    cmd->add_option("--retrofit", mode_var, "Relation retrofitting mode")
        ->check(CLI::IsMember({"off", "rule", "interval"}));
    cmd->add_option("--window-days", s.cfg.retrofit_rule.window_days,
                    "Date window for the retrofit rule, in days")
        ->default_val(183);
    cmd->add_option("--min-shared-authors", s.cfg.retrofit_rule.min_shared_authors,
                    "Matched authors required by the retrofit rule")
        ->default_val(1);
    cmd->add_option("--weights", s.weights,
                    "Score weights: date,title,subjects,authors (sum 1)")
        ->delimiter(',')
        ->expected(0, 4);
    cmd->add_option("--sigma", s.cfg.interval_multiplier,
                    "Interval half-width in standard deviations")
        ->default_val(2.0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "suppdiff - detects and quantifies authorship variation between "
        "publications and their supplementary datasets and software"};
    app.require_subcommand(1);
    CliState s;

    auto* run = app.add_subcommand(
        "run", "Full pipeline: ingest, select pairs, optionally retrofit, "
               "annotate, report");
    add_input_options(run, s);
    add_noise_options(run, s);
    add_match_options(run, s);
    add_retrofit_options(run, s, s.retrofit_mode);
    add_output_options(run, s);
    run->add_option("--jobs", s.cfg.jobs,
                    "Worker threads for annotation (0 = hardware)")
        ->default_val(0);
    run->add_option("--format", s.format, "Report formats to write")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->default_val("both");
    run->callback([&] {
        s.action = [&] {
            s.cfg.prepare();
            run_pipeline(s.cfg, std::cout, std::cerr);
        };
    });

    auto* ingest_check = app.add_subcommand(
        "ingest-check", "Stream the dump files and print ingest reports");
    add_input_options(ingest_check, s);
    ingest_check->callback([&] {
        s.action = [&] { run_ingest_check(s.cfg, std::cout, std::cerr); };
    });

    auto* pairs = app.add_subcommand(
        "pairs", "Select supplement pairs and split off dedup noise");
    add_input_options(pairs, s);
    add_noise_options(pairs, s);
    add_output_options(pairs, s);
    pairs->callback([&] {
        s.action = [&] { run_pairs_stage(s.cfg, std::cout, std::cerr); };
    });

    auto* retrofit = app.add_subcommand(
        "retrofit", "Infer IsSupplementedBy relations from Cites/References");
    add_input_options(retrofit, s);
    add_match_options(retrofit, s);
    add_retrofit_options(retrofit, s, s.retrofit_stage_mode);
    add_output_options(retrofit, s);
    retrofit->callback([&] {
        s.retrofit_mode = s.retrofit_stage_mode;
        s.action = [&] { run_retrofit_stage(s.cfg, std::cout, std::cerr); };
    });

    auto* annotate = app.add_subcommand(
        "annotate", "Annotate authorship variation for selected pairs");
    add_input_options(annotate, s, /*relations=*/false);
    annotate->add_option("--pairs", s.pairs_file,
                         "selected_pairs.csv from the pairs stage");
    add_match_options(annotate, s);
    add_output_options(annotate, s);
    annotate->add_option("--jobs", s.cfg.jobs,
                         "Worker threads for annotation (0 = hardware)")
        ->default_val(0);
    annotate->callback([&] {
        s.action = [&] {
            run_annotate_stage(s.cfg, s.pairs_file, std::cout, std::cerr);
        };
    });

    auto* report = app.add_subcommand(
        "report", "Aggregate an annotations table into summary statistics");
    report->add_option("--annotations", s.annotations_file,
                       "pairs.csv from the annotate stage");
    report->add_option("--format", s.format, "Report formats to write")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->default_val("both");
    add_output_options(report, s);
    report->callback([&] {
        s.action = [&] {
            run_report_stage(s.cfg, s.annotations_file, std::cout, std::cerr);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // invalid configuration
    }

    try {
        s.resolve();
        s.action();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
