#include "suppdiff/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace suppdiff {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void require_file(const std::string& path, const char* what) {
    if (path.empty())
        throw ConfigError(std::string(what) + " file not given");
    if (!fs::exists(path))
        throw ConfigError(std::string(what) + " file not found: " + path);
}

void write_file(const fs::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void ensure_out_dir(const RunConfig& cfg) {
    if (cfg.dry_run) return;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + cfg.out_dir +
                                 ": " + ec.message());
}

void report_skips(const char* what, const IngestReport& report, std::ostream& err) {
    if (report.records_skipped == 0) return;
    err << what << ": skipped " << report.records_skipped << " of "
        << report.records_read << " records (";
    bool first = true;
    for (const auto& [cls, n] : report.error_counts) {
        if (!first) err << ", ";
        err << cls << "=" << n;
        first = false;
    }
    err << ")\n";
}

struct Graph {
    std::vector<ProductPtr> products;
    std::vector<Relation> relations;
    ProductIndex index;
    IngestReport products_report;
    IngestReport relations_report;
};

Graph load_graph(const RunConfig& cfg, std::ostream& err) {
    Graph g;
    std::tie(g.products, g.products_report) =
        read_products_file(cfg.products_path, cfg.mapping);
    std::tie(g.relations, g.relations_report) =
        read_relations_file(cfg.relations_path, cfg.mapping);
    report_skips("products", g.products_report, err);
    report_skips("relations", g.relations_report, err);
    auto indexed = build_product_index(g.products);
    if (indexed.duplicate_ids > 0)
        err << "products: ignored " << indexed.duplicate_ids
            << " records with duplicate ids\n";
    g.index = std::move(indexed.index);
    return g;
}

std::vector<SupplementPair> asserted_pairs(const ProductIndex& index,
                                           const std::vector<Relation>& relations) {
    auto [pairs, report] = select_supplement_pairs(index, relations);
    std::erase_if(pairs, [](const SupplementPair& p) {
        return p.provenance() != Provenance::asserted;
    });
    return pairs;
}

// Retrofit per cfg.retrofit_mode and append the inferred relations to the
// graph. Returns the inferred set.
std::vector<Relation> apply_retrofit(const RunConfig& cfg, Graph& g,
                                     std::ostream& err) {
    RetrofitOutcome outcome;
    if (cfg.retrofit_mode == RetrofitMode::rule) {
        outcome = retrofit_by_rule(g.index, g.relations, cfg.retrofit_rule, cfg.match);
    } else {
        const auto known = asserted_pairs(g.index, g.relations);
        if (known.size() < 2)
            throw std::runtime_error(
                "interval retrofit needs at least 2 asserted pairs to calibrate, "
                "found " +
                std::to_string(known.size()));
        const auto interval = calibrate_interval(known, cfg.weights, cfg.match,
                                                 cfg.interval_multiplier);
        err << "calibrated score interval [" << interval.low() << ", "
            << interval.high() << "] from " << known.size() << " pairs\n";
        outcome = infer_supplement(g.index, g.relations, interval, cfg.weights,
                                   cfg.match);
    }
    if (outcome.skipped_missing_date > 0)
        err << "retrofit: " << outcome.skipped_missing_date
            << " candidates skipped for missing dates\n";
    g.relations.insert(g.relations.end(), outcome.inferred.begin(),
                       outcome.inferred.end());
    return std::move(outcome.inferred);
}

AnnotatedPair make_annotated(const SupplementPair& pair,
                             const PairAnnotation& result) {
    AnnotatedPair row;
    row.publication_id = pair.publication().id;
    row.supplement_id = pair.supplement().id;
    row.supplement_kind = pair.supplement().kind;
    row.provenance = pair.provenance();
    row.annotation = result.annotation;
    row.methods = result.methods_used();
    return row;
}

std::vector<ReportSummary> all_summaries(const std::vector<AnnotatedPair>& rows) {
    return {summarize(rows, SummaryScope::dataset),
            summarize(rows, SummaryScope::software),
            summarize(rows, SummaryScope::combined)};
}

std::string format_pct(double pct) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", pct);
    return buf;
}

}  // namespace

void RunConfig::prepare(bool need_relations) {
    require_file(products_path, "products");
    if (need_relations) require_file(relations_path, "relations");
    try {
        if (mapping_path) {
            require_file(*mapping_path, "mapping config");
            mapping = MappingConfig::load(*mapping_path);
        }
        mapping.strict = mapping.strict || strict;
        if (blocklist_path) {
            require_file(*blocklist_path, "blocklist");
            noise.generic_title_blocklist = load_blocklist_file(*blocklist_path);
        }
        mapping.validate();
        noise.validate();
        match.validate();
        retrofit_rule.validate();
        weights.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

std::string selected_pairs_csv(const std::vector<SupplementPair>& pairs) {
    std::string out = "publication_id,supplement_id,provenance\r\n";
    for (const auto& p : pairs) {
        out += csv_field(p.publication().id);
        out += ',';
        out += csv_field(p.supplement().id);
        out += ',';
        out += to_string(p.provenance());
        out += "\r\n";
    }
    return out;
}

std::string flagged_pairs_csv(const std::vector<FlaggedPair>& flagged) {
    std::string out = "publication_id,supplement_id,reason\r\n";
    for (const auto& f : flagged) {
        out += csv_field(f.pair.publication().id);
        out += ',';
        out += csv_field(f.pair.supplement().id);
        out += ',';
        out += f.reason;
        out += "\r\n";
    }
    return out;
}

std::string relations_ndjson(const std::vector<Relation>& relations,
                             std::string_view rule) {
    std::string out;
    for (const auto& r : relations) {
        ordered_json j{{"source", r.source_id},
                       {"target", r.target_id},
                       {"reltype", r.semantics.label()},
                       {"provenance", to_string(r.provenance)},
                       {"rule", rule}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string headline(const ReportSummary& combined) {
    return std::to_string(combined.varied_pairs) + "/" +
           std::to_string(combined.total_pairs) + " pairs with authorship variation (" +
           format_pct(combined.varied_pct) + "%)";
}

PipelineResult run_pipeline(const RunConfig& cfg, std::ostream& out,
                            std::ostream& err) {
    PipelineResult result;
    Graph g = load_graph(cfg, err);
    result.products_report = g.products_report;
    result.relations_report = g.relations_report;

    std::vector<Relation> inferred;
    if (cfg.retrofit_mode != RetrofitMode::off) {
        inferred = apply_retrofit(cfg, g, err);
        result.inferred_relations = inferred.size();
    }

    auto [pairs, selection] = select_supplement_pairs(g.index, g.relations);
    result.selection = selection;
    if (selection.dangling > 0)
        err << "pairs: " << selection.dangling
            << " supplement relations with dangling endpoints\n";

    auto split = detect_dedup_noise(pairs, cfg.noise);
    result.flagged_pairs = split.flagged.size();

    const auto annotations = annotate_pairs(split.kept, cfg.match, cfg.jobs);
    std::vector<AnnotatedPair> rows;
    rows.reserve(annotations.size());
    for (std::size_t i = 0; i < annotations.size(); ++i)
        rows.push_back(make_annotated(split.kept[i], annotations[i]));

    const auto summaries = all_summaries(rows);
    result.combined = summaries.back();

    if (!cfg.dry_run) {
        ensure_out_dir(cfg);
        export_report(cfg.out_dir, summaries, rows, cfg.formats);
        if (cfg.formats.csv)
            write_file(fs::path(cfg.out_dir) / "flagged_pairs.csv",
                       flagged_pairs_csv(split.flagged));
        if (cfg.retrofit_mode != RetrofitMode::off)
            write_file(fs::path(cfg.out_dir) / "inferred_relations.ndjson",
                       relations_ndjson(inferred,
                                        cfg.retrofit_mode == RetrofitMode::rule
                                            ? "date-author"
                                            : "interval"));
    }

    out << headline(result.combined) << "\n";
    return result;
}

void run_ingest_check(RunConfig cfg, std::ostream& out, std::ostream& err) {
    const bool with_relations = !cfg.relations_path.empty();
    cfg.prepare(with_relations);

    std::ifstream products(cfg.products_path);
    if (!products)
        throw std::runtime_error("cannot open products file: " + cfg.products_path);
    std::uint64_t count = 0;
    const auto products_report =
        parse_products(products, cfg.mapping, [&](ResearchProduct&&) { ++count; });
    report_skips("products", products_report, err);

    ordered_json j{{"products", ordered_json(products_report)}};
    if (with_relations) {
        std::ifstream relations(cfg.relations_path);
        if (!relations)
            throw std::runtime_error("cannot open relations file: " +
                                     cfg.relations_path);
        const auto relations_report =
            parse_relations(relations, cfg.mapping, [](Relation&&) {});
        report_skips("relations", relations_report, err);
        j["relations"] = ordered_json(relations_report);
    }
    out << j.dump(2) << "\n";
}

void run_pairs_stage(RunConfig cfg, std::ostream& out, std::ostream& err) {
    cfg.prepare();
    Graph g = load_graph(cfg, err);
    auto [pairs, selection] = select_supplement_pairs(g.index, g.relations);
    if (selection.dangling > 0)
        err << "pairs: " << selection.dangling
            << " supplement relations with dangling endpoints\n";
    auto split = detect_dedup_noise(pairs, cfg.noise);
    if (!cfg.dry_run) {
        ensure_out_dir(cfg);
        write_file(fs::path(cfg.out_dir) / "selected_pairs.csv",
                   selected_pairs_csv(split.kept));
        write_file(fs::path(cfg.out_dir) / "flagged_pairs.csv",
                   flagged_pairs_csv(split.flagged));
    }
    out << split.kept.size() << " pairs kept, " << split.flagged.size()
        << " flagged as dedup noise\n";
}

void run_retrofit_stage(RunConfig cfg, std::ostream& out, std::ostream& err) {
    if (cfg.retrofit_mode == RetrofitMode::off)
        throw ConfigError("retrofit stage needs --retrofit rule or interval");
    cfg.prepare();
    Graph g = load_graph(cfg, err);
    const auto inferred = apply_retrofit(cfg, g, err);
    if (!cfg.dry_run) {
        ensure_out_dir(cfg);
        write_file(fs::path(cfg.out_dir) / "inferred_relations.ndjson",
                   relations_ndjson(inferred,
                                    cfg.retrofit_mode == RetrofitMode::rule
                                        ? "date-author"
                                        : "interval"));
    }
    out << inferred.size() << " relations retrofitted as IsSupplementedBy\n";
}

void run_annotate_stage(RunConfig cfg, const std::string& pairs_file,
                        std::ostream& out, std::ostream& err) {
    cfg.prepare(/*need_relations=*/false);
    require_file(pairs_file, "pairs");

    auto [products, products_report] =
        read_products_file(cfg.products_path, cfg.mapping);
    report_skips("products", products_report, err);
    const auto index = build_product_index(products).index;

    std::ifstream in(pairs_file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open pairs file: " + pairs_file);
    std::vector<std::string> fields;
    if (!read_csv_record(in, fields) ||
        fields != std::vector<std::string>{"publication_id", "supplement_id",
                                           "provenance"})
        throw std::runtime_error("unexpected selected-pairs header in " + pairs_file);

    std::vector<SupplementPair> pairs;
    std::uint64_t unresolved = 0;
    while (read_csv_record(in, fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != 3)
            throw std::runtime_error("bad selected-pairs row in " + pairs_file);
        const auto pub = index.find(fields[0]);
        const auto sup = index.find(fields[1]);
        const auto prov = provenance_from_string(fields[2]);
        if (pub == index.end() || sup == index.end() || !prov) {
            ++unresolved;
            continue;
        }
        pairs.emplace_back(pub->second, sup->second, *prov);
    }
    if (unresolved > 0)
        err << "annotate: " << unresolved << " pairs referenced unknown products\n";

    const auto annotations = annotate_pairs(pairs, cfg.match, cfg.jobs);
    std::vector<AnnotatedPair> rows;
    rows.reserve(annotations.size());
    for (std::size_t i = 0; i < annotations.size(); ++i)
        rows.push_back(make_annotated(pairs[i], annotations[i]));

    if (!cfg.dry_run) {
        ensure_out_dir(cfg);
        write_file(fs::path(cfg.out_dir) / "pairs.csv", pairs_csv(rows));
    }
    out << rows.size() << " pairs annotated\n";
}

void run_report_stage(RunConfig cfg, const std::string& annotations_file,
                      std::ostream& out, std::ostream& /*err*/) {
    require_file(annotations_file, "annotations");
    const auto rows = parse_pairs_csv_file(annotations_file);
    const auto summaries = all_summaries(rows);
    if (!cfg.dry_run) {
        ensure_out_dir(cfg);
        export_report(cfg.out_dir, summaries, rows, cfg.formats);
    }
    out << headline(summaries.back()) << "\n";
}

}  // namespace suppdiff
