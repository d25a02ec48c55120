#include "suppdiff/report.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <sstream>

namespace suppdiff {

namespace {

using nlohmann::ordered_json;

unsigned combo_mask(const VariationAnnotation& v) {
    return (v.addition() ? 1u : 0u) | (v.removal() ? 2u : 0u) |
           (v.shuffle() ? 4u : 0u);
}

}  // namespace

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(value);
    std::string quoted = "\"";
    for (const char c : value) {
        if (c == '"') quoted += "\"\"";
        else quoted += c;
    }
    quoted += '"';
    return quoted;
}

bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool quoted = false;
    bool any = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        const char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field += '"';
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            break;
        } else if (ch != '\r') {
            field += ch;
        }
    }
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

namespace {

const char* kPairsHeader =
    "publication_id,supplement_id,kind,provenance,addition,removal,shuffle,"
    "exception,shuffle_adjacency,match_methods";

std::string exception_field(const VariationAnnotation& v) {
    if (!v.exception()) return {};
    const auto& e = *v.exception();
    if (e.kind == ExceptionKind::other && !e.reason.empty())
        return std::string(to_string(e.kind)) + ":" + e.reason;
    return std::string(to_string(e.kind));
}

VariationAnnotation annotation_from_fields(const std::string& addition,
                                           const std::string& removal,
                                           const std::string& shuffle,
                                           const std::string& exception,
                                           const std::string& adjacency) {
    const auto flag = [](const std::string& s) {
        if (s == "1") return true;
        if (s == "0") return false;
        throw std::invalid_argument("event flag must be 0 or 1, got '" + s + "'");
    };
    std::optional<ExceptionClass> exc;
    if (!exception.empty()) {
        ExceptionClass e;
        if (exception == "group_attribution") {
            e.kind = ExceptionKind::group_attribution;
        } else if (exception == "null_intersection") {
            e.kind = ExceptionKind::null_intersection;
        } else if (exception == "other" || exception.rfind("other:", 0) == 0) {
            e.kind = ExceptionKind::other;
            if (exception.size() > 6) e.reason = exception.substr(6);
        } else {
            throw std::invalid_argument("unknown exception class '" + exception + "'");
        }
        exc = std::move(e);
    }
    std::optional<ShuffleAdjacency> adj;
    if (!adjacency.empty()) {
        adj = shuffle_adjacency_from_string(adjacency);
        if (!adj)
            throw std::invalid_argument("unknown shuffle adjacency '" + adjacency + "'");
    }
    return VariationAnnotation(flag(addition), flag(removal), flag(shuffle),
                               std::move(exc), adj);
}

}  // namespace

std::string_view to_string(SummaryScope s) {
    switch (s) {
        case SummaryScope::dataset: return "dataset";
        case SummaryScope::software: return "software";
        case SummaryScope::combined: return "combined";
    }
    return "combined";
}

double percent(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return 0.0;
    // Basis points, rounded half-up in integer arithmetic.
    const std::uint64_t bp = (20000u * num + den) / (2u * den);
    return static_cast<double>(bp) / 100.0;
}

std::string_view combo_label(unsigned mask) {
    switch (mask) {
        case 1: return "A";
        case 2: return "R";
        case 4: return "S";
        case 3: return "A+R";
        case 5: return "A+S";
        case 6: return "R+S";
        case 7: return "A+R+S";
    }
    return "";
}

void ReportSummary::finalize() {
    varied_pct = percent(varied_pairs, total_pairs);
    unvaried_pct = percent(unvaried_pairs, total_pairs);
    addition_pct = percent(addition_events, total_events);
    removal_pct = percent(removal_events, total_events);
    shuffle_pct = percent(shuffle_events, total_events);
    multi_event_pct = percent(multi_event_pairs, varied_pairs);
    shuffle_nonadjacent_pct = percent(shuffle_nonadjacent, shuffle_events);
}

void to_json(ordered_json& j, const ReportSummary& s) {
    auto combos = ordered_json::object();
    for (const unsigned mask : kComboOrder)
        combos[std::string(combo_label(mask))] = s.combo_counts[mask];
    j = ordered_json{
        {"scope", to_string(s.scope)},
        {"total_pairs", s.total_pairs},
        {"varied_pairs", s.varied_pairs},
        {"varied_pct", s.varied_pct},
        {"unvaried_pairs", s.unvaried_pairs},
        {"unvaried_pct", s.unvaried_pct},
        {"total_events", s.total_events},
        {"event_counts",
         ordered_json{{"addition", s.addition_events},
                      {"removal", s.removal_events},
                      {"shuffle", s.shuffle_events}}},
        {"event_pcts",
         ordered_json{{"addition", s.addition_pct},
                      {"removal", s.removal_pct},
                      {"shuffle", s.shuffle_pct}}},
        {"combo_counts", std::move(combos)},
        {"multi_event_pairs", s.multi_event_pairs},
        {"multi_event_pct", s.multi_event_pct},
        {"exception_counts",
         ordered_json{{"group_attribution", s.exception_group_attribution},
                      {"null_intersection", s.exception_null_intersection},
                      {"other", s.exception_other}}},
        {"shuffle_nonadjacent_count", s.shuffle_nonadjacent},
        {"shuffle_nonadjacent_pct", s.shuffle_nonadjacent_pct},
    };
}

ReportSummary summarize(const std::vector<AnnotatedPair>& annotations,
                        SummaryScope scope) {
    ReportSummary s;
    s.scope = scope;
    for (const auto& pair : annotations) {
        if (scope == SummaryScope::dataset &&
            pair.supplement_kind != ProductKind::dataset)
            continue;
        if (scope == SummaryScope::software &&
            pair.supplement_kind != ProductKind::software)
            continue;
        ++s.total_pairs;
        const auto& v = pair.annotation;
        if (v.exception()) {
            ++s.unvaried_pairs;
            switch (v.exception()->kind) {
                case ExceptionKind::group_attribution:
                    ++s.exception_group_attribution;
                    break;
                case ExceptionKind::null_intersection:
                    ++s.exception_null_intersection;
                    break;
                case ExceptionKind::other:
                    ++s.exception_other;
                    break;
            }
            continue;
        }
        const unsigned mask = combo_mask(v);
        if (mask == 0) {
            ++s.unvaried_pairs;
            continue;
        }
        ++s.varied_pairs;
        ++s.combo_counts[mask];
        if (std::popcount(mask) >= 2) ++s.multi_event_pairs;
        if (v.addition()) ++s.addition_events;
        if (v.removal()) ++s.removal_events;
        if (v.shuffle()) {
            ++s.shuffle_events;
            if (v.shuffle_adjacency() ==
                ShuffleAdjacency::involves_non_adjacent)
                ++s.shuffle_nonadjacent;
        }
    }
    s.total_events = s.addition_events + s.removal_events + s.shuffle_events;
    s.finalize();
    return s;
}

ReportSummary merge(const ReportSummary& a, const ReportSummary& b) {
    ReportSummary s;
    // A zero-total summary is the identity and leaves the scope alone.
    if (a.total_pairs == 0) s.scope = b.scope;
    else if (b.total_pairs == 0) s.scope = a.scope;
    else if (a.scope == b.scope) s.scope = a.scope;
    else s.scope = SummaryScope::combined;

    s.total_pairs = a.total_pairs + b.total_pairs;
    s.varied_pairs = a.varied_pairs + b.varied_pairs;
    s.unvaried_pairs = a.unvaried_pairs + b.unvaried_pairs;
    s.addition_events = a.addition_events + b.addition_events;
    s.removal_events = a.removal_events + b.removal_events;
    s.shuffle_events = a.shuffle_events + b.shuffle_events;
    s.total_events = a.total_events + b.total_events;
    for (std::size_t i = 0; i < s.combo_counts.size(); ++i)
        s.combo_counts[i] = a.combo_counts[i] + b.combo_counts[i];
    s.multi_event_pairs = a.multi_event_pairs + b.multi_event_pairs;
    s.exception_group_attribution =
        a.exception_group_attribution + b.exception_group_attribution;
    s.exception_null_intersection =
        a.exception_null_intersection + b.exception_null_intersection;
    s.exception_other = a.exception_other + b.exception_other;
    s.shuffle_nonadjacent = a.shuffle_nonadjacent + b.shuffle_nonadjacent;
    s.finalize();
    return s;
}

std::string pairs_csv(const std::vector<AnnotatedPair>& annotations) {
    std::string out = kPairsHeader;
    out += "\r\n";
    for (const auto& pair : annotations) {
        const auto& v = pair.annotation;
        std::string methods;
        for (const auto m : pair.methods) {
            if (!methods.empty()) methods += '+';
            methods += to_string(m);
        }
        out += csv_field(pair.publication_id);
        out += ',';
        out += csv_field(pair.supplement_id);
        out += ',';
        out += to_string(pair.supplement_kind);
        out += ',';
        out += to_string(pair.provenance);
        out += ',';
        out += v.addition() ? '1' : '0';
        out += ',';
        out += v.removal() ? '1' : '0';
        out += ',';
        out += v.shuffle() ? '1' : '0';
        out += ',';
        out += csv_field(exception_field(v));
        out += ',';
        if (v.shuffle_adjacency()) out += to_string(*v.shuffle_adjacency());
        out += ',';
        out += csv_field(methods);
        out += "\r\n";
    }
    return out;
}

std::string combos_csv(const ReportSummary& summary) {
    std::string out = "combo,count\r\n";
    for (const unsigned mask : kComboOrder) {
        out += combo_label(mask);
        out += ',';
        out += std::to_string(summary.combo_counts[mask]);
        out += "\r\n";
    }
    return out;
}

std::vector<AnnotatedPair> parse_pairs_csv(std::istream& in) {
    std::vector<AnnotatedPair> out;
    std::vector<std::string> fields;
    if (!read_csv_record(in, fields)) return out;
    std::ostringstream header;
    for (std::size_t i = 0; i < fields.size(); ++i)
        header << (i ? "," : "") << fields[i];
    if (header.str() != kPairsHeader)
        throw std::invalid_argument("unexpected pairs table header: " + header.str());
    std::size_t row = 1;
    while (read_csv_record(in, fields)) {
        ++row;
        if (fields.size() == 1 && fields[0].empty()) continue;  // trailing newline
        if (fields.size() != 10)
            throw std::invalid_argument("pairs table row " + std::to_string(row) +
                                        ": expected 10 fields, got " +
                                        std::to_string(fields.size()));
        AnnotatedPair pair;
        pair.publication_id = fields[0];
        pair.supplement_id = fields[1];
        const auto kind = product_kind_from_string(fields[2]);
        if (!kind || *kind == ProductKind::publication)
            throw std::invalid_argument("pairs table row " + std::to_string(row) +
                                        ": bad supplement kind '" + fields[2] + "'");
        pair.supplement_kind = *kind;
        const auto prov = provenance_from_string(fields[3]);
        if (!prov)
            throw std::invalid_argument("pairs table row " + std::to_string(row) +
                                        ": bad provenance '" + fields[3] + "'");
        pair.provenance = *prov;
        pair.annotation = annotation_from_fields(fields[4], fields[5], fields[6],
                                                 fields[7], fields[8]);
        if (!fields[9].empty()) {
            std::size_t start = 0;
            while (start <= fields[9].size()) {
                const auto plus = fields[9].find('+', start);
                const auto name = fields[9].substr(
                    start, plus == std::string::npos ? std::string::npos : plus - start);
                const auto method = match_method_from_string(name);
                if (!method)
                    throw std::invalid_argument("pairs table row " + std::to_string(row) +
                                                ": bad match method '" + name + "'");
                pair.methods.push_back(*method);
                if (plus == std::string::npos) break;
                start = plus + 1;
            }
        }
        out.push_back(std::move(pair));
    }
    return out;
}

std::vector<AnnotatedPair> parse_pairs_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open pairs table: " + path);
    return parse_pairs_csv(in);
}

namespace {

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::vector<std::filesystem::path> export_report(
    const std::filesystem::path& out_dir,
    const std::vector<ReportSummary>& summaries,
    const std::vector<AnnotatedPair>& annotations, ExportFormats formats) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " +
                                 out_dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    if (formats.json) {
        ordered_json j = ordered_json::object();
        for (const auto& s : summaries)
            j[std::string(to_string(s.scope))] = ordered_json(s);
        const auto path = out_dir / "summary.json";
        write_file(path, j.dump(2) + "\n");
        written.push_back(path);
    }
    if (formats.csv) {
        const auto pairs_path = out_dir / "pairs.csv";
        write_file(pairs_path, pairs_csv(annotations));
        written.push_back(pairs_path);
        const ReportSummary* combined = nullptr;
        for (const auto& s : summaries)
            if (s.scope == SummaryScope::combined) combined = &s;
        if (combined) {
            const auto combos_path = out_dir / "combos.csv";
            write_file(combos_path, combos_csv(*combined));
            written.push_back(combos_path);
        }
    }
    return written;
}

}  // namespace suppdiff
