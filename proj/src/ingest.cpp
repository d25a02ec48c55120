#include "suppdiff/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>

#include "suppdiff/text.hpp"

namespace suppdiff {

namespace {

using nlohmann::ordered_json;

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

// Record-level failure with its error-class counter name.
struct RecordError {
    std::string error_class;
    std::string message;
};

// Walk a dotted path through nested objects. Returns nullptr when any
// segment is missing.
const ordered_json* find_path(const ordered_json& obj, std::string_view path) {
    const ordered_json* cur = &obj;
    std::size_t start = 0;
    while (start <= path.size()) {
        const auto dot = path.find('.', start);
        const auto key = path.substr(start, dot == std::string_view::npos
                                                ? std::string_view::npos
                                                : dot - start);
        if (!cur->is_object()) return nullptr;
        const auto it = cur->find(key);
        if (it == cur->end()) return nullptr;
        cur = &*it;
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return cur;
}

// Accept strings and integral numbers for id-like fields.
std::optional<std::string> as_text(const ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    return std::nullopt;
}

std::optional<int> as_position(const ordered_json& v) {
    if (v.is_number_integer()) {
        const auto n = v.get<long long>();
        if (n < 1 || n > 1'000'000) return std::nullopt;
        return static_cast<int>(n);
    }
    if (v.is_string()) {
        const std::string s = trim(v.get<std::string>());
        int n = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
        if (ec != std::errc{} || p != s.data() + s.size() || n < 1) return std::nullopt;
        return n;
    }
    return std::nullopt;
}

ordered_json parse_line(const std::string& line) {
    ordered_json j = ordered_json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw RecordError{"malformed_json", "unparseable JSON"};
    if (!j.is_object()) throw RecordError{"malformed_json", "record is not an object"};
    return j;
}

std::string required_text(const ordered_json& j, const std::string& path,
                          const char* what) {
    const auto* v = find_path(j, path);
    if (!v) throw RecordError{std::string("missing_") + what, "no field at '" + path + "'"};
    auto text = as_text(*v);
    if (!text || trim(*text).empty())
        throw RecordError{std::string("missing_") + what,
                          "field at '" + path + "' is not usable text"};
    return trim(*text);
}

AuthorList parse_authors(const ordered_json& j, const MappingConfig& cfg) {
    const auto* arr = find_path(j, cfg.authors_path);
    if (!arr) return AuthorList{};
    if (!arr->is_array())
        throw RecordError{"invalid_author", "authors field is not an array"};
    std::vector<AuthorMention> mentions;
    mentions.reserve(arr->size());
    int fallback_position = 0;
    for (const auto& a : *arr) {
        ++fallback_position;
        if (!a.is_object())
            throw RecordError{"invalid_author", "author entry is not an object"};
        const auto* name = find_path(a, cfg.author_fields.name);
        if (!name || !name->is_string())
            throw RecordError{"invalid_author", "author has no usable name"};
        int position = fallback_position;  // byline order when rank is absent
        if (const auto* pos = find_path(a, cfg.author_fields.position)) {
            const auto parsed = as_position(*pos);
            if (!parsed)
                throw RecordError{"invalid_author", "author rank is not a positive integer"};
            position = *parsed;
        }
        std::optional<std::string> orcid;
        if (const auto* o = find_path(a, cfg.author_fields.orcid)) {
            if (o->is_string()) {
                auto t = trim(o->get<std::string>());
                if (!t.empty()) orcid = std::move(t);
            }
        }
        try {
            mentions.emplace_back(position, name->get<std::string>(), std::move(orcid));
        } catch (const std::invalid_argument& e) {
            throw RecordError{"invalid_author", e.what()};
        }
    }
    try {
        return AuthorList(std::move(mentions));
    } catch (const std::invalid_argument& e) {
        throw RecordError{"duplicate_position", e.what()};
    }
}

ResearchProduct product_from_json(const ordered_json& j, const MappingConfig& cfg) {
    ResearchProduct p;
    p.id = required_text(j, cfg.id_path, "id");

    const std::string kind_label = required_text(j, cfg.kind_path, "kind");
    std::string key;
    key.reserve(kind_label.size());
    for (const char c : kind_label)
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (const auto it = cfg.kind_labels.find(key); it != cfg.kind_labels.end()) {
        p.kind = it->second;
    } else if (cfg.default_kind) {
        p.kind = *cfg.default_kind;
    } else {
        throw RecordError{"unknown_kind", "no mapping for kind label '" + kind_label + "'"};
    }

    if (const auto* t = find_path(j, cfg.title_path)) {
        if (const auto text = as_text(*t)) p.title = trim(*text);
    }

    p.authors = parse_authors(j, cfg);

    if (const auto* d = find_path(j, cfg.date_path)) {
        if (d->is_string()) {
            const std::string raw = trim(d->get<std::string>());
            if (!raw.empty()) {
                const auto date = parse_flexible_date(raw);
                if (!date)
                    throw RecordError{"invalid_date", "unparseable date '" + raw + "'"};
                p.date = *date;
            }
        } else if (!d->is_null()) {
            throw RecordError{"invalid_date", "date field is not a string"};
        }
    }

    if (const auto* s = find_path(j, cfg.subjects_path)) {
        if (s->is_array()) {
            for (const auto& e : *s) {
                if (!e.is_string()) continue;
                auto t = trim(e.get<std::string>());
                if (!t.empty()) p.subjects.insert(std::move(t));
            }
        }
    }
    return p;
}

Relation relation_from_dump_json(const ordered_json& j, const MappingConfig& cfg) {
    Relation r;
    r.source_id = required_text(j, cfg.relation_source_path, "source");
    r.target_id = required_text(j, cfg.relation_target_path, "target");
    const auto* t = find_path(j, cfg.relation_type_path);
    if (!t || !t->is_string())
        throw RecordError{"missing_reltype", "no relation type at '" +
                                                 cfg.relation_type_path + "'"};
    r.semantics = RelationSemantics::from_label(t->get<std::string>());
    r.provenance = Provenance::asserted;
    if (const auto* p = find_path(j, cfg.relation_provenance_path)) {
        if (!p->is_string())
            throw RecordError{"invalid_provenance", "provenance is not a string"};
        const auto prov = provenance_from_string(p->get<std::string>());
        if (!prov)
            throw RecordError{"invalid_provenance",
                              "unknown provenance '" + p->get<std::string>() + "'"};
        r.provenance = *prov;
    }
    return r;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

template <typename Parse, typename Sink>
IngestReport parse_stream(std::istream& in, const MappingConfig& cfg,
                          const Parse& parse_record, const Sink& sink) {
    IngestReport report;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++report.records_read;
        try {
            auto value = parse_record(parse_line(line), cfg);
            ++report.records_accepted;
            sink(std::move(value));
        } catch (const RecordError& e) {
            if (cfg.strict) throw IngestError(line_no, e.error_class, e.message);
            report.count_skip(e.error_class);
        }
    }
    if (in.bad()) throw IngestError(line_no, "io_error", "stream read failure");
    return report;
}

}  // namespace

void MappingConfig::validate() const {
    for (const auto* p :
         {&id_path, &kind_path, &title_path, &authors_path, &date_path,
          &subjects_path, &author_fields.position, &author_fields.name,
          &author_fields.orcid, &relation_source_path, &relation_target_path,
          &relation_type_path, &relation_provenance_path}) {
        if (p->empty())
            throw std::invalid_argument("mapping config has an empty field path");
    }
}

MappingConfig MappingConfig::from_json(const ordered_json& j) {
    MappingConfig cfg;
    if (!j.is_object())
        throw std::invalid_argument("mapping config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "id") cfg.id_path = value.get<std::string>();
        else if (key == "kind") cfg.kind_path = value.get<std::string>();
        else if (key == "title") cfg.title_path = value.get<std::string>();
        else if (key == "authors") cfg.authors_path = value.get<std::string>();
        else if (key == "author_position") cfg.author_fields.position = value.get<std::string>();
        else if (key == "author_name") cfg.author_fields.name = value.get<std::string>();
        else if (key == "author_orcid") cfg.author_fields.orcid = value.get<std::string>();
        else if (key == "date") cfg.date_path = value.get<std::string>();
        else if (key == "subjects") cfg.subjects_path = value.get<std::string>();
        else if (key == "relation_source") cfg.relation_source_path = value.get<std::string>();
        else if (key == "relation_target") cfg.relation_target_path = value.get<std::string>();
        else if (key == "relation_type") cfg.relation_type_path = value.get<std::string>();
        else if (key == "relation_provenance") cfg.relation_provenance_path = value.get<std::string>();
        else if (key == "strict") cfg.strict = value.get<bool>();
        else if (key == "default_kind") {
            const auto kind = product_kind_from_string(value.get<std::string>());
            if (!kind)
                throw std::invalid_argument("default_kind must be publication, dataset or software");
            cfg.default_kind = kind;
        } else if (key == "kind_labels") {
            if (!value.is_object())
                throw std::invalid_argument("kind_labels must be an object");
            for (const auto& [label, kind_name] : value.items()) {
                const auto kind = product_kind_from_string(kind_name.get<std::string>());
                if (!kind)
                    throw std::invalid_argument("kind_labels value for '" + label +
                                                "' is not a known kind");
                std::string low;
                low.reserve(label.size());
                for (const char c : label)
                    low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
                cfg.kind_labels[low] = *kind;
            }
        } else {
            throw std::invalid_argument("unknown mapping config key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

MappingConfig MappingConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mapping config: " + path);
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("mapping config " + path + ": " + e.what());
    }
    return from_json(j);
}

void to_json(ordered_json& j, const IngestReport& r) {
    j = ordered_json{{"records_read", r.records_read},
                     {"records_accepted", r.records_accepted},
                     {"records_skipped", r.records_skipped},
                     {"error_counts", r.error_counts}};
}

std::optional<CalendarDate> parse_flexible_date(std::string_view text) {
    // Accept YYYY, YYYY-MM, YYYY-MM-DD; anything longer must extend a full
    // date (e.g. an ISO-8601 timestamp).
    const std::string_view date_part = text.substr(0, std::min<std::size_t>(text.size(), 10));
    const auto piece = [&](std::size_t from, std::size_t len) -> std::optional<unsigned> {
        const auto s = date_part.substr(from, len);
        if (s.size() != len || !all_digits(s)) return std::nullopt;
        unsigned v = 0;
        std::from_chars(s.data(), s.data() + s.size(), v);
        return v;
    };

    std::optional<unsigned> y, m, d;
    if (date_part.size() == 4) {
        y = piece(0, 4);
        if (!y) return std::nullopt;
        m = 7;
        d = 1;  // midpoint of the year
    } else if (date_part.size() == 7 && date_part[4] == '-') {
        y = piece(0, 4);
        m = piece(5, 2);
        if (!y || !m) return std::nullopt;
        d = 15;  // midpoint of the month
    } else if (date_part.size() == 10 && date_part[4] == '-' && date_part[7] == '-') {
        y = piece(0, 4);
        m = piece(5, 2);
        d = piece(8, 2);
        if (!y || !m || !d) return std::nullopt;
        if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
    } else {
        return std::nullopt;
    }

    const CalendarDate date{std::chrono::year(static_cast<int>(*y)),
                            std::chrono::month(*m), std::chrono::day(*d)};
    if (!date.ok()) return std::nullopt;
    return date;
}

IngestReport parse_products(std::istream& in, const MappingConfig& cfg,
                            const std::function<void(ResearchProduct&&)>& sink) {
    cfg.validate();
    return parse_stream(in, cfg, product_from_json, sink);
}

IngestReport parse_relations(std::istream& in, const MappingConfig& cfg,
                             const std::function<void(Relation&&)>& sink) {
    cfg.validate();
    return parse_stream(in, cfg, relation_from_dump_json, sink);
}

std::pair<std::vector<ProductPtr>, IngestReport> read_products_file(
    const std::string& path, const MappingConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open products file: " + path);
    std::vector<ProductPtr> products;
    auto report = parse_products(in, cfg, [&](ResearchProduct&& p) {
        products.push_back(std::make_shared<const ResearchProduct>(std::move(p)));
    });
    return {std::move(products), report};
}

std::pair<std::vector<Relation>, IngestReport> read_relations_file(
    const std::string& path, const MappingConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open relations file: " + path);
    std::vector<Relation> relations;
    auto report = parse_relations(
        in, cfg, [&](Relation&& r) { relations.push_back(std::move(r)); });
    return {std::move(relations), report};
}

}  // namespace suppdiff
