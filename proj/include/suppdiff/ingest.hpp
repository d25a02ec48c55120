#pragma once

// Streaming ingestion of newline-delimited JSON dump files into the core
// model, with a configurable field mapping. Memory use is bounded by one
// record, not file size.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "suppdiff/core_model.hpp"

namespace suppdiff {

/// Field names inside each element of the authors array.
struct AuthorFieldMap {
    std::string position = "rank";
    std::string name = "fullname";
    std::string orcid = "orcid";
};

/// Dotted field paths binding dump records to the core model, plus the
/// kind-label translation table. Defaults follow the documented products
/// and relations file layout.
struct MappingConfig {
    std::string id_path = "id";
    std::string kind_path = "type";
    std::string title_path = "title";
    std::string authors_path = "authors";
    AuthorFieldMap author_fields;
    std::string date_path = "date";
    std::string subjects_path = "subjects";

    /// Lowercased dump label -> kind. Initialized with the identity
    /// mapping for publication/dataset/software.
    std::map<std::string, ProductKind> kind_labels = {
        {"publication", ProductKind::publication},
        {"dataset", ProductKind::dataset},
        {"software", ProductKind::software},
    };
    /// Fallback for labels missing from kind_labels; unset means the
    /// record is skipped (or aborts in strict mode).
    std::optional<ProductKind> default_kind;

    std::string relation_source_path = "source";
    std::string relation_target_path = "target";
    std::string relation_type_path = "reltype";
    std::string relation_provenance_path = "provenance";

    /// Abort on the first bad record instead of skip-and-count.
    bool strict = false;

    /// Load overrides from a JSON mapping file; unknown keys are rejected.
    static MappingConfig load(const std::string& path);
    static MappingConfig from_json(const nlohmann::ordered_json& j);

    void validate() const;
};

struct IngestReport {
    std::uint64_t records_read = 0;
    std::uint64_t records_accepted = 0;
    std::uint64_t records_skipped = 0;
    std::map<std::string, std::uint64_t> error_counts;

    void count_skip(const std::string& error_class) {
        ++records_skipped;
        ++error_counts[error_class];
    }
};

void to_json(nlohmann::ordered_json& j, const IngestReport& r);

/// Raised in strict mode on the first bad record, and for unreadable input.
class IngestError : public std::runtime_error {
public:
    IngestError(std::uint64_t line, std::string error_class, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_(line),
          class_(std::move(error_class)) {}

    std::uint64_t line() const { return line_; }
    const std::string& error_class() const { return class_; }

private:
    std::uint64_t line_;
    std::string class_;
};

/// Parse a flexible dump date: YYYY, YYYY-MM, YYYY-MM-DD, or a longer
/// ISO-8601 timestamp (the date part is used). Partial dates resolve to
/// the midpoint: July 1 for year-only, the 15th for year-month.
std::optional<CalendarDate> parse_flexible_date(std::string_view text);

/// Stream products from newline-delimited JSON, one sink call per accepted
/// record, in file order. Blank lines are ignored. Bad records are skipped
/// and counted per error class unless cfg.strict is set.
IngestReport parse_products(std::istream& in, const MappingConfig& cfg,
                            const std::function<void(ResearchProduct&&)>& sink);

IngestReport parse_relations(std::istream& in, const MappingConfig& cfg,
                             const std::function<void(Relation&&)>& sink);

// Convenience wrappers that collect the stream; not for dump-scale inputs.
std::pair<std::vector<ProductPtr>, IngestReport> read_products_file(
    const std::string& path, const MappingConfig& cfg);
std::pair<std::vector<Relation>, IngestReport> read_relations_file(
    const std::string& path, const MappingConfig& cfg);

}  // namespace suppdiff
