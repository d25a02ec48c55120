#include "suppdiff/pair_selection.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>

#include "suppdiff/text.hpp"

namespace suppdiff {

namespace {

bool is_supplement_kind(ProductKind k) {
    return k == ProductKind::dataset || k == ProductKind::software;
}

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

void NoisePolicy::validate() const {
    if (fanin_threshold < 2)
        throw std::invalid_argument("fanin_threshold must be >= 2");
    if (min_title_length < 1)
        throw std::invalid_argument("min_title_length must be >= 1");
}

std::set<std::string> load_blocklist(std::istream& in) {
    std::set<std::string> titles;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto entry = trim(line);
        if (entry.empty()) continue;
        titles.insert(normalize_title(entry));
    }
    return titles;
}

std::set<std::string> load_blocklist_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open blocklist file: " + path);
    return load_blocklist(in);
}

ProductIndexResult build_product_index(const std::vector<ProductPtr>& products) {
    ProductIndexResult result;
    for (const auto& p : products) {
        if (!p) continue;
        const auto [it, inserted] = result.index.emplace(p->id, p);
        if (!inserted) ++result.duplicate_ids;
    }
    return result;
}

std::set<std::string> select_linked_publications(
    const ProductIndex& index, const std::vector<Relation>& relations) {
    std::set<std::string> selected;
    for (const auto& r : relations) {
        const auto src = index.find(r.source_id);
        const auto tgt = index.find(r.target_id);
        if (src == index.end() || tgt == index.end()) continue;
        const auto& a = *src->second;
        const auto& b = *tgt->second;
        if (a.kind == ProductKind::publication && is_supplement_kind(b.kind))
            selected.insert(a.id);
        else if (b.kind == ProductKind::publication && is_supplement_kind(a.kind))
            selected.insert(b.id);
    }
    return selected;
}

std::pair<std::vector<SupplementPair>, PairSelectionReport> select_supplement_pairs(
    const ProductIndex& index, const std::vector<Relation>& relations) {
    PairSelectionReport report;
    // (publication id, supplement id) -> pair; map order gives the output order.
    std::map<std::pair<std::string, std::string>, SupplementPair> pairs;
    for (const auto& r : relations) {
        if (r.semantics.type() != RelationType::is_supplemented_by) continue;
        ++report.supplement_relations;
        const auto src = index.find(r.source_id);
        const auto tgt = index.find(r.target_id);
        if (src == index.end() || tgt == index.end()) {
            ++report.dangling;
            continue;
        }
        // Dumps encode inverse relations inconsistently; orient by kind.
        ProductPtr pub, sup;
        if (src->second->kind == ProductKind::publication &&
            is_supplement_kind(tgt->second->kind)) {
            pub = src->second;
            sup = tgt->second;
        } else if (tgt->second->kind == ProductKind::publication &&
                   is_supplement_kind(src->second->kind)) {
            pub = tgt->second;
            sup = src->second;
        } else {
            ++report.kind_mismatches;
            continue;
        }
        const auto key = std::make_pair(pub->id, sup->id);
        const auto it = pairs.find(key);
        if (it == pairs.end()) {
            pairs.emplace(key, SupplementPair(std::move(pub), std::move(sup),
                                              r.provenance));
        } else {
            ++report.duplicates_collapsed;
            if (it->second.provenance() == Provenance::inferred &&
                r.provenance == Provenance::asserted)
                it->second = SupplementPair(std::move(pub), std::move(sup),
                                            Provenance::asserted);
        }
    }
    std::vector<SupplementPair> out;
    out.reserve(pairs.size());
    for (auto& [key, pair] : pairs) out.push_back(std::move(pair));
    return {std::move(out), report};
}

NoiseSplit detect_dedup_noise(const std::vector<SupplementPair>& pairs,
                              const NoisePolicy& policy) {
    policy.validate();
    // Fan-in per supplement: distinct publications supplemented by it.
    std::map<std::string, std::set<std::string>> fanin;
    for (const auto& p : pairs)
        fanin[p.supplement().id].insert(p.publication().id);

    NoiseSplit split;
    for (const auto& p : pairs) {
        const std::string title = normalize_title(p.supplement().title);
        if (policy.generic_title_blocklist.count(title) > 0) {
            split.flagged.push_back({p, "generic_title"});
            continue;
        }
        const bool short_title =
            utf8_length(title) < static_cast<std::size_t>(policy.min_title_length);
        const bool high_fanin =
            fanin[p.supplement().id].size() >=
            static_cast<std::size_t>(policy.fanin_threshold);
        if (short_title && high_fanin) {
            split.flagged.push_back({p, "short_title_high_fanin"});
        } else {
            split.kept.push_back(p);
        }
    }
    return split;
}

}  // namespace suppdiff
