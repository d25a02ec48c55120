#include "suppdiff/retrofit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "suppdiff/text.hpp"

namespace suppdiff {

namespace {

bool is_supplement_kind(ProductKind k) {
    return k == ProductKind::dataset || k == ProductKind::software;
}

std::set<std::string> title_tokens(const std::string& title) {
    std::set<std::string> tokens;
    std::istringstream in(normalize_title(title));
    std::string token;
    while (in >> token) tokens.insert(token);
    return tokens;
}

std::set<std::string> normalized_subjects(const std::set<std::string>& subjects) {
    std::set<std::string> out;
    for (const auto& s : subjects) {
        auto n = normalize_title(s);
        if (!n.empty()) out.insert(std::move(n));
    }
    return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

// Distinct publication/supplement couples tied by Cites or References, in
// canonical orientation, ordered by (publication id, supplement id).
std::map<std::pair<std::string, std::string>, std::pair<ProductPtr, ProductPtr>>
vanilla_couples(const ProductIndex& index, const std::vector<Relation>& relations) {
    std::map<std::pair<std::string, std::string>, std::pair<ProductPtr, ProductPtr>> out;
    for (const auto& r : relations) {
        const auto type = r.semantics.type();
        if (type != RelationType::cites && type != RelationType::references) continue;
        const auto src = index.find(r.source_id);
        const auto tgt = index.find(r.target_id);
        if (src == index.end() || tgt == index.end()) continue;
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
            continue;
        }
        auto key = std::make_pair(pub->id, sup->id);
        out.emplace(std::move(key), std::make_pair(std::move(pub), std::move(sup)));
    }
    return out;
}

// Couples already linked by IsSupplementedBy (any provenance), canonical
// orientation where resolvable, both orientations otherwise.
std::set<std::pair<std::string, std::string>> supplemented_couples(
    const ProductIndex& index, const std::vector<Relation>& relations) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& r : relations) {
        if (r.semantics.type() != RelationType::is_supplemented_by) continue;
        const auto src = index.find(r.source_id);
        const auto tgt = index.find(r.target_id);
        if (src != index.end() && tgt != index.end()) {
            if (src->second->kind == ProductKind::publication)
                out.emplace(r.source_id, r.target_id);
            else
                out.emplace(r.target_id, r.source_id);
        } else {
            out.emplace(r.source_id, r.target_id);
            out.emplace(r.target_id, r.source_id);
        }
    }
    return out;
}

}  // namespace

void RetrofitRuleConfig::validate() const {
    if (window_days <= 0)
        throw std::invalid_argument("window_days must be positive");
    if (min_shared_authors < 1)
        throw std::invalid_argument("min_shared_authors must be >= 1");
}

void ScoreWeights::validate() const {
    for (const double w : {date, title, subjects, authors})
        if (!(w >= 0.0))
            throw std::invalid_argument("score weights must be non-negative");
    const double sum = date + title + subjects + authors;
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("score weights must sum to 1");
}

FeatureVector build_feature_vector(const ResearchProduct& publication,
                                   const ResearchProduct& supplement,
                                   const MatchConfig& match_cfg) {
    FeatureVector fv;
    if (publication.date && supplement.date)
        fv.date_delta_days =
            std::labs(days_between(*publication.date, *supplement.date));
    fv.title_similarity =
        jaccard(title_tokens(publication.title), title_tokens(supplement.title));
    fv.subject_overlap = jaccard(normalized_subjects(publication.subjects),
                                 normalized_subjects(supplement.subjects));
    const auto alignment =
        match_author_sets(publication.authors, supplement.authors, match_cfg);
    const std::size_t largest =
        std::max(publication.authors.size(), supplement.authors.size());
    fv.author_overlap =
        largest == 0 ? 0.0
                     : static_cast<double>(alignment.matches().size()) /
                           static_cast<double>(largest);
    return fv;
}

double score(const FeatureVector& fv, const ScoreWeights& weights) {
    weights.validate();
    const double date_component =
        fv.date_delta_days
            ? std::max(0.0, 1.0 - static_cast<double>(*fv.date_delta_days) / 365.0)
            : 0.0;
    return weights.date * date_component + weights.title * fv.title_similarity +
           weights.subjects * fv.subject_overlap +
           weights.authors * fv.author_overlap;
}

ScoreInterval calibrate_interval(const std::vector<SupplementPair>& known_pairs,
                                 const ScoreWeights& weights,
                                 const MatchConfig& match_cfg, double multiplier) {
    if (known_pairs.size() < 2)
        throw std::invalid_argument(
            "interval calibration needs at least 2 known pairs");
    if (!(multiplier >= 0.0))
        throw std::invalid_argument("interval multiplier must be non-negative");
    std::vector<double> scores;
    scores.reserve(known_pairs.size());
    for (const auto& pair : known_pairs)
        scores.push_back(score(
            build_feature_vector(pair.publication(), pair.supplement(), match_cfg),
            weights));
    double mean = 0.0;
    for (const double s : scores) mean += s;
    mean /= static_cast<double>(scores.size());
    double ss = 0.0;
    for (const double s : scores) ss += (s - mean) * (s - mean);
    const double variance = ss / static_cast<double>(scores.size() - 1);
    return ScoreInterval{mean, std::sqrt(variance), multiplier};
}

RetrofitOutcome retrofit_by_rule(const ProductIndex& index,
                                 const std::vector<Relation>& relations,
                                 const RetrofitRuleConfig& cfg,
                                 const MatchConfig& match_cfg) {
    cfg.validate();
    RetrofitOutcome outcome;
    const auto existing = supplemented_couples(index, relations);
    for (const auto& [key, couple] : vanilla_couples(index, relations)) {
        ++outcome.candidates;
        if (existing.count(key) > 0) {
            ++outcome.skipped_existing;
            continue;
        }
        const auto& pub = *couple.first;
        const auto& sup = *couple.second;
        if (!pub.date || !sup.date) {
            ++outcome.skipped_missing_date;
            continue;
        }
        if (std::labs(days_between(*pub.date, *sup.date)) > cfg.window_days) {
            ++outcome.skipped_window;
            continue;
        }
        const auto alignment =
            match_author_sets(pub.authors, sup.authors, match_cfg);
        if (alignment.matches().size() <
            static_cast<std::size_t>(cfg.min_shared_authors)) {
            ++outcome.skipped_shared_authors;
            continue;
        }
        outcome.inferred.push_back(Relation{
            pub.id, sup.id, RelationSemantics::is_supplemented_by(),
            Provenance::inferred});
    }
    return outcome;
}

RetrofitOutcome infer_supplement(const ProductIndex& index,
                                 const std::vector<Relation>& relations,
                                 const ScoreInterval& interval,
                                 const ScoreWeights& weights,
                                 const MatchConfig& match_cfg) {
    weights.validate();
    RetrofitOutcome outcome;
    const auto existing = supplemented_couples(index, relations);
    for (const auto& [key, couple] : vanilla_couples(index, relations)) {
        ++outcome.candidates;
        if (existing.count(key) > 0) {
            ++outcome.skipped_existing;
            continue;
        }
        const double s = score(
            build_feature_vector(*couple.first, *couple.second, match_cfg), weights);
        if (!interval.contains(s)) {
            ++outcome.skipped_score;
            continue;
        }
        outcome.inferred.push_back(Relation{
            couple.first->id, couple.second->id,
            RelationSemantics::is_supplemented_by(), Provenance::inferred});
    }
    return outcome;
}

}  // namespace suppdiff
