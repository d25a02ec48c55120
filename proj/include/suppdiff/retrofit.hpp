#pragma once

// Infers missing IsSupplementedBy relations from vanilla citation relations
// (Cites/References): a date-window + shared-author rule, and a feature-
// vector variant calibrated on known supplement pairs.

#include <cstdint>
#include <optional>
#include <vector>

#include "suppdiff/authorship_diff.hpp"
#include "suppdiff/core_model.hpp"

namespace suppdiff {

struct RetrofitRuleConfig {
    int window_days = 183;      // "within six months apart"
    int min_shared_authors = 1;

    void validate() const;
};

/// Similarity features of a (publication, candidate supplement) couple.
struct FeatureVector {
    std::optional<long> date_delta_days;  // absent when either date is missing
    double title_similarity = 0.0;        // Jaccard over normalized title tokens
    double subject_overlap = 0.0;         // Jaccard over normalized subjects
    double author_overlap = 0.0;          // |matches| / max(|A_p|, |A_d|)
};

struct ScoreWeights {
    double date = 0.25;
    double title = 0.25;
    double subjects = 0.25;
    double authors = 0.25;

    void validate() const;  // non-negative, sum 1
};

FeatureVector build_feature_vector(const ResearchProduct& publication,
                                   const ResearchProduct& supplement,
                                   const MatchConfig& match_cfg);

/// Weighted mean of the feature components, in [0,1]. Date proximity maps
/// as max(0, 1 - delta/365); an absent date contributes 0 with its weight
/// retained.
double score(const FeatureVector& fv, const ScoreWeights& weights);

struct ScoreInterval {
    double mean = 0.0;
    double std = 0.0;         // sample standard deviation, >= 0
    double multiplier = 2.0;  // interval half-width in standard deviations

    double low() const { return mean - multiplier * std; }
    double high() const { return mean + multiplier * std; }
    bool contains(double value) const { return value >= low() && value <= high(); }
};

/// Mean and sample standard deviation of the score over known asserted
/// pairs. Throws std::invalid_argument with fewer than 2 pairs.
ScoreInterval calibrate_interval(const std::vector<SupplementPair>& known_pairs,
                                 const ScoreWeights& weights,
                                 const MatchConfig& match_cfg,
                                 double multiplier = 2.0);

struct RetrofitOutcome {
    std::vector<Relation> inferred;  // canonical publication -> supplement
    std::uint64_t candidates = 0;    // distinct vanilla-related couples seen
    std::uint64_t skipped_existing = 0;
    std::uint64_t skipped_missing_date = 0;
    std::uint64_t skipped_window = 0;
    std::uint64_t skipped_shared_authors = 0;
    std::uint64_t skipped_score = 0;
};

/// Rule variant: a Cites/References relation between a publication and a
/// dataset/software (either orientation) is retrofitted when both dates
/// exist, they are at most window_days apart, and the bylines share at
/// least min_shared_authors matched authors. Couples already linked by an
/// IsSupplementedBy relation are never re-emitted, so the operation is
/// idempotent and never overrides asserted relations.
RetrofitOutcome retrofit_by_rule(const ProductIndex& index,
                                 const std::vector<Relation>& relations,
                                 const RetrofitRuleConfig& cfg,
                                 const MatchConfig& match_cfg);

/// Interval variant: a vanilla-related couple is retrofitted when its
/// score lies within the calibrated interval. Same no-override and
/// idempotence guarantees as the rule variant.
RetrofitOutcome infer_supplement(const ProductIndex& index,
                                 const std::vector<Relation>& relations,
                                 const ScoreInterval& interval,
                                 const ScoreWeights& weights,
                                 const MatchConfig& match_cfg);

}  // namespace suppdiff
