#include "suppdiff/authorship_diff.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <mutex>
#include <thread>

#include "suppdiff/text.hpp"

namespace suppdiff {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

// Canonical ORCID text for equality: trimmed, lowercased, resolver prefix
// stripped. Empty values carry no identity.
std::string normalize_orcid(const std::optional<std::string>& orcid) {
    if (!orcid) return {};
    std::string s = ascii_lower(*orcid);
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    s = s.substr(b, e - b + 1);
    for (const std::string_view prefix :
         {"https://orcid.org/", "http://orcid.org/", "orcid.org/"}) {
        if (s.rfind(prefix, 0) == 0) {
            s.erase(0, prefix.size());
            break;
        }
    }
    return s;
}

struct Side {
    std::vector<AuthorMention> mentions;  // ascending position
    std::vector<std::string> names;      // normalized, parallel to mentions
    std::vector<std::string> orcids;     // normalized, "" when absent
    std::vector<bool> matched;
};

Side make_side(const AuthorList& list) {
    Side side;
    side.mentions.assign(list.begin(), list.end());
    side.names.reserve(side.mentions.size());
    side.orcids.reserve(side.mentions.size());
    for (const auto& m : side.mentions) {
        side.names.push_back(normalize_name(m.full_name()));
        side.orcids.push_back(normalize_orcid(m.orcid()));
    }
    side.matched.assign(side.mentions.size(), false);
    return side;
}

}  // namespace

void MatchConfig::validate() const {
    if (!(fuzzy_threshold > 0.0 && fuzzy_threshold <= 1.0))
        throw std::invalid_argument("fuzzy_threshold must be in (0,1]");
}

AuthorAlignment match_author_sets(const AuthorList& publication,
                                  const AuthorList& supplement,
                                  const MatchConfig& cfg) {
    cfg.validate();
    Side p = make_side(publication);
    Side d = make_side(supplement);

    std::vector<MatchedAuthor> matches;

    const auto take_first = [&](auto&& equal, MatchMethod method) {
        for (std::size_t i = 0; i < p.mentions.size(); ++i) {
            if (p.matched[i]) continue;
            for (std::size_t j = 0; j < d.mentions.size(); ++j) {
                if (d.matched[j]) continue;
                if (!equal(i, j)) continue;
                p.matched[i] = true;
                d.matched[j] = true;
                matches.emplace_back(p.mentions[i], d.mentions[j], method, 1.0);
                break;
            }
        }
    };

    // Pass 1: ORCID equality.
    take_first(
        [&](std::size_t i, std::size_t j) {
            return !p.orcids[i].empty() && p.orcids[i] == d.orcids[j];
        },
        MatchMethod::orcid);

    // Pass 2: normalized-name equality.
    take_first(
        [&](std::size_t i, std::size_t j) {
            return !p.names[i].empty() && p.names[i] == d.names[j];
        },
        MatchMethod::exact);

    // Pass 3: greedy highest-similarity-first fuzzy pairs.
    if (cfg.fuzzy_enabled) {
        struct Candidate {
            double similarity;
            std::size_t i, j;
        };
        std::vector<Candidate> candidates;
        for (std::size_t i = 0; i < p.mentions.size(); ++i) {
            if (p.matched[i]) continue;
            for (std::size_t j = 0; j < d.mentions.size(); ++j) {
                if (d.matched[j]) continue;
                const double s = name_similarity(p.names[i], d.names[j]);
                if (s >= cfg.fuzzy_threshold) candidates.push_back({s, i, j});
            }
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const Candidate& a, const Candidate& b) {
                      if (a.similarity != b.similarity)
                          return a.similarity > b.similarity;
                      if (a.i != b.i) return a.i < b.i;
                      return a.j < b.j;
                  });
        for (const auto& c : candidates) {
            if (p.matched[c.i] || d.matched[c.j]) continue;
            p.matched[c.i] = true;
            d.matched[c.j] = true;
            matches.emplace_back(p.mentions[c.i], d.mentions[c.j],
                                 MatchMethod::fuzzy, c.similarity);
        }
    }

    std::vector<AuthorMention> removals;
    for (std::size_t i = 0; i < p.mentions.size(); ++i)
        if (!p.matched[i]) removals.push_back(p.mentions[i]);
    std::vector<AuthorMention> additions;
    for (std::size_t j = 0; j < d.mentions.size(); ++j)
        if (!d.matched[j]) additions.push_back(d.mentions[j]);

    return AuthorAlignment(std::move(matches), std::move(additions),
                           std::move(removals));
}

EventFlags detect_events(const AuthorAlignment& alignment) {
    EventFlags flags;
    flags.addition = !alignment.additions().empty();
    flags.removal = !alignment.removals().empty();
    const auto& matches = alignment.matches();  // ordered by p-position
    if (matches.size() > 1) {
        for (std::size_t k = 1; k < matches.size(); ++k) {
            if (matches[k].d_mention().position() <
                matches[k - 1].d_mention().position()) {
                flags.shuffle = true;
                break;
            }
        }
    }
    return flags;
}

std::optional<ExceptionClass> classify_exception(const AuthorAlignment& alignment,
                                                 const MatchConfig& cfg) {
    // The alignment partitions both bylines: matches + removals = A_p,
    // matches + additions = A_d.
    const auto for_each_d_name = [&](auto&& fn) {
        for (const auto& m : alignment.matches()) fn(m.d_mention().full_name());
        for (const auto& a : alignment.additions()) fn(a.full_name());
    };

    bool group = false;
    for_each_d_name([&](const std::string& name) {
        if (group) return;
        const std::string norm = normalize_name(name);
        for (const auto& pattern : cfg.group_patterns) {
            if (norm.find(pattern) != std::string::npos) {
                group = true;
                return;
            }
        }
    });
    if (group)
        return ExceptionClass{ExceptionKind::group_attribution, {}};

    const std::size_t p_size = alignment.matches().size() + alignment.removals().size();
    const std::size_t d_size = alignment.matches().size() + alignment.additions().size();
    if (p_size > 0 && d_size > 0 && alignment.matches().empty())
        return ExceptionClass{ExceptionKind::null_intersection, {}};
    if (p_size == 0 || d_size == 0)
        return ExceptionClass{ExceptionKind::other, "empty author list"};
    return std::nullopt;
}

ShuffleAdjacency classify_shuffle_adjacency(const AuthorAlignment& alignment) {
    const auto& matches = alignment.matches();  // ordered by p-position
    bool any_inverted = false;
    for (std::size_t i = 0; i + 1 < matches.size(); ++i) {
        for (std::size_t j = i + 1; j < matches.size(); ++j) {
            if (matches[i].d_mention().position() >
                matches[j].d_mention().position()) {
                any_inverted = true;
                if (j - i > 1) return ShuffleAdjacency::involves_non_adjacent;
            }
        }
    }
    if (!any_inverted)
        throw std::invalid_argument(
            "shuffle adjacency is undefined without a shuffle");
    return ShuffleAdjacency::adjacent_only;
}

std::vector<MatchMethod> PairAnnotation::methods_used() const {
    bool seen[3] = {false, false, false};
    for (const auto& m : alignment.matches())
        seen[static_cast<int>(m.method())] = true;
    std::vector<MatchMethod> out;
    for (const auto method :
         {MatchMethod::orcid, MatchMethod::exact, MatchMethod::fuzzy})
        if (seen[static_cast<int>(method)]) out.push_back(method);
    return out;
}

PairAnnotation annotate_pair(const SupplementPair& pair, const MatchConfig& cfg) {
    PairAnnotation result;
    result.alignment = match_author_sets(pair.publication().authors,
                                         pair.supplement().authors, cfg);
    if (auto exception = classify_exception(result.alignment, cfg)) {
        result.annotation =
            VariationAnnotation(false, false, false, std::move(exception));
        return result;
    }
    const EventFlags flags = detect_events(result.alignment);
    std::optional<ShuffleAdjacency> adjacency;
    if (flags.shuffle) adjacency = classify_shuffle_adjacency(result.alignment);
    result.annotation = VariationAnnotation(flags.addition, flags.removal,
                                            flags.shuffle, std::nullopt, adjacency);
    return result;
}

std::vector<PairAnnotation> annotate_pairs(const std::vector<SupplementPair>& pairs,
                                           const MatchConfig& cfg, unsigned jobs) {
    cfg.validate();
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    std::vector<PairAnnotation> results(pairs.size());
    if (jobs <= 1 || pairs.size() < 2) {
        for (std::size_t i = 0; i < pairs.size(); ++i)
            results[i] = annotate_pair(pairs[i], cfg);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (std::size_t i = next.fetch_add(1); i < pairs.size();
                 i = next.fetch_add(1))
                results[i] = annotate_pair(pairs[i], cfg);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    std::vector<std::thread> threads;
    const unsigned n = std::min<std::size_t>(jobs, pairs.size());
    threads.reserve(n);
    for (unsigned t = 0; t < n; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

}  // namespace suppdiff
