// Copyright 2026 The Citewatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "citewatch/core.hpp"
#include "citewatch/corpus.hpp"
#include "citewatch/graph.hpp"
#include "citewatch/patterns.hpp"

namespace citewatch {

/// References authored in `src` during `year` that land in `dst`'s
/// impact-factor window.  Every co-author of the citing paper is credited
/// with the full reference count.
struct AuthorContribution {
    AuthorIdx author = 0;
    JournalIdx src = 0;
    JournalIdx dst = 0;
    int year = 0;
    std::uint64_t citation_count = 0;
};

/// Authors of `src`'s year-y papers ranked by references into `dst`'s window
/// [y-k, y-1]; ties broken by author id, top n returned.
inline std::vector<AuthorContribution> top_contributing_authors(const Corpus& corpus,
                                                                JournalIdx src, JournalIdx dst,
                                                                int y, int k, std::size_t n) {
    if (n == 0) throw ConfigError("top_contributing_authors requires n >= 1");
    auto window = corpus.papers_in_window(dst, y, k);
    std::unordered_set<PaperIdx> window_set(window.begin(), window.end());

    std::unordered_map<AuthorIdx, std::uint64_t> counts;
    for (PaperIdx p : corpus.papers_of(src, y)) {
        std::uint64_t hits = 0;
        for (PaperIdx q : corpus.paper(p).references)
            if (window_set.count(q)) ++hits;
        if (hits == 0) continue;
        for (AuthorIdx a : corpus.paper(p).authors) counts[a] += hits;
    }

    std::vector<AuthorContribution> out;
    out.reserve(counts.size());
    for (const auto& [a, c] : counts) out.push_back({a, src, dst, y, c});
    std::sort(out.begin(), out.end(), [&](const AuthorContribution& x, const AuthorContribution& y2) {
        if (x.citation_count != y2.citation_count) return x.citation_count > y2.citation_count;
        return corpus.author_id(x.author) < corpus.author_id(y2.author);
    });
    if (out.size() > n) out.resize(n);
    return out;
}

/// Authors with at least one paper in each journal within the range.
inline std::set<AuthorIdx> overlapping_authors(const Corpus& corpus, JournalIdx j1, JournalIdx j2,
                                               YearRange range) {
    auto authors_in = [&](JournalIdx j) {
        std::set<AuthorIdx> s;
        for (int y = range.first; y <= range.last; ++y)
            for (PaperIdx p : corpus.papers_of(j, y))
                for (AuthorIdx a : corpus.paper(p).authors) s.insert(a);
        return s;
    };
    std::set<AuthorIdx> a = authors_in(j1);
    if (j1 == j2) return a;
    std::set<AuthorIdx> b = authors_in(j2);
    std::set<AuthorIdx> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

/// Fraction of citations into `j` whose citing and cited papers share an
/// author; nullopt when the journal was never cited.
inline std::optional<double> author_self_citation_share(const Corpus& corpus, JournalIdx j) {
    std::uint64_t total = 0, shared = 0;
    for (const auto& paper : corpus.papers()) {
        for (PaperIdx q : paper.references) {
            if (corpus.paper(q).journal != j) continue;
            ++total;
            const auto& cited = corpus.paper(q).authors;
            for (AuthorIdx a : paper.authors) {
                if (std::find(cited.begin(), cited.end(), a) != cited.end()) {
                    ++shared;
                    break;
                }
            }
        }
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(shared) / static_cast<double>(total);
}

/// Years inside `window` where the yearly paper count jumps by `factor`
/// over the previous year (which must be nonzero).
inline std::vector<int> paper_count_surge(const Corpus& corpus, JournalIdx j, YearRange window,
                                          double factor = 2.0) {
    if (factor <= 1.0) throw ConfigError("surge factor must be > 1");
    std::vector<int> out;
    for (int y = window.first; y <= window.last; ++y) {
        auto prev = static_cast<double>(corpus.yearly_paper_count(j, y - 1));
        auto cur = static_cast<double>(corpus.yearly_paper_count(j, y));
        if (prev >= 1.0 && cur >= factor * prev) out.push_back(y);
    }
    return out;
}

/// Per publication house: share of journals and share of total self-loop
/// citation weight.  Shares each sum to 1 across all publishers (Unknown
/// included) whenever the respective total is nonzero.
struct PublisherStats {
    Publisher publisher = Publisher::Unknown;
    double journal_share = 0.0;
    double self_citation_share = 0.0;
};

inline std::vector<PublisherStats> publisher_self_citation_stats(const Corpus& corpus,
                                                                 const JournalGraph& graph) {
    std::map<Publisher, std::uint64_t> journal_counts;
    std::map<Publisher, std::uint64_t> self_weights;
    std::uint64_t total_self = 0;
    for (JournalIdx j = 0; j < corpus.journal_count(); ++j) {
        Publisher p = corpus.journal(j).publisher;
        journal_counts[p] += 1;
        std::uint64_t w = graph.weight(j, j);
        self_weights[p] += w;
        total_self += w;
    }
    std::vector<PublisherStats> out;
    for (Publisher p : kAllPublishers) {
        PublisherStats s;
        s.publisher = p;
        if (corpus.journal_count() > 0)
            s.journal_share = static_cast<double>(journal_counts[p]) /
                              static_cast<double>(corpus.journal_count());
        if (total_self > 0)
            s.self_citation_share =
                static_cast<double>(self_weights[p]) / static_cast<double>(total_self);
        out.push_back(s);
    }
    return out;
}

/// Key for the same-publisher share table: mutual pairs are broken out per
/// bucket; chains and triangles are aggregated per kind.
struct ShareKey {
    PatternKind kind = PatternKind::MutualCitation;
    std::optional<Bucket> bucket;

    friend bool operator<(const ShareKey& a, const ShareKey& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.bucket < b.bucket;
    }
};

/// Fraction of instances whose members all carry one publisher.  Instances
/// with any Unknown-publisher member are excluded from both numerator and
/// denominator; keys with an empty denominator are omitted.
inline std::map<ShareKey, double> same_publisher_share(const std::vector<PatternInstance>& patterns,
                                                       const Corpus& corpus) {
    std::map<ShareKey, std::uint64_t> same, total;
    for (const auto& inst : patterns) {
        if (inst.kind != PatternKind::MutualCitation && inst.kind != PatternKind::Chain &&
            inst.kind != PatternKind::Triangle)
            continue;
        bool unknown = false;
        bool all_same = true;
        Publisher first = corpus.journal(inst.members.front()).publisher;
        for (JournalIdx m : inst.members) {
            Publisher p = corpus.journal(m).publisher;
            if (p == Publisher::Unknown) unknown = true;
            if (p != first) all_same = false;
        }
        if (unknown) continue;
        ShareKey key;
        key.kind = inst.kind;
        if (inst.kind == PatternKind::MutualCitation) key.bucket = inst.edges.front().bucket;
        total[key] += 1;
        if (all_same) same[key] += 1;
    }
    std::map<ShareKey, double> out;
    for (const auto& [key, denom] : total)
        out[key] = static_cast<double>(same[key]) / static_cast<double>(denom);
    return out;
}

inline nlohmann::json publisher_stats_to_json(const std::vector<PublisherStats>& stats) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : stats)
        out.push_back({{"publisher", std::string(publisher_name(s.publisher))},
                       {"journal_share", s.journal_share},
                       {"self_citation_share", s.self_citation_share}});
    return out;
}

inline nlohmann::json share_map_to_json(const std::map<ShareKey, double>& shares) {
    nlohmann::json out;
    for (const auto& [key, v] : shares) {
        std::string name(pattern_kind_name(key.kind));
        if (key.bucket) name += "_" + std::string(bucket_name(*key.bucket));
        out[name] = v;
    }
    return out;
}

}  // namespace citewatch
