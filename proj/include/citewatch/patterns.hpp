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
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "citewatch/core.hpp"
#include "citewatch/corpus.hpp"
#include "citewatch/graph.hpp"

namespace citewatch {

enum class Bucket : std::uint8_t { High, Medium, Low };

inline std::string_view bucket_name(Bucket b) {
    switch (b) {
        case Bucket::High: return "high";
        case Bucket::Medium: return "medium";
        case Bucket::Low: return "low";
    }
    return "low";
}

/// Single scalar summarizing a bi-directional pair of weights: when the two
/// differ so much that their sample standard deviation exceeds their mean,
/// the larger weight dominates the coupling; otherwise the mean does.
inline double coupling_weight(std::uint64_t x, std::uint64_t y) {
    if (x == 0 && y == 0)
        throw ConfigError("coupling weight undefined for two absent edges");
    double xd = static_cast<double>(x);
    double yd = static_cast<double>(y);
    double mean = (xd + yd) / 2.0;
    double sigma = std::abs(xd - yd) / std::sqrt(2.0);  // sample stddev of two values
    return sigma > mean ? std::max(xd, yd) : mean;
}

/// Half-open weight buckets: (high_min, inf) → High, (med_min, high_min] →
/// Medium, (0, med_min] → Low.
inline Bucket assign_bucket(double w, double high_min = 1200.0, double med_min = 450.0) {
    if (!(high_min > med_min) || !(med_min > 0))
        throw ConfigError("bucket bounds must satisfy high > med > 0");
    if (w > high_min) return Bucket::High;
    if (w > med_min) return Bucket::Medium;
    return Bucket::Low;
}

/// A pair of journals whose citation edges survived pruning in both
/// directions, with the coupling weight and bucket attached.
struct MutualPair {
    JournalIdx i = 0;
    JournalIdx k = 0;           // i < k
    std::uint64_t x_ik = 0;     // weight of i -> k
    std::uint64_t y_ki = 0;     // weight of k -> i
    double w = 0.0;
    Bucket bucket = Bucket::Low;
};

enum class PatternKind : std::uint8_t {
    SelfLoop,
    MutualCitation,
    Chain,
    Triangle,
    Mesh,
    Cartel,
};

inline std::string_view pattern_kind_name(PatternKind k) {
    switch (k) {
        case PatternKind::SelfLoop: return "self_loop";
        case PatternKind::MutualCitation: return "mutual";
        case PatternKind::Chain: return "chain";
        case PatternKind::Triangle: return "triangle";
        case PatternKind::Mesh: return "mesh";
        case PatternKind::Cartel: return "cartel";
    }
    return "unknown";
}

/// Evidence for one mutual edge inside a multi-journal pattern.
struct PairEvidence {
    JournalIdx a = 0;
    JournalIdx b = 0;
    std::uint64_t x_ab = 0;
    std::uint64_t x_ba = 0;
    double w = 0.0;
    Bucket bucket = Bucket::Low;
};

/// One extracted anomaly.  members is canonical: sorted for self-loop /
/// mutual / triangle / mesh, path order (smaller endpoint first) for chains,
/// sorted donors followed by the target for cartels.
struct PatternInstance {
    PatternKind kind = PatternKind::SelfLoop;
    std::vector<JournalIdx> members;

    // self-loop evidence
    std::uint64_t self_weight = 0;
    std::uint64_t total_incoming = 0;
    double self_ratio = 0.0;

    // mutual / chain / triangle / mesh evidence
    std::vector<PairEvidence> edges;

    // cartel evidence: donor_weights aligned with members[0..n-2]
    std::vector<std::uint64_t> donor_weights;
};

/// Journal-level self-citation totals over the entire record, prior to any
/// pruning.  Source of truth for the excessive-self-citation ratio.
struct SelfCitationTotals {
    std::map<JournalIdx, std::uint64_t> self_weight;
    std::map<JournalIdx, std::uint64_t> total_incoming;  // self included
};

inline SelfCitationTotals self_citation_totals(const Corpus& corpus) {
    SelfCitationTotals t;
    for (const auto& p : corpus.papers()) {
        for (PaperIdx q : p.references) {
            JournalIdx cited = corpus.paper(q).journal;
            t.total_incoming[cited] += 1;
            if (cited == p.journal) t.self_weight[cited] += 1;
        }
    }
    return t;
}

inline SelfCitationTotals self_citation_totals(const JournalGraph& raw) {
    SelfCitationTotals t;
    for (const auto& e : raw.edges()) {
        t.total_incoming[e.dst] += e.weight;
        if (e.src == e.dst) t.self_weight[e.src] += e.weight;
    }
    return t;
}

namespace detail {

/// Undirected adjacency over the mutually-citing pairs of a graph, on
/// positions 0..n-1 into a sorted vertex list.  Self-loops excluded.
struct MutualAdjacency {
    std::vector<JournalIdx> verts;                   // sorted
    std::vector<std::vector<std::uint32_t>> nbr;     // sorted neighbor positions

    static MutualAdjacency build(const JournalGraph& g) {
        MutualAdjacency m;
        m.verts = g.vertices();
        m.nbr.assign(m.verts.size(), {});
        auto pos = [&](JournalIdx v) {
            return static_cast<std::uint32_t>(
                std::lower_bound(m.verts.begin(), m.verts.end(), v) - m.verts.begin());
        };
        for (const auto& e : g.edges()) {
            if (e.src >= e.dst) continue;  // visit each unordered pair once
            if (g.weight(e.dst, e.src) == 0) continue;
            std::uint32_t a = pos(e.src), b = pos(e.dst);
            m.nbr[a].push_back(b);
            m.nbr[b].push_back(a);
        }
        for (auto& v : m.nbr) std::sort(v.begin(), v.end());
        return m;
    }

    std::size_t size() const { return verts.size(); }

    bool adjacent(std::uint32_t a, std::uint32_t b) const {
        return std::binary_search(nbr[a].begin(), nbr[a].end(), b);
    }
};

inline PairEvidence pair_evidence(const JournalGraph& g, JournalIdx a, JournalIdx b,
                                  double high_min, double med_min) {
    PairEvidence e;
    e.a = a;
    e.b = b;
    e.x_ab = g.weight(a, b);
    e.x_ba = g.weight(b, a);
    e.w = coupling_weight(e.x_ab, e.x_ba);
    e.bucket = assign_bucket(e.w, high_min, med_min);
    return e;
}

}  // namespace detail

/// Journals in the analyzed graph whose lifetime self-citation share, taken
/// from unpruned totals, strictly exceeds `ratio_threshold`.  Journals with
/// no incoming citations at all are skipped.
inline std::vector<PatternInstance> find_self_loops(const JournalGraph& g,
                                                    const SelfCitationTotals& totals,
                                                    double ratio_threshold = 0.55) {
    if (!(ratio_threshold > 0.0 && ratio_threshold < 1.0))
        throw ConfigError("self-loop ratio threshold must be in (0, 1)");
    std::vector<PatternInstance> out;
    for (JournalIdx v : g.vertices()) {
        auto tot = totals.total_incoming.find(v);
        if (tot == totals.total_incoming.end() || tot->second == 0) continue;
        auto self = totals.self_weight.find(v);
        std::uint64_t sw = self == totals.self_weight.end() ? 0 : self->second;
        double ratio = static_cast<double>(sw) / static_cast<double>(tot->second);
        if (ratio > ratio_threshold) {
            PatternInstance inst;
            inst.kind = PatternKind::SelfLoop;
            inst.members = {v};
            inst.self_weight = sw;
            inst.total_incoming = tot->second;
            inst.self_ratio = ratio;
            out.push_back(std::move(inst));
        }
    }
    return out;
}

inline std::vector<PatternInstance> find_self_loops(const JournalGraph& g, const Corpus& corpus,
                                                    double ratio_threshold = 0.55) {
    return find_self_loops(g, self_citation_totals(corpus), ratio_threshold);
}

/// Every unordered pair with surviving edges in both directions.
inline std::vector<MutualPair> find_mutual_pairs(const JournalGraph& g, double high_min = 1200.0,
                                                 double med_min = 450.0) {
    std::vector<MutualPair> out;
    for (const auto& e : g.edges()) {
        if (e.src >= e.dst) continue;
        std::uint64_t back = g.weight(e.dst, e.src);
        if (back == 0) continue;
        MutualPair p;
        p.i = e.src;
        p.k = e.dst;
        p.x_ik = e.weight;
        p.y_ki = back;
        p.w = coupling_weight(p.x_ik, p.y_ki);
        p.bucket = assign_bucket(p.w, high_min, med_min);
        out.push_back(p);
    }
    return out;
}

/// All 3-sets of journals pairwise mutual, canonical member order.
inline std::vector<PatternInstance> find_triangles(const JournalGraph& g, double high_min = 1200.0,
                                                   double med_min = 450.0) {
    auto m = detail::MutualAdjacency::build(g);
    std::vector<PatternInstance> out;
    for (std::uint32_t a = 0; a < m.size(); ++a) {
        for (std::uint32_t b : m.nbr[a]) {
            if (b <= a) continue;
            for (std::uint32_t c : m.nbr[b]) {
                if (c <= b) continue;
                if (!m.adjacent(a, c)) continue;
                PatternInstance inst;
                inst.kind = PatternKind::Triangle;
                inst.members = {m.verts[a], m.verts[b], m.verts[c]};
                for (auto [u, v] : {std::pair{a, b}, {a, c}, {b, c}})
                    inst.edges.push_back(
                        detail::pair_evidence(g, m.verts[u], m.verts[v], high_min, med_min));
                out.push_back(std::move(inst));
            }
        }
    }
    return out;
}

/// Maximal pairwise-mutual sets of four or five journals.  A set contained
/// in a larger pairwise-mutual set is not a mesh, so a 6-clique yields none.
inline std::vector<PatternInstance> find_meshes(const JournalGraph& g, double high_min = 1200.0,
                                                double med_min = 450.0) {
    auto m = detail::MutualAdjacency::build(g);
    std::vector<std::vector<std::uint32_t>> cliques;

    auto is_maximal = [&](const std::vector<std::uint32_t>& clique) {
        for (std::uint32_t v = 0; v < m.size(); ++v) {
            if (std::find(clique.begin(), clique.end(), v) != clique.end()) continue;
            bool all = true;
            for (std::uint32_t u : clique)
                if (!m.adjacent(u, v)) { all = false; break; }
            if (all) return false;
        }
        return true;
    };

    // Grow cliques in ascending position order; sizes of interest are 4 and 5.
    for (std::uint32_t a = 0; a < m.size(); ++a) {
        for (std::uint32_t b : m.nbr[a]) {
            if (b <= a) continue;
            for (std::uint32_t c : m.nbr[b]) {
                if (c <= b || !m.adjacent(a, c)) continue;
                for (std::uint32_t d : m.nbr[c]) {
                    if (d <= c || !m.adjacent(a, d) || !m.adjacent(b, d)) continue;
                    std::vector<std::uint32_t> four = {a, b, c, d};
                    bool extended = false;
                    for (std::uint32_t e : m.nbr[d]) {
                        if (e <= d || !m.adjacent(a, e) || !m.adjacent(b, e) ||
                            !m.adjacent(c, e))
                            continue;
                        extended = true;
                        std::vector<std::uint32_t> five = {a, b, c, d, e};
                        if (is_maximal(five)) cliques.push_back(five);
                    }
                    // The four-clique is a mesh only when nothing extends it,
                    // in any position, to a larger pairwise-mutual set.
                    if (!extended && is_maximal(four)) cliques.push_back(four);
                }
            }
        }
    }

    std::vector<PatternInstance> out;
    for (const auto& clique : cliques) {
        PatternInstance inst;
        inst.kind = PatternKind::Mesh;
        for (std::uint32_t p : clique) inst.members.push_back(m.verts[p]);
        for (std::size_t i = 0; i < clique.size(); ++i)
            for (std::size_t j = i + 1; j < clique.size(); ++j)
                inst.edges.push_back(detail::pair_evidence(g, m.verts[clique[i]],
                                                           m.verts[clique[j]], high_min, med_min));
        out.push_back(std::move(inst));
    }
    std::sort(out.begin(), out.end(),
              [](const PatternInstance& x, const PatternInstance& y) { return x.members < y.members; });
    return out;
}

/// Maximal induced open paths in the mutual-pair graph with edge count in
/// [min_len, max_len]: consecutive members mutual, non-consecutive members
/// not mutual, and no endpoint extension yields a longer open path.
inline std::vector<PatternInstance> find_chains(const JournalGraph& g, int min_len = 2,
                                                int max_len = 4, double high_min = 1200.0,
                                                double med_min = 450.0) {
    if (min_len < 2 || min_len > max_len)
        throw ConfigError("chain lengths must satisfy 2 <= min_len <= max_len");
    auto m = detail::MutualAdjacency::build(g);
    const std::size_t max_members = static_cast<std::size_t>(max_len) + 1;
    const std::size_t min_members = static_cast<std::size_t>(min_len) + 1;
    std::vector<std::vector<std::uint32_t>> found;

    // A path grown tail-first stays induced: each appended vertex must be
    // adjacent to the tail only.
    auto admissible = [&](const std::vector<std::uint32_t>& path, std::uint32_t c) {
        if (std::find(path.begin(), path.end(), c) != path.end()) return false;
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            if (m.adjacent(path[i], c)) return false;
        return true;
    };
    // Extendable at an endpoint => not maximal (even past the length cap).
    auto extendable_at = [&](const std::vector<std::uint32_t>& path, std::uint32_t endpoint) {
        for (std::uint32_t c : m.nbr[endpoint]) {
            if (std::find(path.begin(), path.end(), c) != path.end()) continue;
            bool chord = false;
            for (std::uint32_t v : path)
                if (v != endpoint && m.adjacent(v, c)) { chord = true; break; }
            if (!chord) return true;
        }
        return false;
    };

    std::vector<std::uint32_t> path;
    auto grow = [&](auto&& self) -> void {
        if (path.size() >= min_members && path.front() < path.back()) {
            if (!extendable_at(path, path.front()) && !extendable_at(path, path.back()))
                found.push_back(path);
        }
        if (path.size() == max_members) return;
        for (std::uint32_t c : m.nbr[path.back()]) {
            if (!admissible(path, c)) continue;
            path.push_back(c);
            self(self);
            path.pop_back();
        }
    };
    for (std::uint32_t a = 0; a < m.size(); ++a) {
        for (std::uint32_t b : m.nbr[a]) {
            path = {a, b};
            grow(grow);
        }
    }

    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    std::vector<PatternInstance> out;
    for (const auto& p : found) {
        PatternInstance inst;
        inst.kind = PatternKind::Chain;
        for (std::uint32_t v : p) inst.members.push_back(m.verts[v]);
        for (std::size_t i = 0; i + 1 < p.size(); ++i)
            inst.edges.push_back(detail::pair_evidence(g, m.verts[p[i]], m.verts[p[i + 1]],
                                                       high_min, med_min));
        out.push_back(std::move(inst));
    }
    std::sort(out.begin(), out.end(),
              [](const PatternInstance& x, const PatternInstance& y) { return x.members < y.members; });
    return out;
}

/// Donor groups: journals with a surviving edge into a single target whose
/// raw back-edge weight (from `raw`, the unpruned graph) stays within
/// `back_weight_max`.  Members are sorted donors followed by the target.
inline std::vector<PatternInstance> find_cartels(const JournalGraph& g, const JournalGraph& raw,
                                                 int min_donors = 2,
                                                 std::uint64_t back_weight_max = 0) {
    if (min_donors < 2) throw ConfigError("cartel requires at least 2 donors");
    std::vector<PatternInstance> out;
    for (JournalIdx t : g.vertices()) {
        PatternInstance inst;
        inst.kind = PatternKind::Cartel;
        for (std::uint32_t idx : g.in_edge_indices(t)) {
            const auto& e = g.edges()[idx];
            if (e.src == t) continue;
            if (raw.weight(t, e.src) > back_weight_max) continue;
            inst.members.push_back(e.src);
            inst.donor_weights.push_back(e.weight);
        }
        if (inst.members.size() < static_cast<std::size_t>(min_donors)) continue;
        inst.members.push_back(t);
        out.push_back(std::move(inst));
    }
    return out;
}

inline std::vector<PatternInstance> find_cartels(const JournalGraph& g, int min_donors = 2,
                                                 std::uint64_t back_weight_max = 0) {
    return find_cartels(g, g, min_donors, back_weight_max);
}

/// Extraction thresholds, defaulting to the values used throughout.
struct PatternConfig {
    double self_loop_ratio = 0.55;
    double bucket_high = 1200.0;
    double bucket_med = 450.0;
    int chain_min_len = 2;
    int chain_max_len = 4;
    int cartel_min_donors = 2;
    std::uint64_t cartel_back_max = 0;
};

struct PatternCensus {
    std::uint64_t self_loops = 0;  // self-loop edges present in the analyzed graph
    std::uint64_t excessive_self_loops = 0;
    std::uint64_t mutual = 0;
    std::uint64_t chains = 0;
    std::uint64_t triangles = 0;
    std::uint64_t meshes = 0;
    std::uint64_t cartels = 0;

    friend bool operator==(const PatternCensus&, const PatternCensus&) = default;
};

struct PatternExtraction {
    PatternCensus census;
    std::vector<MutualPair> mutual_pairs;
    std::vector<PatternInstance> instances;  // all kinds, extraction order
};

/// Runs every extractor on the resultant graph.  `raw` is the unpruned
/// graph, consulted for cartel back-edges; self-loop ratios come from
/// `totals` (lifetime, unpruned).
inline PatternExtraction extract_patterns(const JournalGraph& resultant, const JournalGraph& raw,
                                          const SelfCitationTotals& totals,
                                          const PatternConfig& cfg = {}) {
    PatternExtraction x;
    for (const auto& e : resultant.edges())
        if (e.src == e.dst) ++x.census.self_loops;

    auto selfs = find_self_loops(resultant, totals, cfg.self_loop_ratio);
    x.census.excessive_self_loops = selfs.size();

    x.mutual_pairs = find_mutual_pairs(resultant, cfg.bucket_high, cfg.bucket_med);
    x.census.mutual = x.mutual_pairs.size();

    auto chains = find_chains(resultant, cfg.chain_min_len, cfg.chain_max_len, cfg.bucket_high,
                              cfg.bucket_med);
    x.census.chains = chains.size();
    auto triangles = find_triangles(resultant, cfg.bucket_high, cfg.bucket_med);
    x.census.triangles = triangles.size();
    auto meshes = find_meshes(resultant, cfg.bucket_high, cfg.bucket_med);
    x.census.meshes = meshes.size();
    auto cartels = find_cartels(resultant, raw, cfg.cartel_min_donors, cfg.cartel_back_max);
    x.census.cartels = cartels.size();

    x.instances = std::move(selfs);
    for (const auto& p : x.mutual_pairs) {
        PatternInstance inst;
        inst.kind = PatternKind::MutualCitation;
        inst.members = {p.i, p.k};
        inst.edges.push_back({p.i, p.k, p.x_ik, p.y_ki, p.w, p.bucket});
        x.instances.push_back(std::move(inst));
    }
    auto append = [&](std::vector<PatternInstance>& v) {
        for (auto& inst : v) x.instances.push_back(std::move(inst));
    };
    append(chains);
    append(triangles);
    append(meshes);
    append(cartels);
    return x;
}

/// Census over the resultant graph; cartel back-edges and self-loop ratios
/// are checked against the corpus's unpruned citation record.
inline PatternCensus pattern_census(const JournalGraph& resultant, const Corpus& corpus,
                                    const PatternConfig& cfg = {}) {
    return extract_patterns(resultant, build_journal_graph(corpus), self_citation_totals(corpus),
                            cfg)
        .census;
}

inline nlohmann::json census_to_json(const PatternCensus& c) {
    nlohmann::json j;
    j["self_loop"] = c.self_loops;
    j["excessive_self_loop"] = c.excessive_self_loops;
    j["mutual"] = c.mutual;
    j["chain"] = c.chains;
    j["triangle"] = c.triangles;
    j["mesh"] = c.meshes;
    j["cartel"] = c.cartels;
    return j;
}

inline nlohmann::json pattern_to_json(const PatternInstance& inst, const Corpus* corpus = nullptr) {
    auto label = [&](JournalIdx j) {
        return corpus ? corpus->journal(j).id : std::to_string(j);
    };
    nlohmann::json j;
    j["kind"] = std::string(pattern_kind_name(inst.kind));
    auto& members = j["members"] = nlohmann::json::array();
    for (JournalIdx v : inst.members) members.push_back(label(v));
    nlohmann::json evidence;
    switch (inst.kind) {
        case PatternKind::SelfLoop:
            evidence["self_weight"] = inst.self_weight;
            evidence["total_incoming"] = inst.total_incoming;
            evidence["ratio"] = inst.self_ratio;
            break;
        case PatternKind::Cartel: {
            auto& donors = evidence["donors"] = nlohmann::json::array();
            for (std::size_t i = 0; i + 1 < inst.members.size(); ++i)
                donors.push_back({{"journal", label(inst.members[i])},
                                  {"weight", inst.donor_weights[i]}});
            evidence["target"] = label(inst.members.back());
            break;
        }
        default: {
            auto& edges = evidence["edges"] = nlohmann::json::array();
            for (const auto& e : inst.edges)
                edges.push_back({{"a", label(e.a)},
                                 {"b", label(e.b)},
                                 {"x_ab", e.x_ab},
                                 {"x_ba", e.x_ba},
                                 {"w", e.w},
                                 {"bucket", std::string(bucket_name(e.bucket))}});
            break;
        }
    }
    j["evidence"] = std::move(evidence);
    return j;
}

}  // namespace citewatch
