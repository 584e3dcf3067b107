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
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "citewatch/core.hpp"
#include "citewatch/corpus.hpp"

namespace citewatch {

/// Weighted directed journal-to-journal citation multigraph, aggregated to
/// one edge per ordered pair with a per-year weight breakdown.  Self-loops
/// are ordinary edges with src == dst.  Immutable once constructed.
class JournalGraph {
  public:
    struct Edge {
        JournalIdx src = 0;
        JournalIdx dst = 0;
        std::uint64_t weight = 0;                       // total reference pairs
        std::vector<std::pair<int, std::uint32_t>> years;  // (citing year, count), ascending

        friend bool operator==(const Edge&, const Edge&) = default;
    };

    JournalGraph() = default;

    /// Builds from an explicit vertex set and edge list.  Edges must have
    /// positive weight; year histograms, when present, must sum to it.
    static JournalGraph from_edges(std::vector<JournalIdx> vertices, std::vector<Edge> edges) {
        JournalGraph g;
        std::sort(vertices.begin(), vertices.end());
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
        g.vertices_ = std::move(vertices);
        std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
            return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
        });
        g.edges_ = std::move(edges);
        g.index();
        return g;
    }

    const std::vector<JournalIdx>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_vertex(JournalIdx v) const {
        return std::binary_search(vertices_.begin(), vertices_.end(), v);
    }

    const Edge* edge(JournalIdx src, JournalIdx dst) const {
        auto it = edge_lookup_.find(key(src, dst));
        return it == edge_lookup_.end() ? nullptr : &edges_[it->second];
    }

    std::uint64_t weight(JournalIdx src, JournalIdx dst) const {
        const Edge* e = edge(src, dst);
        return e ? e->weight : 0;
    }

    std::span<const Edge> out_edges(JournalIdx src) const {
        auto lo = std::lower_bound(edges_.begin(), edges_.end(), src,
                                   [](const Edge& e, JournalIdx s) { return e.src < s; });
        auto hi = std::upper_bound(edges_.begin(), edges_.end(), src,
                                   [](JournalIdx s, const Edge& e) { return s < e.src; });
        return {edges_.data() + (lo - edges_.begin()), static_cast<std::size_t>(hi - lo)};
    }

    /// Indices into edges() of the edges entering `dst`, ascending by src.
    std::span<const std::uint32_t> in_edge_indices(JournalIdx dst) const {
        auto it = in_index_.find(dst);
        if (it == in_index_.end()) return {};
        return it->second;
    }

    std::uint64_t out_weight(JournalIdx v) const {
        auto it = out_weight_.find(v);
        return it == out_weight_.end() ? 0 : it->second;
    }

    std::uint64_t in_weight(JournalIdx v) const {
        auto it = in_weight_.find(v);
        return it == in_weight_.end() ? 0 : it->second;
    }

    std::uint64_t total_weight() const { return total_weight_; }

  private:
    static std::uint64_t key(JournalIdx src, JournalIdx dst) {
        return (static_cast<std::uint64_t>(src) << 32) | dst;
    }

    void index() {
        edge_lookup_.clear();
        in_index_.clear();
        out_weight_.clear();
        in_weight_.clear();
        total_weight_ = 0;
        edge_lookup_.reserve(edges_.size() * 2);
        for (std::uint32_t i = 0; i < edges_.size(); ++i) {
            const Edge& e = edges_[i];
            edge_lookup_.emplace(key(e.src, e.dst), i);
            out_weight_[e.src] += e.weight;
            in_weight_[e.dst] += e.weight;
            total_weight_ += e.weight;
        }
        // Edges are sorted by (src, dst), so per-dst lists come out sorted by src.
        for (std::uint32_t i = 0; i < edges_.size(); ++i)
            in_index_[edges_[i].dst].push_back(i);
    }

    std::vector<JournalIdx> vertices_;
    std::vector<Edge> edges_;
    std::unordered_map<std::uint64_t, std::uint32_t> edge_lookup_;
    std::map<JournalIdx, std::vector<std::uint32_t>> in_index_;
    std::unordered_map<JournalIdx, std::uint64_t> out_weight_;
    std::unordered_map<JournalIdx, std::uint64_t> in_weight_;
    std::uint64_t total_weight_ = 0;
};

/// Record of what each pruning stage measured and applied; emitted alongside
/// results so a run can be audited and reproduced.
struct PruneReport {
    std::map<JournalIdx, double> per_journal_mean_in;
    std::map<JournalIdx, double> per_journal_mean_out;
    double global_mean_in = 0.0;   // mean total in-weight over all vertices
    double global_mean_out = 0.0;
    double sigma_in = 0.0;         // population standard deviation of the same
    double sigma_out = 0.0;
    int in_threshold = 0;
    int out_threshold = 0;
    std::uint64_t kept_in_vertices = 0;
    std::uint64_t kept_out_vertices = 0;
    std::uint64_t edges_removed = 0;
};

/// One vertex per journal, one edge per (citing journal, cited journal) pair
/// with at least one reference; weights count paper-level reference pairs and
/// the year histogram is keyed by the citing paper's publication year.
inline JournalGraph build_journal_graph(const Corpus& corpus) {
    std::map<std::pair<JournalIdx, JournalIdx>, std::map<int, std::uint32_t>> acc;
    for (const auto& p : corpus.papers()) {
        for (PaperIdx q : p.references) {
            acc[{p.journal, corpus.paper(q).journal}][p.year] += 1;
        }
    }
    std::vector<JournalIdx> vertices(corpus.journal_count());
    for (JournalIdx j = 0; j < vertices.size(); ++j) vertices[j] = j;
    std::vector<JournalGraph::Edge> edges;
    edges.reserve(acc.size());
    for (auto& [key, hist] : acc) {
        JournalGraph::Edge e;
        e.src = key.first;
        e.dst = key.second;
        for (auto& [year, count] : hist) {
            e.weight += count;
            e.years.emplace_back(year, count);
        }
        edges.push_back(std::move(e));
    }
    return JournalGraph::from_edges(std::move(vertices), std::move(edges));
}

/// Number of distinct years in which `j` received (In) or gave (Out) at
/// least one citation.  Self-loops count for both directions.
inline int effective_citation_age(const JournalGraph& g, JournalIdx j, Direction dir) {
    if (!g.has_vertex(j)) throw UnknownJournalError(std::to_string(j));
    std::set<int> years;
    if (dir == Direction::Out) {
        for (const auto& e : g.out_edges(j))
            for (const auto& [year, count] : e.years) years.insert(year);
    } else {
        for (std::uint32_t idx : g.in_edge_indices(j))
            for (const auto& [year, count] : g.edges()[idx].years) years.insert(year);
    }
    return static_cast<int>(years.size());
}

/// First pruning stage: an edge (i, k) survives iff its weight strictly
/// exceeds the per-year mean of either endpoint — mean out-weight of i or
/// mean in-weight of k, each normalized by that journal's effective citation
/// age in the matching direction.  Vertices are kept untouched here.
inline std::pair<JournalGraph, PruneReport> prune_edges_by_journal_mean(const JournalGraph& g) {
    PruneReport report;
    std::unordered_map<JournalIdx, double> mean_out, mean_in;
    for (JournalIdx v : g.vertices()) {
        int age_out = effective_citation_age(g, v, Direction::Out);
        int age_in = effective_citation_age(g, v, Direction::In);
        if (age_out > 0) {
            mean_out[v] = static_cast<double>(g.out_weight(v)) / age_out;
            report.per_journal_mean_out[v] = mean_out[v];
        }
        if (age_in > 0) {
            mean_in[v] = static_cast<double>(g.in_weight(v)) / age_in;
            report.per_journal_mean_in[v] = mean_in[v];
        }
    }
    // An edge without year data has age-0 endpoints; no mean is defined for
    // them and the edge cannot beat one, so treat the missing mean as +inf.
    auto mean_or_inf = [](const std::unordered_map<JournalIdx, double>& m, JournalIdx v) {
        auto it = m.find(v);
        return it == m.end() ? std::numeric_limits<double>::infinity() : it->second;
    };
    std::vector<JournalGraph::Edge> kept;
    for (const auto& e : g.edges()) {
        double w = static_cast<double>(e.weight);
        if (w > mean_or_inf(mean_out, e.src) || w > mean_or_inf(mean_in, e.dst)) {
            kept.push_back(e);
        } else {
            ++report.edges_removed;
        }
    }
    auto vertices = g.vertices();
    return {JournalGraph::from_edges(std::move(vertices), std::move(kept)), report};
}

namespace detail {

inline JournalGraph induced_subgraph(const JournalGraph& g, const std::vector<JournalIdx>& keep) {
    std::set<JournalIdx> in_set(keep.begin(), keep.end());
    std::vector<JournalGraph::Edge> edges;
    for (const auto& e : g.edges())
        if (in_set.count(e.src) && in_set.count(e.dst)) edges.push_back(e);
    return JournalGraph::from_edges(keep, std::move(edges));
}

inline std::pair<double, double> mean_sigma(const std::vector<double>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());
    return {mean, std::sqrt(var)};
}

}  // namespace detail

struct VertexPruneResult {
    JournalGraph in_view;   // vertices with total incoming weight > in_threshold
    JournalGraph out_view;  // vertices with total outgoing weight > out_threshold
    PruneReport report;
};

/// Second pruning stage: global vertex thresholds on the edge-pruned graph.
/// The report carries the global means and population sigma of the vertex
/// strength distributions actually thresholded.
inline VertexPruneResult prune_vertices_by_global_threshold(const JournalGraph& g,
                                                            int in_threshold = 110,
                                                            int out_threshold = 109) {
    if (in_threshold <= 0 || out_threshold <= 0)
        throw ConfigError("vertex thresholds must be positive");

    std::vector<double> in_weights, out_weights;
    std::vector<JournalIdx> keep_in, keep_out;
    for (JournalIdx v : g.vertices()) {
        in_weights.push_back(static_cast<double>(g.in_weight(v)));
        out_weights.push_back(static_cast<double>(g.out_weight(v)));
        if (g.in_weight(v) > static_cast<std::uint64_t>(in_threshold)) keep_in.push_back(v);
        if (g.out_weight(v) > static_cast<std::uint64_t>(out_threshold)) keep_out.push_back(v);
    }

    VertexPruneResult r;
    std::tie(r.report.global_mean_in, r.report.sigma_in) = detail::mean_sigma(in_weights);
    std::tie(r.report.global_mean_out, r.report.sigma_out) = detail::mean_sigma(out_weights);
    r.report.in_threshold = in_threshold;
    r.report.out_threshold = out_threshold;
    r.report.kept_in_vertices = keep_in.size();
    r.report.kept_out_vertices = keep_out.size();
    r.in_view = detail::induced_subgraph(g, keep_in);
    r.out_view = detail::induced_subgraph(g, keep_out);
    return r;
}

/// Subgraph of the edge-pruned parent induced on the union of the two
/// directional views; pattern extraction runs on this graph.
inline JournalGraph resultant_graph(const JournalGraph& edge_pruned, const JournalGraph& in_view,
                                    const JournalGraph& out_view) {
    std::vector<JournalIdx> verts;
    verts.reserve(in_view.vertices().size() + out_view.vertices().size());
    verts.insert(verts.end(), in_view.vertices().begin(), in_view.vertices().end());
    verts.insert(verts.end(), out_view.vertices().begin(), out_view.vertices().end());
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    return detail::induced_subgraph(edge_pruned, verts);
}

/// CSV export: `src,dst,weight`, rows in (src, dst) order.
inline void write_graph_csv(const JournalGraph& g, const Corpus& corpus, std::ostream& out) {
    out << "src,dst,weight\n";
    for (const auto& e : g.edges())
        out << corpus.journal(e.src).id << ',' << corpus.journal(e.dst).id << ',' << e.weight
            << '\n';
}

/// Companion per-year CSV: `src,dst,year,weight`.
inline void write_graph_yearly_csv(const JournalGraph& g, const Corpus& corpus,
                                   std::ostream& out) {
    out << "src,dst,year,weight\n";
    for (const auto& e : g.edges())
        for (const auto& [year, count] : e.years)
            out << corpus.journal(e.src).id << ',' << corpus.journal(e.dst).id << ',' << year
                << ',' << count << '\n';
}

inline nlohmann::json prune_report_to_json(const PruneReport& r, const Corpus* corpus = nullptr) {
    auto label = [&](JournalIdx j) {
        return corpus ? corpus->journal(j).id : std::to_string(j);
    };
    nlohmann::json out;
    out["global_mean_in"] = r.global_mean_in;
    out["global_mean_out"] = r.global_mean_out;
    out["sigma_in"] = r.sigma_in;
    out["sigma_out"] = r.sigma_out;
    out["in_threshold"] = r.in_threshold;
    out["out_threshold"] = r.out_threshold;
    out["kept_in_vertices"] = r.kept_in_vertices;
    out["kept_out_vertices"] = r.kept_out_vertices;
    out["edges_removed"] = r.edges_removed;
    auto& mi = out["per_journal_mean_in"] = nlohmann::json::object();
    for (const auto& [j, m] : r.per_journal_mean_in) mi[label(j)] = m;
    auto& mo = out["per_journal_mean_out"] = nlohmann::json::object();
    for (const auto& [j, m] : r.per_journal_mean_out) mo[label(j)] = m;
    return out;
}

}  // namespace citewatch
