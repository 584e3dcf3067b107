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

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "citewatch/attribution.hpp"
#include "citewatch/config.hpp"
#include "citewatch/core.hpp"
#include "citewatch/corpus.hpp"
#include "citewatch/graph.hpp"
#include "citewatch/metrics.hpp"
#include "citewatch/patterns.hpp"

namespace citewatch {

/// Everything one analysis run produces, kept in memory so callers can
/// inspect results without re-reading the emitted files.
struct AnalysisResult {
    JournalGraph built;
    JournalGraph edge_pruned;
    JournalGraph in_view;
    JournalGraph out_view;
    JournalGraph resultant;
    PruneReport prune_report;
    PatternExtraction patterns;
};

/// Full pipeline: build, two-stage prune, extract.
inline AnalysisResult run_analysis(const Corpus& corpus, const RunConfig& cfg = {}) {
    cfg.validate();
    AnalysisResult r;
    r.built = build_journal_graph(corpus);
    auto [edge_pruned, edge_report] = prune_edges_by_journal_mean(r.built);
    r.edge_pruned = std::move(edge_pruned);
    auto views = prune_vertices_by_global_threshold(r.edge_pruned, cfg.in_threshold,
                                                    cfg.out_threshold);
    r.prune_report = views.report;
    r.prune_report.per_journal_mean_in = std::move(edge_report.per_journal_mean_in);
    r.prune_report.per_journal_mean_out = std::move(edge_report.per_journal_mean_out);
    r.prune_report.edges_removed = edge_report.edges_removed;
    r.in_view = std::move(views.in_view);
    r.out_view = std::move(views.out_view);
    r.resultant = resultant_graph(r.edge_pruned, r.in_view, r.out_view);
    r.patterns = extract_patterns(r.resultant, r.built, self_citation_totals(corpus),
                                  cfg.pattern_config());
    return r;
}

namespace detail {

inline nlohmann::json same_publisher_flag(const PatternInstance& inst, const Corpus& corpus) {
    Publisher first = corpus.journal(inst.members.front()).publisher;
    bool same = true;
    for (JournalIdx m : inst.members) {
        Publisher p = corpus.journal(m).publisher;
        if (p == Publisher::Unknown) return nullptr;  // not comparable
        if (p != first) same = false;
    }
    return same;
}

inline nlohmann::json top_authors_json(const Corpus& corpus,
                                       const std::vector<AuthorContribution>& top) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& t : top)
        out.push_back({{"author", corpus.author_id(t.author)}, {"citations", t.citation_count}});
    return out;
}

/// Per-member temporal evidence: IF peaks and the worst IF-to-RIF gap after
/// removing the member's in-pattern partners, plus paper-count surges.
inline nlohmann::json member_evidence(const Corpus& corpus, const RunConfig& cfg, JournalIdx m,
                                      const std::vector<JournalIdx>& partners,
                                      bool exclude_self) {
    CitationFilter rif_filter = CitationFilter::sources(partners, exclude_self);
    auto ifs = if_series(corpus, m, corpus.period(), cfg.window, {}, cfg.cite_year_mode);
    auto rifs =
        if_series(corpus, m, corpus.period(), cfg.window, rif_filter, cfg.cite_year_mode);

    nlohmann::json e;
    e["journal"] = corpus.journal(m).id;
    e["peak_years"] = detect_sudden_peaks(ifs, cfg.peak_ratio, cfg.peak_min_abs);
    e["surge_years"] = paper_count_surge(corpus, m, corpus.period(), cfg.surge_factor);
    if (auto gap = rif_gap_score(ifs, rifs)) {
        e["rif_gap_year"] = gap->first;
        e["rif_gap"] = gap->second;
        // Who drove the citations at the gap year, per biasing partner.
        nlohmann::json by_partner = nlohmann::json::array();
        for (JournalIdx q : partners) {
            auto top = top_contributing_authors(corpus, q, m, gap->first, cfg.window, 5);
            if (top.empty()) continue;
            by_partner.push_back({{"from", corpus.journal(q).id},
                                  {"top_authors", top_authors_json(corpus, top)}});
        }
        e["contributors"] = std::move(by_partner);
    }
    return e;
}

inline std::vector<JournalIdx> chain_neighbors(const PatternInstance& inst, std::size_t pos) {
    std::vector<JournalIdx> out;
    if (pos > 0) out.push_back(inst.members[pos - 1]);
    if (pos + 1 < inst.members.size()) out.push_back(inst.members[pos + 1]);
    return out;
}

}  // namespace detail

/// Micro-level explanation signals for one extracted pattern.
inline nlohmann::json instance_attribution(const PatternInstance& inst, const Corpus& corpus,
                                           const RunConfig& cfg) {
    nlohmann::json a;
    switch (inst.kind) {
        case PatternKind::SelfLoop: {
            JournalIdx j = inst.members[0];
            auto share = author_self_citation_share(corpus, j);
            a["author_self_citation_share"] = share ? nlohmann::json(*share) : nullptr;
            a["members"] = nlohmann::json::array(
                {detail::member_evidence(corpus, cfg, j, {}, /*exclude_self=*/true)});
            break;
        }
        case PatternKind::MutualCitation: {
            JournalIdx i = inst.members[0], k = inst.members[1];
            a["overlapping_author_count"] =
                overlapping_authors(corpus, i, k, corpus.period()).size();
            a["same_publisher"] = detail::same_publisher_flag(inst, corpus);
            a["members"] = nlohmann::json::array(
                {detail::member_evidence(corpus, cfg, i, {k}, false),
                 detail::member_evidence(corpus, cfg, k, {i}, false)});
            break;
        }
        case PatternKind::Chain: {
            a["same_publisher"] = detail::same_publisher_flag(inst, corpus);
            auto& members = a["members"] = nlohmann::json::array();
            for (std::size_t p = 0; p < inst.members.size(); ++p)
                members.push_back(detail::member_evidence(
                    corpus, cfg, inst.members[p], detail::chain_neighbors(inst, p), false));
            break;
        }
        case PatternKind::Triangle:
        case PatternKind::Mesh: {
            a["same_publisher"] = detail::same_publisher_flag(inst, corpus);
            auto& members = a["members"] = nlohmann::json::array();
            for (std::size_t p = 0; p < inst.members.size(); ++p) {
                std::vector<JournalIdx> partners;
                for (std::size_t q = 0; q < inst.members.size(); ++q)
                    if (q != p) partners.push_back(inst.members[q]);
                members.push_back(
                    detail::member_evidence(corpus, cfg, inst.members[p], partners, false));
            }
            break;
        }
        case PatternKind::Cartel: {
            JournalIdx target = inst.members.back();
            std::vector<JournalIdx> donors(inst.members.begin(), inst.members.end() - 1);
            a["members"] = nlohmann::json::array(
                {detail::member_evidence(corpus, cfg, target, donors, false)});
            auto& surges = a["donor_surge_years"] = nlohmann::json::object();
            for (JournalIdx d : donors)
                surges[corpus.journal(d).id] =
                    paper_count_surge(corpus, d, corpus.period(), cfg.surge_factor);
            break;
        }
    }
    return a;
}

namespace detail {

/// RIF exclusion set per flagged journal: itself when excessively
/// self-cited, plus every in-pattern partner that cites it.
struct FlaggedFilters {
    std::map<JournalIdx, CitationFilter> filters;

    static FlaggedFilters collect(const std::vector<PatternInstance>& instances) {
        std::map<JournalIdx, bool> self;
        std::map<JournalIdx, std::set<JournalIdx>> sources;
        auto mark = [&](JournalIdx j) { self.try_emplace(j, false); };
        for (const auto& inst : instances) {
            switch (inst.kind) {
                case PatternKind::SelfLoop:
                    mark(inst.members[0]);
                    self[inst.members[0]] = true;
                    break;
                case PatternKind::MutualCitation:
                case PatternKind::Triangle:
                case PatternKind::Mesh:
                    for (JournalIdx m : inst.members) {
                        mark(m);
                        for (JournalIdx q : inst.members)
                            if (q != m) sources[m].insert(q);
                    }
                    break;
                case PatternKind::Chain:
                    for (std::size_t p = 0; p < inst.members.size(); ++p) {
                        mark(inst.members[p]);
                        for (JournalIdx q : chain_neighbors(inst, p))
                            sources[inst.members[p]].insert(q);
                    }
                    break;
                case PatternKind::Cartel: {
                    JournalIdx t = inst.members.back();
                    mark(t);
                    for (std::size_t i = 0; i + 1 < inst.members.size(); ++i) {
                        mark(inst.members[i]);
                        sources[t].insert(inst.members[i]);
                    }
                    break;
                }
            }
        }
        FlaggedFilters out;
        for (const auto& [j, is_self] : self) {
            std::vector<JournalIdx> src(sources[j].begin(), sources[j].end());
            out.filters[j] = CitationFilter::sources(std::move(src), is_self);
        }
        return out;
    }
};

}  // namespace detail

/// Writes the full report bundle into `dir`: master report, prune report,
/// census, pattern instances with attribution, resultant-graph CSVs and
/// IF/RIF series for every flagged journal.  Output bytes are a pure
/// function of (corpus, config).
inline void write_report_bundle(const AnalysisResult& r, const Corpus& corpus,
                                const RunConfig& cfg, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream out(dir / name);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        return out;
    };

    {
        auto out = open("prune_report.json");
        out << prune_report_to_json(r.prune_report, &corpus).dump(2) << '\n';
    }
    {
        auto out = open("census.json");
        out << census_to_json(r.patterns.census).dump(2) << '\n';
    }
    {
        auto out = open("patterns.jsonl");
        for (const auto& inst : r.patterns.instances) {
            nlohmann::json j = pattern_to_json(inst, &corpus);
            j["attribution"] = instance_attribution(inst, corpus, cfg);
            out << j.dump() << '\n';
        }
    }
    {
        auto out = open("graph.csv");
        write_graph_csv(r.resultant, corpus, out);
    }
    {
        auto out = open("graph_yearly.csv");
        write_graph_yearly_csv(r.resultant, corpus, out);
    }
    {
        auto out = open("series.csv");
        SeriesCsvWriter writer(out);
        auto flagged = detail::FlaggedFilters::collect(r.patterns.instances);
        for (const auto& [j, filter] : flagged.filters) {
            const std::string& id = corpus.journal(j).id;
            TimeSeries papers, citations;
            for (int y = corpus.period().first; y <= corpus.period().last; ++y) {
                papers.points[y] = static_cast<double>(window_paper_count(corpus, j, y, cfg.window));
                citations.points[y] = static_cast<double>(
                    window_citation_count(corpus, j, y, cfg.window, {}, cfg.cite_year_mode));
            }
            writer.add(id, "paper_count", papers);
            writer.add(id, "citation_count", citations);
            writer.add(id, "if",
                       if_series(corpus, j, corpus.period(), cfg.window, {}, cfg.cite_year_mode));
            writer.add(id, "rif",
                       if_series(corpus, j, corpus.period(), cfg.window, filter,
                                 cfg.cite_year_mode));
        }
    }
    {
        CorpusStats stats = corpus_stats(corpus);
        nlohmann::json report;
        report["config"] = cfg.to_json();
        report["corpus"] = {{"papers", stats.papers},
                            {"journals", stats.journals},
                            {"citations", stats.citations},
                            {"dangling_references", corpus.dangling_ref_count()}};
        report["prune_report"] = prune_report_to_json(r.prune_report, &corpus);
        report["census"] = census_to_json(r.patterns.census);
        report["publisher_stats"] =
            publisher_stats_to_json(publisher_self_citation_stats(corpus, r.built));
        report["same_publisher_share"] =
            share_map_to_json(same_publisher_share(r.patterns.instances, corpus));
        auto out = open("report.json");
        out << report.dump(2) << '\n';
    }
}

/// Snapshot: canonical corpus plus a metadata sidecar, reloadable byte-stably.
inline void save_snapshot(const Corpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "corpus.jsonl");
        if (!out) throw std::runtime_error("cannot write " + (dir / "corpus.jsonl").string());
        write_corpus_jsonl(corpus, out);
    }
    nlohmann::json meta;
    meta["period"] = {{"first", corpus.period().first}, {"last", corpus.period().last}};
    meta["dangling_ref_count"] = corpus.dangling_ref_count();
    meta["papers"] = corpus.paper_count();
    meta["journals"] = corpus.journal_count();
    meta["citations"] = corpus.citation_count();
    std::ofstream out(dir / "meta.json");
    out << meta.dump(2) << '\n';
}

inline Corpus load_snapshot(const std::filesystem::path& dir) {
    std::ifstream meta_in(dir / "meta.json");
    if (!meta_in) throw std::runtime_error("missing snapshot: " + (dir / "meta.json").string());
    nlohmann::json meta = nlohmann::json::parse(meta_in);
    YearRange period{meta.at("period").at("first").get<int>(),
                     meta.at("period").at("last").get<int>()};
    std::ifstream in(dir / "corpus.jsonl");
    if (!in) throw std::runtime_error("missing snapshot: " + (dir / "corpus.jsonl").string());
    return parse_corpus(in, period);
}

}  // namespace citewatch
