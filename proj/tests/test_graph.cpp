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

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "citewatch/graph.hpp"
#include "support/corpus_builder.hpp"
#include "support/random_graphs.hpp"

using namespace citewatch;
using citewatch::testing::CorpusBuilder;
using citewatch::testing::random_graph;
using citewatch::testing::RandomGraphParams;

namespace {

JournalGraph::Edge edge(JournalIdx s, JournalIdx d, std::uint64_t w, int year = 2000) {
    JournalGraph::Edge e;
    e.src = s;
    e.dst = d;
    e.weight = w;
    e.years.emplace_back(year, static_cast<std::uint32_t>(w));
    return e;
}

}  // namespace

TEST_CASE("journal graph aggregates reference pairs per ordered journal pair", "[graph]") {
    CorpusBuilder b;
    // J1 papers cite J2 papers 7 times, J2 cites J1 3 times.
    for (int i = 0; i < 4; ++i) b.paper("a" + std::to_string(i), 2000, "J1");
    for (int i = 0; i < 4; ++i) b.paper("b" + std::to_string(i), 2000, "J2");
    b.paper("a4", 2001, "J1", {}, {"b0", "b1", "b2", "b3"});
    b.paper("a5", 2002, "J1", {}, {"b0", "b1", "b2"});
    b.paper("b4", 2001, "J2", {}, {"a0", "a1", "a2"});
    Corpus c = b.build();
    JournalGraph g = build_journal_graph(c);

    JournalIdx j1 = *c.find_journal("J1"), j2 = *c.find_journal("J2");
    CHECK(g.weight(j1, j2) == 7);
    CHECK(g.weight(j2, j1) == 3);
    CHECK(g.total_weight() == c.citation_count());

    const auto* e = g.edge(j1, j2);
    REQUIRE(e != nullptr);
    REQUIRE(e->years.size() == 2);
    CHECK(e->years[0] == std::pair{2001, std::uint32_t{4}});
    CHECK(e->years[1] == std::pair{2002, std::uint32_t{3}});
}

TEST_CASE("corpus with only intra-journal references yields self-loops only", "[graph]") {
    Corpus c = CorpusBuilder{}
                   .paper("a0", 2000, "J1")
                   .paper("a1", 2001, "J1", {}, {"a0"})
                   .paper("b0", 2000, "J2")
                   .paper("b1", 2001, "J2", {}, {"b0"})
                   .build();
    JournalGraph g = build_journal_graph(c);
    for (const auto& e : g.edges()) CHECK(e.src == e.dst);
    CHECK(g.edges().size() == 2);
}

TEST_CASE("corpus without references yields vertices and no edges", "[graph]") {
    Corpus c = CorpusBuilder{}.paper("a", 2000, "J1").paper("b", 2000, "J2").build();
    JournalGraph g = build_journal_graph(c);
    CHECK(g.vertices().size() == 2);
    CHECK(g.edges().empty());
}

TEST_CASE("effective citation age counts distinct active years", "[graph]") {
    auto g = JournalGraph::from_edges(
        {0, 1, 2},
        {edge(1, 0, 5, 2003), edge(2, 0, 2, 2007), edge(0, 1, 1, 2003)});
    CHECK(effective_citation_age(g, 0, Direction::In) == 2);
    CHECK(effective_citation_age(g, 0, Direction::Out) == 1);
    CHECK(effective_citation_age(g, 2, Direction::In) == 0);
    CHECK_THROWS_AS(effective_citation_age(g, 9, Direction::In), UnknownJournalError);
}

TEST_CASE("a self-loop counts toward both directions of effective age", "[graph]") {
    auto g = JournalGraph::from_edges({0}, {edge(0, 0, 4, 2005)});
    CHECK(effective_citation_age(g, 0, Direction::In) == 1);
    CHECK(effective_citation_age(g, 0, Direction::Out) == 1);
}

TEST_CASE("edge pruning needs strict improvement over the endpoint mean", "[graph]") {
    SECTION("single edge of weight 5 over age 1 is removed") {
        auto g = JournalGraph::from_edges({0, 1}, {edge(0, 1, 5)});
        auto [pruned, report] = prune_edges_by_journal_mean(g);
        CHECK(pruned.edges().empty());
        CHECK(report.edges_removed == 1);
        CHECK(report.per_journal_mean_out.at(0) == 5.0);
        CHECK(report.per_journal_mean_in.at(1) == 5.0);
        CHECK(pruned.vertices() == g.vertices());  // vertex pruning comes later
    }
    SECTION("edges 10 and 2 over age 1: source mean 12 removes both there") {
        // Give the weight-10 edge a recipient with a low mean so the OR keeps it.
        auto g = JournalGraph::from_edges(
            {0, 1, 2, 3},
            {edge(0, 1, 10), edge(0, 2, 2), edge(3, 1, 1, 2001), edge(3, 1, 0, 2001)});
        // journal 1 receives 10 + 1 over two years -> mean_in 5.5; edge 10 > 5.5 survives.
        std::vector<JournalGraph::Edge> edges = {edge(0, 1, 10), edge(0, 2, 2),
                                                 edge(3, 1, 1, 2001)};
        g = JournalGraph::from_edges({0, 1, 2, 3}, std::move(edges));
        auto [pruned, report] = prune_edges_by_journal_mean(g);
        CHECK(pruned.weight(0, 1) == 10);  // kept via recipient mean
        CHECK(pruned.weight(0, 2) == 0);   // loses at both endpoints
    }
    SECTION("all edges equal at both endpoints are removed by strictness") {
        auto g = JournalGraph::from_edges({0, 1, 2},
                                          {edge(0, 1, 4), edge(1, 2, 4), edge(2, 0, 4)});
        auto [pruned, report] = prune_edges_by_journal_mean(g);
        CHECK(pruned.edges().empty());
        CHECK(report.edges_removed == 3);
    }
}

TEST_CASE("vertex pruning by global threshold", "[graph]") {
    SECTION("hub with incoming weight 200 stays in the in-view") {
        auto g = JournalGraph::from_edges(
            {0, 1, 2, 3},
            {edge(1, 0, 120), edge(2, 0, 80), edge(3, 2, 30)});
        auto r = prune_vertices_by_global_threshold(g, 110, 109);
        CHECK(r.in_view.vertices() == std::vector<JournalIdx>{0});
        CHECK(r.out_view.vertices() == std::vector<JournalIdx>{1});
        CHECK(r.report.kept_in_vertices == 1);
        CHECK(r.report.kept_out_vertices == 1);
    }
    SECTION("everything below both thresholds empties both views") {
        auto g = JournalGraph::from_edges({0, 1}, {edge(0, 1, 50)});
        auto r = prune_vertices_by_global_threshold(g, 110, 109);
        CHECK(r.in_view.vertices().empty());
        CHECK(r.out_view.vertices().empty());
    }
    SECTION("nonpositive thresholds are rejected") {
        auto g = JournalGraph::from_edges({0}, {});
        CHECK_THROWS_AS(prune_vertices_by_global_threshold(g, 0, 109), ConfigError);
        CHECK_THROWS_AS(prune_vertices_by_global_threshold(g, 110, -1), ConfigError);
    }
}

TEST_CASE("resultant graph is the union-induced subgraph", "[graph]") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 20; ++round) {
        RandomGraphParams p;
        p.vertices = 3 + static_cast<int>(rng() % 10);
        p.edge_prob = 0.4;
        JournalGraph g = random_graph(rng, p);
        auto [pruned, report] = prune_edges_by_journal_mean(g);
        auto views = prune_vertices_by_global_threshold(pruned, 50, 40);
        JournalGraph res = resultant_graph(pruned, views.in_view, views.out_view);

        // Brute-force induced-subgraph oracle over the union vertex set.
        std::set<JournalIdx> keep(views.in_view.vertices().begin(),
                                  views.in_view.vertices().end());
        keep.insert(views.out_view.vertices().begin(), views.out_view.vertices().end());
        CHECK(res.vertices() == std::vector<JournalIdx>(keep.begin(), keep.end()));
        std::set<std::pair<JournalIdx, JournalIdx>> expect;
        for (const auto& e : pruned.edges())
            if (keep.count(e.src) && keep.count(e.dst)) expect.insert({e.src, e.dst});
        std::set<std::pair<JournalIdx, JournalIdx>> got;
        for (const auto& e : res.edges()) {
            got.insert({e.src, e.dst});
            CHECK(e.weight == pruned.weight(e.src, e.dst));  // weights never altered
        }
        CHECK(got == expect);
    }
}

TEST_CASE("resultant graph with identical views is the view itself", "[graph]") {
    auto g = JournalGraph::from_edges({0, 1}, {edge(0, 1, 10), edge(1, 0, 8)});
    JournalGraph res = resultant_graph(g, g, g);
    CHECK(res.vertices() == g.vertices());
    CHECK(res.edges().size() == g.edges().size());
}

TEST_CASE("pruning is monotone and never alters weights", "[graph]") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 30; ++round) {
        RandomGraphParams p;
        p.vertices = 3 + static_cast<int>(rng() % 15);
        JournalGraph g = random_graph(rng, p);
        auto [pruned, report] = prune_edges_by_journal_mean(g);
        CHECK(pruned.edges().size() + report.edges_removed == g.edges().size());
        for (const auto& e : pruned.edges()) CHECK(g.weight(e.src, e.dst) == e.weight);
        auto views = prune_vertices_by_global_threshold(pruned, 60, 60);
        for (JournalIdx v : views.in_view.vertices()) CHECK(pruned.has_vertex(v));
        for (JournalIdx v : views.out_view.vertices()) CHECK(pruned.has_vertex(v));
    }
}

TEST_CASE("per-year edge histograms reproduce corpus yearly citation totals", "[graph]") {
    CorpusBuilder b;
    b.paper("x0", 1998, "J1").paper("y0", 1998, "J2");
    b.paper("x1", 2000, "J1", {}, {"y0"});
    b.paper("x2", 2001, "J1", {}, {"y0", "x0"});
    b.paper("y1", 2001, "J2", {}, {"x0"});
    Corpus c = b.build();
    JournalGraph g = build_journal_graph(c);
    CorpusStats stats = corpus_stats(c);

    std::map<int, std::uint64_t> from_graph;
    for (const auto& e : g.edges())
        for (auto [year, count] : e.years) from_graph[year] += count;
    for (const auto& [year, total] : from_graph)
        CHECK(total == stats.citations_by_year.at(year));
    std::uint64_t sum = 0;
    for (auto& [y, v] : stats.citations_by_year) sum += v;
    CHECK(g.total_weight() == sum);
}

TEST_CASE("effective age never exceeds the corpus period span", "[graph]") {
    Corpus c = CorpusBuilder{}
                   .paper("a", 2000, "J1")
                   .paper("b", 2001, "J2", {}, {"a"})
                   .paper("d", 2005, "J2", {}, {"a"})
                   .build();
    JournalGraph g = build_journal_graph(c);
    for (JournalIdx v : g.vertices()) {
        CHECK(effective_citation_age(g, v, Direction::In) <= c.period().span());
        CHECK(effective_citation_age(g, v, Direction::Out) <= c.period().span());
    }
}

TEST_CASE("prune report means match a direct recomputation", "[graph]") {
    std::mt19937_64 rng(5);
    RandomGraphParams p;
    p.vertices = 12;
    JournalGraph g = random_graph(rng, p);
    auto views = prune_vertices_by_global_threshold(g, 10, 10);

    double mean_in = 0;
    for (JournalIdx v : g.vertices()) mean_in += static_cast<double>(g.in_weight(v));
    mean_in /= static_cast<double>(g.vertices().size());
    CHECK_THAT(views.report.global_mean_in,
               Catch::Matchers::WithinAbs(mean_in, 1e-9));
}
