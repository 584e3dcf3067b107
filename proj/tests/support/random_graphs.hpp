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

#include <random>
#include <vector>

#include "citewatch/graph.hpp"

namespace citewatch::testing {

struct RandomGraphParams {
    int vertices = 10;
    double edge_prob = 0.2;      // each ordered pair independently
    double mutual_prob = 0.3;    // chance the reverse edge is forced alongside
    double self_loop_prob = 0.2;
    std::uint64_t max_weight = 2000;
    int year_first = 2000;
    int year_count = 5;          // weight spread over up to this many years
};

/// Random directed weighted graph with year histograms; weights uniform in
/// [1, max_weight].  mutual_prob biases toward bi-directional pairs so motif
/// tests see non-trivial structure.
inline JournalGraph random_graph(std::mt19937_64& rng, const RandomGraphParams& p = {}) {
    auto chance = [&](double prob) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < prob;
    };
    auto weight = [&] {
        return std::uniform_int_distribution<std::uint64_t>(1, p.max_weight)(rng);
    };

    std::vector<JournalIdx> vertices;
    for (int v = 0; v < p.vertices; ++v) vertices.push_back(static_cast<JournalIdx>(v));

    std::vector<JournalGraph::Edge> edges;
    auto add_edge = [&](JournalIdx s, JournalIdx d) {
        JournalGraph::Edge e;
        e.src = s;
        e.dst = d;
        e.weight = weight();
        // Spread the weight over a few years; remainder lands in the first.
        int spread = 1 + static_cast<int>(rng() % p.year_count);
        std::uint64_t left = e.weight;
        for (int i = 0; i < spread && left > 0; ++i) {
            std::uint64_t part = (i == spread - 1) ? left : 1 + rng() % left;
            e.years.emplace_back(p.year_first + i, static_cast<std::uint32_t>(part));
            left -= part;
        }
        edges.push_back(std::move(e));
    };

    std::vector<std::vector<bool>> present(p.vertices, std::vector<bool>(p.vertices, false));
    for (int s = 0; s < p.vertices; ++s) {
        for (int d = 0; d < p.vertices; ++d) {
            if (s == d) continue;
            if (present[s][d]) continue;
            if (!chance(p.edge_prob)) continue;
            present[s][d] = true;
            add_edge(s, d);
            if (!present[d][s] && chance(p.mutual_prob)) {
                present[d][s] = true;
                add_edge(d, s);
            }
        }
        if (chance(p.self_loop_prob)) add_edge(s, s);
    }
    return JournalGraph::from_edges(std::move(vertices), std::move(edges));
}

}  // namespace citewatch::testing
