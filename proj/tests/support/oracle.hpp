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
#include <set>
#include <vector>

#include "citewatch/graph.hpp"
#include "citewatch/patterns.hpp"

namespace citewatch::testing {

/// Brute-force pattern enumeration by exhaustive subset scan, written
/// directly from the pattern definitions.  Deliberately independent of the
/// library's incremental extractors; quadratic-to-quintic and meant for
/// graphs of at most a few dozen vertices.
class BruteForce {
  public:
    explicit BruteForce(const JournalGraph& g) : g_(g), verts_(g.vertices()) {
        n_ = verts_.size();
        mutual_.assign(n_, std::vector<bool>(n_, false));
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b)
                if (a != b && g.weight(verts_[a], verts_[b]) > 0 &&
                    g.weight(verts_[b], verts_[a]) > 0)
                    mutual_[a][b] = true;
    }

    std::set<std::pair<JournalIdx, JournalIdx>> mutual_pairs() const {
        std::set<std::pair<JournalIdx, JournalIdx>> out;
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = a + 1; b < n_; ++b)
                if (mutual_[a][b]) out.insert({verts_[a], verts_[b]});
        return out;
    }

    std::set<std::vector<JournalIdx>> triangles() const {
        std::set<std::vector<JournalIdx>> out;
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = a + 1; b < n_; ++b)
                for (std::size_t c = b + 1; c < n_; ++c)
                    if (mutual_[a][b] && mutual_[a][c] && mutual_[b][c])
                        out.insert({verts_[a], verts_[b], verts_[c]});
        return out;
    }

    /// Maximal pairwise-mutual subsets of size 4 or 5.
    std::set<std::vector<JournalIdx>> meshes() const {
        std::set<std::vector<JournalIdx>> out;
        for_each_subset(4, [&](const std::vector<std::size_t>& s) {
            if (clique(s) && maximal_clique(s)) out.insert(labels(s));
        });
        for_each_subset(5, [&](const std::vector<std::size_t>& s) {
            if (clique(s) && maximal_clique(s)) out.insert(labels(s));
        });
        return out;
    }

    /// Maximal open chains with edge count in [min_len, max_len]: some
    /// ordering of the subset has consecutive members mutual and
    /// non-consecutive members not mutual, and no outside vertex joins it
    /// into a longer such ordering.
    std::set<std::vector<JournalIdx>> chains(int min_len = 2, int max_len = 4) const {
        std::set<std::vector<JournalIdx>> out;
        for (int members = min_len + 1; members <= max_len + 1; ++members) {
            for_each_subset(members, [&](const std::vector<std::size_t>& s) {
                auto path = open_chain_ordering(s);
                if (path.empty()) return;
                for (std::size_t u = 0; u < n_; ++u) {
                    if (std::find(s.begin(), s.end(), u) != s.end()) continue;
                    std::vector<std::size_t> bigger = s;
                    bigger.push_back(u);
                    std::sort(bigger.begin(), bigger.end());
                    if (!open_chain_ordering(bigger).empty()) return;  // extendable
                }
                std::vector<JournalIdx> seq;
                for (std::size_t v : path) seq.push_back(verts_[v]);
                std::vector<JournalIdx> rev(seq.rbegin(), seq.rend());
                out.insert(std::min(seq, rev));
            });
        }
        return out;
    }

    /// Donor sets per target: surviving edge donor->target in g, raw
    /// back-weight target->donor within back_max.  Members donors+target.
    static std::set<std::vector<JournalIdx>> cartels(const JournalGraph& g,
                                                     const JournalGraph& raw, int min_donors,
                                                     std::uint64_t back_max) {
        std::set<std::vector<JournalIdx>> out;
        for (JournalIdx t : g.vertices()) {
            std::vector<JournalIdx> donors;
            for (JournalIdx d : g.vertices()) {
                if (d == t) continue;
                if (g.weight(d, t) == 0) continue;
                if (raw.weight(t, d) > back_max) continue;
                donors.push_back(d);
            }
            if (donors.size() < static_cast<std::size_t>(min_donors)) continue;
            std::sort(donors.begin(), donors.end());
            donors.push_back(t);
            out.insert(donors);
        }
        return out;
    }

    static std::set<JournalIdx> self_loops(const JournalGraph& g,
                                           const SelfCitationTotals& totals, double ratio) {
        std::set<JournalIdx> out;
        for (JournalIdx v : g.vertices()) {
            auto tot = totals.total_incoming.find(v);
            if (tot == totals.total_incoming.end() || tot->second == 0) continue;
            auto self = totals.self_weight.find(v);
            std::uint64_t sw = self == totals.self_weight.end() ? 0 : self->second;
            if (static_cast<double>(sw) / static_cast<double>(tot->second) > ratio)
                out.insert(v);
        }
        return out;
    }

  private:
    template <typename F>
    void for_each_subset(int size, F&& fn) const {
        if (static_cast<std::size_t>(size) > n_) return;
        std::vector<std::size_t> idx(size);
        for (int i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            fn(idx);
            int i = size - 1;
            while (i >= 0 && idx[i] == n_ - size + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }

    bool clique(const std::vector<std::size_t>& s) const {
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j)
                if (!mutual_[s[i]][s[j]]) return false;
        return true;
    }

    bool maximal_clique(const std::vector<std::size_t>& s) const {
        for (std::size_t v = 0; v < n_; ++v) {
            if (std::find(s.begin(), s.end(), v) != s.end()) continue;
            bool all = true;
            for (std::size_t u : s)
                if (!mutual_[u][v]) { all = false; break; }
            if (all) return false;
        }
        return true;
    }

    /// Any permutation of s forming an open chain; empty if none.  An open
    /// chain on m members has exactly m-1 internal mutual pairs and no member
    /// touching more than two others, so anything else skips the scan.
    std::vector<std::size_t> open_chain_ordering(std::vector<std::size_t> s) const {
        std::size_t pairs = 0;
        std::vector<int> degree(s.size(), 0);
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j)
                if (mutual_[s[i]][s[j]]) {
                    ++pairs;
                    ++degree[i];
                    ++degree[j];
                }
        if (pairs != s.size() - 1) return {};
        for (int d : degree)
            if (d > 2) return {};
        std::sort(s.begin(), s.end());
        do {
            bool ok = true;
            for (std::size_t i = 0; i < s.size() && ok; ++i)
                for (std::size_t j = i + 1; j < s.size() && ok; ++j) {
                    bool adjacent_in_path = (j == i + 1);
                    if (mutual_[s[i]][s[j]] != adjacent_in_path) ok = false;
                }
            if (ok) return s;
        } while (std::next_permutation(s.begin(), s.end()));
        return {};
    }

    const JournalGraph& g_;
    std::vector<JournalIdx> verts_;
    std::size_t n_ = 0;
    std::vector<std::vector<bool>> mutual_;
};

}  // namespace citewatch::testing
