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
#include <cstdint>
#include <cmath>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "citewatch/core.hpp"
#include "citewatch/patterns.hpp"

namespace citewatch {

/// Manifest problem: invalid shape, unknown member, or a plant that the
/// generated paper pool cannot carry.
class ManifestError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One planted anomaly.  Citation plants add references from the member
/// journals' year-y papers into the partner's impact-factor window
/// [y-1, y-2]; a surge plant multiplies yearly paper counts instead.
struct PlantSpec {
    std::string kind;                    // self_loop|mutual|chain|triangle|mesh|cartel|surge
    std::vector<JournalIdx> members;     // cartel: donors
    JournalIdx target = 0;               // cartel only
    YearRange years{0, 0};
    std::uint64_t refs_per_year = 0;     // per ordered pair, per active year
    double factor = 2.0;                 // surge only
    int shared_authors = 0;              // mutual only: authors publishing in both journals
};

/// Background-noise parameters plus the plant list.  Together with the seed
/// this fully determines the generated corpus bytes.
struct PlantManifest {
    int journals = 40;
    YearRange period = kDefaultPeriod;
    int papers_per_journal_year = 12;
    int refs_per_paper = 4;
    int authors_per_journal = 20;
    int authors_per_paper = 2;
    std::uint64_t seed = 1;
    std::vector<PlantSpec> plants;
};

namespace detail {

inline std::string zero_pad(std::uint64_t v, int width) {
    std::string s = std::to_string(v);
    if (static_cast<int>(s.size()) < width) s.insert(0, width - s.size(), '0');
    return s;
}

inline std::string synth_journal_id(JournalIdx j) { return "J" + zero_pad(j, 4); }
inline std::string synth_paper_id(PaperIdx p) { return "P" + zero_pad(p, 8); }

inline Publisher synth_publisher(JournalIdx j) {
    static constexpr std::array<Publisher, 8> cycle = {
        Publisher::ACM,   Publisher::Elsevier,    Publisher::IEEE,  Publisher::Springer,
        Publisher::Wiley, Publisher::OxfordPress, Publisher::Other, Publisher::Unknown,
    };
    return cycle[j % cycle.size()];
}

// mt19937_64 has a fixed standard-defined sequence; modulo keeps draws
// reproducible across library implementations.
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
    return rng() % bound;
}

}  // namespace detail

inline PlantSpec plant_from_json(const nlohmann::json& j) {
    PlantSpec p;
    p.kind = j.at("kind").get<std::string>();
    if (j.contains("members"))
        for (const auto& m : j.at("members")) p.members.push_back(m.get<JournalIdx>());
    if (j.contains("target")) p.target = j.at("target").get<JournalIdx>();
    if (j.contains("years"))
        p.years = {j.at("years").at("first").get<int>(), j.at("years").at("last").get<int>()};
    if (j.contains("refs_per_year")) p.refs_per_year = j.at("refs_per_year").get<std::uint64_t>();
    if (j.contains("factor")) p.factor = j.at("factor").get<double>();
    if (j.contains("shared_authors")) p.shared_authors = j.at("shared_authors").get<int>();
    return p;
}

inline PlantManifest manifest_from_json(const nlohmann::json& j) {
    PlantManifest m;
    if (j.contains("journals")) m.journals = j.at("journals").get<int>();
    if (j.contains("period"))
        m.period = {j.at("period").at("first").get<int>(), j.at("period").at("last").get<int>()};
    if (j.contains("papers_per_journal_year"))
        m.papers_per_journal_year = j.at("papers_per_journal_year").get<int>();
    if (j.contains("refs_per_paper")) m.refs_per_paper = j.at("refs_per_paper").get<int>();
    if (j.contains("authors_per_journal"))
        m.authors_per_journal = j.at("authors_per_journal").get<int>();
    if (j.contains("authors_per_paper"))
        m.authors_per_paper = j.at("authors_per_paper").get<int>();
    if (j.contains("seed")) m.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("plants"))
        for (const auto& p : j.at("plants")) m.plants.push_back(plant_from_json(p));
    return m;
}

inline nlohmann::json manifest_to_json(const PlantManifest& m) {
    nlohmann::json j;
    j["journals"] = m.journals;
    j["period"] = {{"first", m.period.first}, {"last", m.period.last}};
    j["papers_per_journal_year"] = m.papers_per_journal_year;
    j["refs_per_paper"] = m.refs_per_paper;
    j["authors_per_journal"] = m.authors_per_journal;
    j["authors_per_paper"] = m.authors_per_paper;
    j["seed"] = m.seed;
    auto& plants = j["plants"] = nlohmann::json::array();
    for (const auto& p : m.plants) {
        nlohmann::json pj;
        pj["kind"] = p.kind;
        pj["members"] = p.members;
        if (p.kind == "cartel") pj["target"] = p.target;
        pj["years"] = {{"first", p.years.first}, {"last", p.years.last}};
        if (p.kind != "surge") pj["refs_per_year"] = p.refs_per_year;
        if (p.kind == "surge") pj["factor"] = p.factor;
        if (p.shared_authors > 0) pj["shared_authors"] = p.shared_authors;
        plants.push_back(std::move(pj));
    }
    return j;
}

/// Census a default-threshold analysis should report for this manifest,
/// assuming disjoint supra-threshold plants over sub-threshold noise.
inline PatternCensus expected_census(const PlantManifest& m) {
    PatternCensus c;
    auto choose2 = [](std::uint64_t n) { return n * (n - 1) / 2; };
    auto choose3 = [](std::uint64_t n) { return n * (n - 1) * (n - 2) / 6; };
    for (const auto& p : m.plants) {
        std::uint64_t k = p.members.size();
        if (p.kind == "self_loop") {
            c.self_loops += 1;
            c.excessive_self_loops += 1;
        } else if (p.kind == "mutual") {
            c.mutual += 1;
        } else if (p.kind == "chain") {
            c.mutual += k - 1;
            c.chains += 1;
        } else if (p.kind == "triangle") {
            c.mutual += 3;
            c.triangles += 1;
        } else if (p.kind == "mesh") {
            c.mutual += choose2(k);
            c.triangles += choose3(k);
            c.meshes += 1;
        } else if (p.kind == "cartel") {
            c.cartels += 1;
        }
    }
    return c;
}

namespace detail {

struct PlantPairs {
    std::vector<std::pair<JournalIdx, JournalIdx>> directed;  // planted citation directions
    std::set<std::pair<JournalIdx, JournalIdx>> reserved;     // closed to background noise
};

inline PlantPairs plant_pairs(const PlantSpec& p) {
    PlantPairs out;
    auto reserve_both = [&](JournalIdx a, JournalIdx b) {
        out.reserved.insert({a, b});
        out.reserved.insert({b, a});
    };
    if (p.kind == "self_loop") {
        out.directed.push_back({p.members[0], p.members[0]});
        out.reserved.insert({p.members[0], p.members[0]});
    } else if (p.kind == "mutual" || p.kind == "triangle" || p.kind == "mesh") {
        for (std::size_t i = 0; i < p.members.size(); ++i)
            for (std::size_t j = i + 1; j < p.members.size(); ++j) {
                out.directed.push_back({p.members[i], p.members[j]});
                out.directed.push_back({p.members[j], p.members[i]});
                reserve_both(p.members[i], p.members[j]);
            }
    } else if (p.kind == "chain") {
        for (std::size_t i = 0; i + 1 < p.members.size(); ++i) {
            out.directed.push_back({p.members[i], p.members[i + 1]});
            out.directed.push_back({p.members[i + 1], p.members[i]});
        }
        // Reserve every pair so noise cannot close the chain into a triangle.
        for (std::size_t i = 0; i < p.members.size(); ++i)
            for (std::size_t j = i + 1; j < p.members.size(); ++j)
                reserve_both(p.members[i], p.members[j]);
    } else if (p.kind == "cartel") {
        for (JournalIdx d : p.members) {
            out.directed.push_back({d, p.target});
            reserve_both(d, p.target);
        }
    }
    return out;
}

inline void validate_manifest(const PlantManifest& m) {
    if (m.journals < 1) throw ManifestError("journals must be >= 1");
    if (m.period.first > m.period.last) throw ManifestError("period start exceeds end");
    if (m.papers_per_journal_year < 1) throw ManifestError("papers_per_journal_year must be >= 1");
    if (m.refs_per_paper < 0) throw ManifestError("refs_per_paper must be >= 0");
    if (m.authors_per_journal < 1) throw ManifestError("authors_per_journal must be >= 1");
    if (m.authors_per_paper < 1 || m.authors_per_paper > m.authors_per_journal)
        throw ManifestError("authors_per_paper must be in [1, authors_per_journal]");

    auto check_member = [&](JournalIdx j) {
        if (j >= static_cast<JournalIdx>(m.journals))
            throw ManifestError("plant member " + std::to_string(j) + " out of range");
    };
    for (const auto& p : m.plants) {
        for (JournalIdx j : p.members) check_member(j);
        std::set<JournalIdx> uniq(p.members.begin(), p.members.end());
        if (uniq.size() != p.members.size())
            throw ManifestError("plant members must be distinct");
        if (p.kind == "self_loop" || p.kind == "surge") {
            if (p.members.size() != 1) throw ManifestError(p.kind + " plant takes one member");
        } else if (p.kind == "mutual") {
            if (p.members.size() != 2) throw ManifestError("mutual plant takes two members");
        } else if (p.kind == "triangle") {
            if (p.members.size() != 3) throw ManifestError("triangle plant takes three members");
        } else if (p.kind == "mesh") {
            if (p.members.size() != 4 && p.members.size() != 5)
                throw ManifestError("mesh plant takes four or five members");
        } else if (p.kind == "chain") {
            if (p.members.size() < 3 || p.members.size() > 5)
                throw ManifestError("chain plant takes three to five members");
        } else if (p.kind == "cartel") {
            check_member(p.target);
            if (p.members.size() < 2) throw ManifestError("cartel plant takes >= 2 donors");
            if (uniq.count(p.target)) throw ManifestError("cartel target cannot be a donor");
        } else {
            throw ManifestError("unknown plant kind '" + p.kind + "'");
        }
        if (p.kind == "surge") {
            if (p.factor <= 1.0) throw ManifestError("surge factor must be > 1");
            if (p.years.first <= m.period.first)
                throw ManifestError("surge years must start after the first period year");
        } else {
            if (p.refs_per_year < 1) throw ManifestError("refs_per_year must be >= 1");
            if (p.years.first <= m.period.first)
                throw ManifestError("plant years must start after the first period year");
        }
        if (p.years.first > p.years.last || !m.period.contains(p.years.first) ||
            !m.period.contains(p.years.last))
            throw ManifestError("plant years must lie inside the period");
    }

    // Two plants citing along the same ordered journal pair would collide on
    // (citing, cited) paper pairs, which the parser deduplicates silently.
    std::set<std::pair<JournalIdx, JournalIdx>> all_directed;
    for (const auto& p : m.plants)
        for (const auto& d : plant_pairs(p).directed)
            if (!all_directed.insert(d).second)
                throw ManifestError("plants overlap on a directed journal pair");
}

}  // namespace detail

/// Generates a canonical-format corpus: uniform background citations over
/// all earlier papers (journal pairs claimed by a plant are kept clean) with
/// each plant's citations injected on top.  Deterministic per manifest.
/// Returns the manifest echo, including the expected default census.
inline nlohmann::json generate_synthetic_corpus(const PlantManifest& m, std::ostream& out) {
    detail::validate_manifest(m);

    const int years = m.period.span();
    const JournalIdx nj = static_cast<JournalIdx>(m.journals);

    // Yearly paper counts, with surge plants compounding year over year.
    std::vector<std::vector<std::uint32_t>> counts(nj, std::vector<std::uint32_t>(years, 0));
    for (JournalIdx j = 0; j < nj; ++j)
        for (int yi = 0; yi < years; ++yi)
            counts[j][yi] = static_cast<std::uint32_t>(m.papers_per_journal_year);
    for (const auto& p : m.plants) {
        if (p.kind != "surge") continue;
        for (int y = p.years.first; y <= p.years.last; ++y) {
            int yi = y - m.period.first;
            counts[p.members[0]][yi] = static_cast<std::uint32_t>(
                std::llround(counts[p.members[0]][yi - 1] * p.factor));
        }
    }

    // Lay papers out year-major so that "all earlier papers" is a prefix.
    std::vector<int> paper_year;
    std::vector<JournalIdx> paper_journal;
    std::vector<std::vector<std::vector<PaperIdx>>> by_jy(
        nj, std::vector<std::vector<PaperIdx>>(years));
    std::vector<PaperIdx> year_start(years + 1, 0);
    for (int yi = 0; yi < years; ++yi) {
        year_start[yi] = static_cast<PaperIdx>(paper_year.size());
        for (JournalIdx j = 0; j < nj; ++j) {
            for (std::uint32_t s = 0; s < counts[j][yi]; ++s) {
                by_jy[j][yi].push_back(static_cast<PaperIdx>(paper_year.size()));
                paper_year.push_back(m.period.first + yi);
                paper_journal.push_back(j);
            }
        }
    }
    year_start[years] = static_cast<PaperIdx>(paper_year.size());

    std::set<std::pair<JournalIdx, JournalIdx>> reserved;
    for (const auto& p : m.plants)
        for (const auto& pr : detail::plant_pairs(p).reserved) reserved.insert(pr);

    const std::size_t n_papers = paper_year.size();
    std::vector<std::vector<PaperIdx>> refs(n_papers);
    std::mt19937_64 rng(m.seed);

    // Background noise: uniform draws over the earlier-paper prefix, skipping
    // reserved journal pairs and duplicate targets.
    for (PaperIdx p = 0; p < n_papers; ++p) {
        int yi = paper_year[p] - m.period.first;
        PaperIdx pool = year_start[yi];
        if (pool == 0) continue;
        std::unordered_set<PaperIdx> seen;
        for (int r = 0; r < m.refs_per_paper; ++r) {
            for (int attempt = 0; attempt < 64; ++attempt) {
                PaperIdx q = static_cast<PaperIdx>(detail::draw(rng, pool));
                if (seen.count(q)) continue;
                if (reserved.count({paper_journal[p], paper_journal[q]})) continue;
                seen.insert(q);
                refs[p].push_back(q);
                break;
            }
        }
    }

    // Planted citations: cover the (citing paper, window paper) product in a
    // fixed order; running out of distinct pairs means the plant cannot fit.
    for (const auto& plant : m.plants) {
        if (plant.kind == "surge") continue;
        auto pairs = detail::plant_pairs(plant);
        for (auto [src, dst] : pairs.directed) {
            for (int y = plant.years.first; y <= plant.years.last; ++y) {
                int yi = y - m.period.first;
                const auto& citing = by_jy[src][yi];
                std::vector<PaperIdx> window;
                for (int wy = yi - 1; wy >= 0 && wy >= yi - 2; --wy)
                    window.insert(window.end(), by_jy[dst][wy].begin(), by_jy[dst][wy].end());
                std::uint64_t capacity =
                    static_cast<std::uint64_t>(citing.size()) * window.size();
                if (plant.refs_per_year > capacity)
                    throw ManifestError(
                        "plant intensity " + std::to_string(plant.refs_per_year) +
                        " exceeds available citing/window papers (" + std::to_string(capacity) +
                        ") for year " + std::to_string(y));
                for (std::uint64_t i = 0; i < plant.refs_per_year; ++i) {
                    PaperIdx cp = citing[i % citing.size()];
                    PaperIdx cq = window[static_cast<std::size_t>(i / citing.size())];
                    refs[cp].push_back(cq);
                }
            }
        }
    }

    // Shared-author injection for mutual plants.
    std::vector<std::vector<std::string>> extra_authors(n_papers);
    for (std::size_t pi = 0; pi < m.plants.size(); ++pi) {
        const auto& plant = m.plants[pi];
        if (plant.kind != "mutual" || plant.shared_authors <= 0) continue;
        for (int y = plant.years.first; y <= plant.years.last; ++y) {
            int yi = y - m.period.first;
            for (int i = 0; i < plant.shared_authors; ++i) {
                std::string author = "S" + std::to_string(pi) + "_" + std::to_string(i);
                for (JournalIdx j : plant.members) {
                    const auto& papers = by_jy[j][yi];
                    extra_authors[papers[i % papers.size()]].push_back(author);
                }
            }
        }
    }

    // Emit canonical JSON lines; creation order is paper-id order.
    std::vector<std::uint32_t> journal_seq(nj, 0);
    for (PaperIdx p = 0; p < n_papers; ++p) {
        JournalIdx j = paper_journal[p];
        nlohmann::json rec;
        rec["paper_id"] = detail::synth_paper_id(p);
        rec["year"] = paper_year[p];
        rec["journal_id"] = detail::synth_journal_id(j);
        rec["journal_name"] = "Synthetic Journal " + std::to_string(j);
        Publisher pub = detail::synth_publisher(j);
        if (pub != Publisher::Unknown) rec["publisher"] = publisher_name(pub);
        auto& authors = rec["author_ids"] = nlohmann::json::array();
        std::uint32_t s = journal_seq[j]++;
        for (int t = 0; t < m.authors_per_paper; ++t) {
            std::uint32_t a = (s * m.authors_per_paper + t) % m.authors_per_journal;
            authors.push_back("A" + detail::zero_pad(j, 4) + "_" + detail::zero_pad(a, 3));
        }
        for (const auto& extra : extra_authors[p]) authors.push_back(extra);
        auto& references = rec["references"] = nlohmann::json::array();
        for (PaperIdx q : refs[p]) references.push_back(detail::synth_paper_id(q));
        out << rec.dump() << '\n';
    }

    nlohmann::json echo;
    echo["manifest"] = manifest_to_json(m);
    echo["papers"] = n_papers;
    echo["journals"] = m.journals;
    echo["expected_census"] = census_to_json(expected_census(m));
    auto& ids = echo["journal_ids"] = nlohmann::json::array();
    for (JournalIdx j = 0; j < nj; ++j) ids.push_back(detail::synth_journal_id(j));
    return echo;
}

inline std::string generate_synthetic_corpus_string(const PlantManifest& m) {
    std::ostringstream out;
    generate_synthetic_corpus(m, out);
    return out.str();
}

}  // namespace citewatch
