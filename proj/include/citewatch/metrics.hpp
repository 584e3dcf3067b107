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
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "citewatch/core.hpp"
#include "citewatch/corpus.hpp"

namespace citewatch {

/// Year-indexed real series.  Years whose metric had a zero denominator are
/// first-class "undefined" markers, disjoint from the defined points.
struct TimeSeries {
    std::map<int, double> points;
    std::set<int> undefined_years;

    std::optional<double> value(int y) const {
        auto it = points.find(y);
        if (it == points.end()) return std::nullopt;
        return it->second;
    }

    bool defined(int y) const { return points.count(y) > 0; }
};

/// Citation sources to exclude from a revised-impact-factor numerator.
struct CitationFilter {
    bool exclude_self = false;
    std::vector<JournalIdx> exclude_sources;  // sorted, unique

    bool empty() const { return !exclude_self && exclude_sources.empty(); }

    bool excludes(JournalIdx citing, JournalIdx subject) const {
        if (exclude_self && citing == subject) return true;
        return std::binary_search(exclude_sources.begin(), exclude_sources.end(), citing);
    }

    static CitationFilter none() { return {}; }

    static CitationFilter self_only() { return {true, {}}; }

    static CitationFilter sources(std::vector<JournalIdx> src, bool self = false) {
        std::sort(src.begin(), src.end());
        src.erase(std::unique(src.begin(), src.end()), src.end());
        return {self, std::move(src)};
    }
};

/// Dating convention for the impact-factor numerator: `Current` counts
/// citations whose citing paper is published exactly in the focal year (the
/// standard convention); `Window` restricts the citing paper to the same
/// preceding window as the cited articles.
enum class CiteYearMode { Current, Window };

inline int window_paper_count(const Corpus& corpus, JournalIdx j, int y, int k = 2) {
    return static_cast<int>(corpus.papers_in_window(j, y, k).size());
}

/// Citations gathered by journal j's window articles, after removing the
/// filtered sources.  The citing-paper year must match `mode`.
inline std::uint64_t window_citation_count(const Corpus& corpus, JournalIdx j, int y, int k,
                                           const CitationFilter& filter = {},
                                           CiteYearMode mode = CiteYearMode::Current) {
    std::uint64_t count = 0;
    for (PaperIdx q : corpus.papers_in_window(j, y, k)) {
        for (PaperIdx p : corpus.citing_papers(q)) {
            int cy = corpus.paper(p).year;
            bool in_scope = mode == CiteYearMode::Current ? cy == y : (cy >= y - k && cy <= y - 1);
            if (!in_scope) continue;
            if (filter.excludes(corpus.paper(p).journal, j)) continue;
            ++count;
        }
    }
    return count;
}

/// Citations-to-window over window paper count; nullopt when the journal
/// published nothing in the window (zero denominator).
inline std::optional<double> impact_factor(const Corpus& corpus, JournalIdx j, int y, int k = 2,
                                           CiteYearMode mode = CiteYearMode::Current) {
    int papers = window_paper_count(corpus, j, y, k);
    if (papers == 0) return std::nullopt;
    return static_cast<double>(window_citation_count(corpus, j, y, k, {}, mode)) /
           static_cast<double>(papers);
}

/// Impact factor with the filtered numerator; same denominator, so it is
/// defined exactly where impact_factor is, and never exceeds it.
inline std::optional<double> revised_impact_factor(const Corpus& corpus, JournalIdx j, int y,
                                                   int k, const CitationFilter& filter,
                                                   CiteYearMode mode = CiteYearMode::Current) {
    int papers = window_paper_count(corpus, j, y, k);
    if (papers == 0) return std::nullopt;
    return static_cast<double>(window_citation_count(corpus, j, y, k, filter, mode)) /
           static_cast<double>(papers);
}

inline TimeSeries if_series(const Corpus& corpus, JournalIdx j, YearRange years, int k = 2,
                            const CitationFilter& filter = {},
                            CiteYearMode mode = CiteYearMode::Current) {
    TimeSeries s;
    for (int y = years.first; y <= years.last; ++y) {
        auto v = revised_impact_factor(corpus, j, y, k, filter, mode);
        if (v)
            s.points[y] = *v;
        else
            s.undefined_years.insert(y);
    }
    return s;
}

/// Years where the series jumps by at least `ratio` over the immediately
/// preceding year and clears the absolute floor.  Both years must be defined.
inline std::vector<int> detect_sudden_peaks(const TimeSeries& series, double ratio = 1.5,
                                            double min_abs = 0.5) {
    if (ratio <= 1.0) throw ConfigError("peak ratio must be > 1");
    if (min_abs < 0.0) throw ConfigError("peak floor must be >= 0");
    std::vector<int> peaks;
    for (const auto& [y, v] : series.points) {
        auto prev = series.value(y - 1);
        if (!prev) continue;
        if (v >= ratio * *prev && v >= min_abs) peaks.push_back(y);
    }
    return peaks;
}

/// Year maximizing the relative IF-to-RIF gap (IF − RIF) / IF over years
/// where IF > 0; earliest year wins ties.  Empty when IF is never positive.
inline std::optional<std::pair<int, double>> rif_gap_score(const TimeSeries& if_s,
                                                           const TimeSeries& rif_s) {
    std::optional<std::pair<int, double>> best;
    for (const auto& [y, iv] : if_s.points) {
        if (iv <= 0.0) continue;
        auto rv = rif_s.value(y);
        if (!rv) continue;
        double gap = (iv - *rv) / iv;
        if (!best || gap > best->second) best = {y, gap};
    }
    return best;
}

/// Long-format series export: `journal_id,year,metric,value,defined` with
/// metric in {if, rif, paper_count, citation_count}.
class SeriesCsvWriter {
  public:
    explicit SeriesCsvWriter(std::ostream& out) : out_(out) { out_ << "journal_id,year,metric,value,defined\n"; }

    void add(const std::string& journal_id, const std::string& metric, const TimeSeries& s) {
        std::set<int> years;
        for (const auto& [y, v] : s.points) years.insert(y);
        years.insert(s.undefined_years.begin(), s.undefined_years.end());
        for (int y : years) {
            auto v = s.value(y);
            out_ << journal_id << ',' << y << ',' << metric << ','
                 << (v ? format_double(*v) : "") << ',' << (v ? 1 : 0) << '\n';
        }
    }

  private:
    std::ostream& out_;
};

}  // namespace citewatch
