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
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "citewatch/core.hpp"

namespace citewatch {

/// One parsed input record, prior to interning.  The canonical corpus format
/// is UTF-8 JSON lines with keys: paper_id, year, journal_id, journal_name,
/// author_ids, references, and optionally publisher.  Unknown keys ignored.
struct PaperRecord {
    std::string paper_id;
    int year = 0;
    std::string journal_id;
    std::string journal_name;
    std::optional<Publisher> publisher;
    std::vector<std::string> author_ids;
    std::vector<std::string> references;
};

/// Immutable, fully indexed bibliographic corpus.  All ids are interned to
/// dense indices at parse time; the original strings remain addressable.
/// Safe for concurrent reads once built.
class Corpus {
  public:
    struct Paper {
        std::string id;
        int year = 0;
        JournalIdx journal = 0;
        std::vector<AuthorIdx> authors;     // input order, deduplicated
        std::vector<PaperIdx> references;   // resolved, deduplicated, no self-reference
    };

    struct Journal {
        std::string id;
        std::string name;
        Publisher publisher = Publisher::Unknown;
        int first_pub_year = 0;            // min year over the journal's papers
    };

    Corpus() = default;

    std::size_t paper_count() const { return papers_.size(); }
    std::size_t journal_count() const { return journals_.size(); }
    std::size_t author_count() const { return authors_.size(); }
    std::uint64_t citation_count() const { return citation_count_; }
    std::uint64_t dangling_ref_count() const { return dangling_refs_; }
    const YearRange& period() const { return period_; }

    const Paper& paper(PaperIdx p) const { return papers_[p]; }
    const Journal& journal(JournalIdx j) const { return journals_[j]; }
    const std::string& author_id(AuthorIdx a) const { return authors_[a]; }

    const std::vector<Paper>& papers() const { return papers_; }
    const std::vector<Journal>& journals() const { return journals_; }

    std::optional<PaperIdx> find_paper(std::string_view id) const {
        auto it = paper_index_.find(std::string(id));
        if (it == paper_index_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<JournalIdx> find_journal(std::string_view id) const {
        auto it = journal_index_.find(std::string(id));
        if (it == journal_index_.end()) return std::nullopt;
        return it->second;
    }

    JournalIdx require_journal(std::string_view id) const {
        auto j = find_journal(id);
        if (!j) throw UnknownJournalError(id);
        return *j;
    }

    std::optional<AuthorIdx> find_author(std::string_view id) const {
        auto it = author_index_.find(std::string(id));
        if (it == author_index_.end()) return std::nullopt;
        return it->second;
    }

    /// Papers that cite `p`, ascending by index.
    std::span<const PaperIdx> citing_papers(PaperIdx p) const {
        return cited_by_[p];
    }

    /// Papers of journal `j` published in calendar year `y` (ascending).
    std::span<const PaperIdx> papers_of(JournalIdx j, int y) const {
        const auto& by_year = by_journal_year_[j];
        auto it = by_year.find(y);
        if (it == by_year.end()) return {};
        return it->second;
    }

    /// Yearly publication count of journal `j`.
    std::size_t yearly_paper_count(JournalIdx j, int y) const {
        return papers_of(j, y).size();
    }

    /// Papers of journal `j` published in [y-k, y-1], ascending by index.
    std::vector<PaperIdx> papers_in_window(JournalIdx j, int y, int k) const {
        if (k < 1) throw ConfigError("window length must be >= 1");
        std::vector<PaperIdx> out;
        for (int yy = y - k; yy <= y - 1; ++yy) {
            auto span = papers_of(j, yy);
            out.insert(out.end(), span.begin(), span.end());
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Construction entry point used by the parser and filter operations.
    static Corpus from_records(std::vector<PaperRecord> records, YearRange period) {
        Corpus c;
        c.period_ = period;
        c.build(std::move(records));
        return c;
    }

  private:
    void build(std::vector<PaperRecord> records) {
        papers_.reserve(records.size());
        for (auto& r : records) {
            Paper p;
            p.id = r.paper_id;
            p.year = r.year;
            p.journal = intern_journal(r);
            p.authors.reserve(r.author_ids.size());
            for (const auto& a : r.author_ids) {
                AuthorIdx ai = intern_author(a);
                if (std::find(p.authors.begin(), p.authors.end(), ai) == p.authors.end())
                    p.authors.push_back(ai);
            }
            paper_index_.emplace(p.id, static_cast<PaperIdx>(papers_.size()));
            papers_.push_back(std::move(p));
        }

        // Resolve references now that every retained paper is indexed.
        // Unresolvable targets are dropped and counted, never fatal.
        for (std::size_t i = 0; i < records.size(); ++i) {
            auto& refs = papers_[i].references;
            refs.reserve(records[i].references.size());
            std::unordered_set<PaperIdx> seen;
            for (const auto& rid : records[i].references) {
                if (rid == papers_[i].id) continue;  // self-reference, invalid by schema
                auto it = paper_index_.find(rid);
                if (it == paper_index_.end()) {
                    ++dangling_refs_;
                    continue;
                }
                if (seen.insert(it->second).second) refs.push_back(it->second);
            }
            citation_count_ += refs.size();
        }

        by_journal_year_.assign(journals_.size(), {});
        cited_by_.assign(papers_.size(), {});
        for (PaperIdx p = 0; p < papers_.size(); ++p) {
            by_journal_year_[papers_[p].journal][papers_[p].year].push_back(p);
            for (PaperIdx q : papers_[p].references) cited_by_[q].push_back(p);
        }
        for (auto& j : journals_) j.first_pub_year = 0;
        for (JournalIdx j = 0; j < journals_.size(); ++j) {
            if (!by_journal_year_[j].empty())
                journals_[j].first_pub_year = by_journal_year_[j].begin()->first;
        }
    }

    JournalIdx intern_journal(const PaperRecord& r) {
        auto [it, added] = journal_index_.emplace(
            r.journal_id, static_cast<JournalIdx>(journals_.size()));
        if (added) {
            Journal j;
            j.id = r.journal_id;
            j.name = r.journal_name;
            j.publisher = r.publisher.value_or(Publisher::Unknown);
            journals_.push_back(std::move(j));
        } else if (journals_[it->second].publisher == Publisher::Unknown && r.publisher) {
            journals_[it->second].publisher = *r.publisher;
        }
        return it->second;
    }

    AuthorIdx intern_author(const std::string& id) {
        auto [it, added] =
            author_index_.emplace(id, static_cast<AuthorIdx>(authors_.size()));
        if (added) authors_.push_back(id);
        return it->second;
    }

    YearRange period_ = kDefaultPeriod;
    std::vector<Paper> papers_;
    std::vector<Journal> journals_;
    std::vector<std::string> authors_;
    std::unordered_map<std::string, PaperIdx> paper_index_;
    std::unordered_map<std::string, JournalIdx> journal_index_;
    std::unordered_map<std::string, AuthorIdx> author_index_;
    std::vector<std::map<int, std::vector<PaperIdx>>> by_journal_year_;
    std::vector<std::vector<PaperIdx>> cited_by_;
    std::uint64_t citation_count_ = 0;
    std::uint64_t dangling_refs_ = 0;
};

namespace detail {

inline PaperRecord record_from_json(const nlohmann::json& j, std::size_t line) {
    if (!j.is_object()) throw ParseError(line, "record is not a JSON object");

    auto require = [&](const char* key) -> const nlohmann::json& {
        auto it = j.find(key);
        if (it == j.end())
            throw ParseError(line, std::string("missing required field '") + key + "'");
        return *it;
    };
    auto require_string = [&](const char* key) {
        const auto& v = require(key);
        if (!v.is_string() || v.get<std::string>().empty())
            throw ParseError(line, std::string("field '") + key + "' must be a non-empty string");
        return v.get<std::string>();
    };

    PaperRecord r;
    r.paper_id = require_string("paper_id");
    const auto& year = require("year");
    if (!year.is_number_integer())
        throw ParseError(line, "field 'year' must be an integer");
    r.year = year.get<int>();
    r.journal_id = require_string("journal_id");
    r.journal_name = require_string("journal_name");

    const auto& authors = require("author_ids");
    if (!authors.is_array())
        throw ParseError(line, "field 'author_ids' must be an array of strings");
    for (const auto& a : authors) {
        if (!a.is_string())
            throw ParseError(line, "field 'author_ids' must be an array of strings");
        r.author_ids.push_back(a.get<std::string>());
    }

    const auto& refs = require("references");
    if (!refs.is_array())
        throw ParseError(line, "field 'references' must be an array of strings");
    for (const auto& ref : refs) {
        if (!ref.is_string())
            throw ParseError(line, "field 'references' must be an array of strings");
        r.references.push_back(ref.get<std::string>());
    }

    if (auto it = j.find("publisher"); it != j.end() && !it->is_null()) {
        if (!it->is_string())
            throw ParseError(line, "field 'publisher' must be a string");
        auto p = publisher_from_name(it->get<std::string>());
        if (!p)
            throw ParseError(line, "field 'publisher' has unrecognized value '" +
                                       it->get<std::string>() + "'");
        r.publisher = *p;
    }
    return r;
}

inline bool blank_line(std::string_view s) {
    return s.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace detail

/// Parses the canonical line-delimited corpus format.  Keeps exactly the
/// records whose year falls inside `period`; malformed lines, duplicate
/// paper ids and missing fields abort with the offending line number.
inline Corpus parse_corpus(std::istream& in, YearRange period = kDefaultPeriod) {
    std::vector<PaperRecord> kept;
    std::unordered_set<std::string> all_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::blank_line(line)) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) throw ParseError(line_no, "malformed JSON record");
        PaperRecord r = detail::record_from_json(j, line_no);
        if (!all_ids.insert(r.paper_id).second)
            throw ParseError(line_no, "duplicate paper_id '" + r.paper_id + "'");
        if (!period.contains(r.year)) continue;
        kept.push_back(std::move(r));
    }
    return Corpus::from_records(std::move(kept), period);
}

/// Canonical serialization: one JSON object per line, keys sorted, papers
/// ordered by paper_id.  parse_corpus on this output reproduces the corpus.
inline void write_corpus_jsonl(const Corpus& corpus, std::ostream& out) {
    std::vector<PaperIdx> order(corpus.paper_count());
    for (PaperIdx i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](PaperIdx a, PaperIdx b) {
        return corpus.paper(a).id < corpus.paper(b).id;
    });
    for (PaperIdx p : order) {
        const auto& paper = corpus.paper(p);
        const auto& journal = corpus.journal(paper.journal);
        nlohmann::json j;
        j["paper_id"] = paper.id;
        j["year"] = paper.year;
        j["journal_id"] = journal.id;
        j["journal_name"] = journal.name;
        if (journal.publisher != Publisher::Unknown)
            j["publisher"] = publisher_name(journal.publisher);
        auto& authors = j["author_ids"] = nlohmann::json::array();
        for (AuthorIdx a : paper.authors) authors.push_back(corpus.author_id(a));
        auto& refs = j["references"] = nlohmann::json::array();
        for (PaperIdx q : paper.references) refs.push_back(corpus.paper(q).id);
        out << j.dump() << '\n';
    }
}

/// Aggregate counts for reporting; per-year series cover the corpus period
/// exactly, with zeros for inactive years.
struct CorpusStats {
    std::uint64_t papers = 0;
    std::uint64_t journals = 0;
    std::uint64_t citations = 0;
    double authors_per_paper = 0.0;
    double papers_per_author = 0.0;
    bool means_defined = false;  // false when the corpus has no papers/authors
    std::map<int, std::uint64_t> papers_by_year;
    std::map<int, std::uint64_t> citations_by_year;  // dated by citing paper's year
};

inline CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats s;
    s.papers = corpus.paper_count();
    s.journals = corpus.journal_count();
    s.citations = corpus.citation_count();
    for (int y = corpus.period().first; y <= corpus.period().last; ++y) {
        s.papers_by_year[y] = 0;
        s.citations_by_year[y] = 0;
    }
    std::uint64_t authorships = 0;
    for (const auto& p : corpus.papers()) {
        authorships += p.authors.size();
        s.papers_by_year[p.year] += 1;
        s.citations_by_year[p.year] += p.references.size();
    }
    if (s.papers > 0 && corpus.author_count() > 0) {
        s.means_defined = true;
        s.authors_per_paper = static_cast<double>(authorships) / static_cast<double>(s.papers);
        s.papers_per_author =
            static_cast<double>(authorships) / static_cast<double>(corpus.author_count());
    }
    return s;
}

/// Keeps only the papers of `keep` journals; references crossing out of the
/// kept set are dropped and counted as dangling in the result.
inline Corpus filter_journals(const Corpus& corpus, const std::vector<std::string>& keep) {
    std::vector<bool> kept(corpus.journal_count(), false);
    std::string offenders;
    for (const auto& id : keep) {
        auto j = corpus.find_journal(id);
        if (!j) {
            if (!offenders.empty()) offenders += ", ";
            offenders += id;
            continue;
        }
        kept[*j] = true;
    }
    if (!offenders.empty())
        throw UnknownJournalError(offenders);

    std::vector<PaperRecord> records;
    for (const auto& p : corpus.papers()) {
        if (!kept[p.journal]) continue;
        const auto& journal = corpus.journal(p.journal);
        PaperRecord r;
        r.paper_id = p.id;
        r.year = p.year;
        r.journal_id = journal.id;
        r.journal_name = journal.name;
        if (journal.publisher != Publisher::Unknown) r.publisher = journal.publisher;
        for (AuthorIdx a : p.authors) r.author_ids.push_back(corpus.author_id(a));
        for (PaperIdx q : p.references) r.references.push_back(corpus.paper(q).id);
        records.push_back(std::move(r));
    }
    return Corpus::from_records(std::move(records), corpus.period());
}

/// Spec surface: window lookup by journal id string.
inline std::vector<PaperIdx> papers_in_window(const Corpus& corpus, std::string_view journal_id,
                                              int y, int k) {
    return corpus.papers_in_window(corpus.require_journal(journal_id), y, k);
}

}  // namespace citewatch
