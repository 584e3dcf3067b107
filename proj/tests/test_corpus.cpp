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
#include <sstream>

#include "citewatch/corpus.hpp"
#include "support/corpus_builder.hpp"

using namespace citewatch;
using citewatch::testing::CorpusBuilder;

TEST_CASE("empty input yields an empty corpus", "[corpus]") {
    std::istringstream in("");
    Corpus c = parse_corpus(in);
    CHECK(c.paper_count() == 0);
    CHECK(c.journal_count() == 0);
    CHECK(c.dangling_ref_count() == 0);
}

TEST_CASE("dangling references are dropped and counted", "[corpus]") {
    Corpus c = CorpusBuilder{}
                   .paper("A", 2000, "J1")
                   .paper("B", 2001, "J1")
                   .paper("C", 2002, "J2", {"x"}, {"A", "Z"})
                   .build();
    REQUIRE(c.paper_count() == 3);
    CHECK(c.dangling_ref_count() == 1);
    auto cp = c.find_paper("C");
    REQUIRE(cp.has_value());
    REQUIRE(c.paper(*cp).references.size() == 1);
    CHECK(c.paper(c.paper(*cp).references[0]).id == "A");
}

TEST_CASE("records outside the period are excluded and their ids unresolvable", "[corpus]") {
    Corpus c = CorpusBuilder{}
                   .paper("old", 1980, "J1")
                   .paper("New", 2000, "J1", {}, {"old"})
                   .build({1990, 2012});
    CHECK(c.paper_count() == 1);
    CHECK(c.dangling_ref_count() == 1);
}

TEST_CASE("malformed line aborts with its line number", "[corpus]") {
    CorpusBuilder b;
    b.paper("A", 2000, "J1").raw_line("{not json");
    std::istringstream in(b.jsonl());
    try {
        parse_corpus(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("duplicate paper_id aborts", "[corpus]") {
    CorpusBuilder b;
    b.paper("A", 2000, "J1").paper("A", 2001, "J2");
    std::istringstream in(b.jsonl());
    CHECK_THROWS_AS(parse_corpus(in), ParseError);
}

TEST_CASE("missing required field aborts", "[corpus]") {
    std::istringstream in(R"({"paper_id":"A","year":2000,"journal_id":"J1"})" "\n");
    CHECK_THROWS_AS(parse_corpus(in), ParseError);
}

TEST_CASE("invalid publisher value aborts", "[corpus]") {
    CorpusBuilder b;
    b.paper("A", 2000, "J1", {}, {}, "NotAPublisher");
    std::istringstream in(b.jsonl());
    CHECK_THROWS_AS(parse_corpus(in), ParseError);
}

TEST_CASE("self and duplicate references are dropped silently", "[corpus]") {
    Corpus c = CorpusBuilder{}
                   .paper("A", 2000, "J1")
                   .paper("B", 2001, "J1", {}, {"A", "A", "B"})
                   .build();
    auto bp = c.find_paper("B");
    REQUIRE(bp.has_value());
    CHECK(c.paper(*bp).references.size() == 1);
    CHECK(c.dangling_ref_count() == 0);
}

TEST_CASE("corpus stats on a constructed corpus", "[corpus]") {
    // 4 papers, 2 distinct authors each, 8 distinct authors.
    Corpus c = CorpusBuilder{}
                   .paper("P1", 2000, "J1", {"a1", "a2"})
                   .paper("P2", 2000, "J1", {"a3", "a4"})
                   .paper("P3", 2001, "J2", {"a5", "a6"})
                   .paper("P4", 2002, "J2", {"a7", "a8"})
                   .build();
    CorpusStats s = corpus_stats(c);
    CHECK(s.papers == 4);
    CHECK(s.journals == 2);
    CHECK(s.means_defined);
    CHECK(s.authors_per_paper == 2.0);
    CHECK(s.papers_per_author == 1.0);
    // Period coverage is exact: every year of the period is present.
    CHECK(s.papers_by_year.size() == static_cast<std::size_t>(kDefaultPeriod.span()));
    CHECK(s.papers_by_year.at(2000) == 2);
    CHECK(s.papers_by_year.at(1995) == 0);
}

TEST_CASE("empty corpus stats are zero with the flag cleared", "[corpus]") {
    std::istringstream in("");
    CorpusStats s = corpus_stats(parse_corpus(in));
    CHECK(s.papers == 0);
    CHECK(s.citations == 0);
    CHECK_FALSE(s.means_defined);
    CHECK(s.authors_per_paper == 0.0);
    CHECK(s.papers_per_author == 0.0);
}

namespace {

Corpus two_journal_corpus() {
    return CorpusBuilder{}
        .paper("A1", 2000, "J1", {"a"})
        .paper("A2", 2001, "J1", {"a"}, {"B1"})
        .paper("B1", 2000, "J2", {"b"})
        .paper("B2", 2001, "J2", {"b"}, {"A1", "B1"})
        .build();
}

}  // namespace

TEST_CASE("filter_journals keeping all journals is the identity", "[corpus]") {
    Corpus c = two_journal_corpus();
    Corpus f = filter_journals(c, {"J1", "J2"});
    CHECK(f.paper_count() == c.paper_count());
    CHECK(f.citation_count() == c.citation_count());
    CHECK(f.dangling_ref_count() == 0);
}

TEST_CASE("filter_journals with empty keep yields an empty corpus", "[corpus]") {
    Corpus f = filter_journals(two_journal_corpus(), {});
    CHECK(f.paper_count() == 0);
    CHECK(f.journal_count() == 0);
}

TEST_CASE("filter_journals counts severed cross-journal references as dangling", "[corpus]") {
    Corpus f = filter_journals(two_journal_corpus(), {"J1"});
    CHECK(f.paper_count() == 2);
    CHECK(f.journal_count() == 1);
    // A2 -> B1 is severed; the B2 references disappear with B2 itself.
    CHECK(f.dangling_ref_count() == 1);
    CHECK(f.citation_count() == 0);
}

TEST_CASE("filter_journals rejects unknown journal ids, listing offenders", "[corpus]") {
    Corpus c = two_journal_corpus();
    try {
        filter_journals(c, {"J1", "nope"});
        FAIL("expected UnknownJournalError");
    } catch (const UnknownJournalError& e) {
        CHECK(std::string(e.what()).find("nope") != std::string::npos);
    }
}

TEST_CASE("papers_in_window selects exactly the preceding k years", "[corpus]") {
    Corpus c = CorpusBuilder{}
                   .paper("p05", 2005, "J1")
                   .paper("p09a", 2009, "J2")
                   .paper("p09b", 2009, "J2")
                   .paper("p09c", 2009, "J2")
                   .paper("p10a", 2010, "J2")
                   .paper("p10b", 2010, "J2")
                   .paper("p06", 2006, "J2")
                   .build();

    SECTION("no papers in window") {
        CHECK(papers_in_window(c, "J1", 2010, 2).empty());
    }
    SECTION("two-year window") {
        CHECK(papers_in_window(c, "J2", 2011, 2).size() == 5);
    }
    SECTION("five-year window") {
        CHECK(papers_in_window(c, "J2", 2011, 5).size() == 6);
    }
    SECTION("current year excluded") {
        CHECK(papers_in_window(c, "J2", 2009, 2).empty());
    }
    SECTION("unknown journal throws") {
        CHECK_THROWS_AS(papers_in_window(c, "nope", 2010, 2), UnknownJournalError);
    }
}

TEST_CASE("window nesting: k-window is a subset of the k'-window for k <= k'", "[corpus]") {
    std::mt19937_64 rng(7);
    CorpusBuilder b;
    for (int i = 0; i < 60; ++i)
        b.paper("P" + std::to_string(i), 1995 + static_cast<int>(rng() % 15),
                "J" + std::to_string(rng() % 3));
    Corpus c = b.build();
    for (int y = 1996; y <= 2012; ++y) {
        for (JournalIdx j = 0; j < c.journal_count(); ++j) {
            auto small = c.papers_in_window(j, y, 2);
            auto large = c.papers_in_window(j, y, 5);
            CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
        }
    }
}

TEST_CASE("per-journal paper counts sum to the corpus total", "[corpus]") {
    Corpus c = two_journal_corpus();
    std::size_t total = 0;
    for (JournalIdx j = 0; j < c.journal_count(); ++j)
        for (int y = c.period().first; y <= c.period().last; ++y)
            total += c.yearly_paper_count(j, y);
    CHECK(total == c.paper_count());
}

TEST_CASE("serialization round-trips byte-stably", "[corpus]") {
    Corpus c = CorpusBuilder{}
                   .paper("A", 2000, "J1", {"x", "y"}, {}, "IEEE")
                   .paper("C", 2002, "J2", {"z"}, {"A", "B"})
                   .paper("B", 2001, "J1", {"x"}, {"A"})
                   .build();
    std::ostringstream first;
    write_corpus_jsonl(c, first);
    std::istringstream reparse(first.str());
    Corpus c2 = parse_corpus(reparse, c.period());
    std::ostringstream second;
    write_corpus_jsonl(c2, second);
    CHECK(first.str() == second.str());
    CHECK(c2.paper_count() == c.paper_count());
    CHECK(c2.citation_count() == c.citation_count());
    CHECK(c2.dangling_ref_count() == 0);
}

TEST_CASE("filtered stats never exceed the unfiltered corpus", "[corpus]") {
    Corpus c = two_journal_corpus();
    CorpusStats all = corpus_stats(c);
    for (const auto& keep : {std::vector<std::string>{"J1"}, {"J2"}, {"J1", "J2"}}) {
        CorpusStats f = corpus_stats(filter_journals(c, keep));
        CHECK(f.papers <= all.papers);
        CHECK(f.citations <= all.citations);
    }
}
