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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "citewatch/config.hpp"
#include "citewatch/core.hpp"
#include "citewatch/corpus.hpp"
#include "citewatch/metrics.hpp"
#include "citewatch/pipeline.hpp"
#include "citewatch/synth.hpp"

namespace fs = std::filesystem;
using namespace citewatch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitConfigError = 2;

YearRange parse_period(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos)
        throw ConfigError("period must be Y1:Y2, got '" + s + "'");
    try {
        return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
    } catch (const std::exception&) {
        throw ConfigError("period must be Y1:Y2, got '" + s + "'");
    }
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read input file: " + path);
    return in;
}

Corpus load_corpus_arg(const std::string& path, const RunConfig& cfg) {
    if (fs::is_directory(path)) return load_snapshot(path);
    auto in = open_input(path);
    return parse_corpus(in, cfg.period);
}

nlohmann::json stats_to_json(const CorpusStats& s, std::uint64_t dangling) {
    nlohmann::json j;
    j["papers"] = s.papers;
    j["journals"] = s.journals;
    j["citations"] = s.citations;
    j["dangling_references"] = dangling;
    j["authors_per_paper"] = s.authors_per_paper;
    j["papers_per_author"] = s.papers_per_author;
    j["means_defined"] = s.means_defined;
    auto& per_year = j["per_year"] = nlohmann::json::array();
    for (const auto& [y, papers] : s.papers_by_year)
        per_year.push_back(
            {{"year", y}, {"papers", papers}, {"citations", s.citations_by_year.at(y)}});
    return j;
}

void print_stats(const CorpusStats& s, std::uint64_t dangling, OutputFormat format,
                 std::ostream& out) {
    if (format == OutputFormat::Json) {
        out << stats_to_json(s, dangling).dump(2) << '\n';
        return;
    }
    out << "year,papers,citations\n";
    for (const auto& [y, papers] : s.papers_by_year)
        out << y << ',' << papers << ',' << s.citations_by_year.at(y) << '\n';
}

void run_series(const Corpus& corpus, const RunConfig& cfg, const std::string& journal_id,
                bool exclude_self, const std::vector<std::string>& exclude_ids,
                std::ostream& out) {
    JournalIdx j = corpus.require_journal(journal_id);
    std::vector<JournalIdx> sources;
    for (const auto& id : exclude_ids) sources.push_back(corpus.require_journal(id));
    CitationFilter filter = CitationFilter::sources(std::move(sources), exclude_self);

    auto ifs = if_series(corpus, j, corpus.period(), cfg.window, {}, cfg.cite_year_mode);
    auto rifs = if_series(corpus, j, corpus.period(), cfg.window, filter, cfg.cite_year_mode);

    if (cfg.format == OutputFormat::Json) {
        nlohmann::json doc;
        doc["journal_id"] = journal_id;
        doc["config"] = cfg.to_json();
        auto& rows = doc["points"] = nlohmann::json::array();
        for (int y = corpus.period().first; y <= corpus.period().last; ++y) {
            nlohmann::json row;
            row["year"] = y;
            row["paper_count"] = window_paper_count(corpus, j, y, cfg.window);
            auto iv = ifs.value(y);
            auto rv = rifs.value(y);
            row["if"] = iv ? nlohmann::json(*iv) : nullptr;
            row["rif"] = rv ? nlohmann::json(*rv) : nullptr;
            rows.push_back(std::move(row));
        }
        out << doc.dump(2) << '\n';
        return;
    }
    out << "year,paper_count,if,if_defined,rif,rif_defined\n";
    for (int y = corpus.period().first; y <= corpus.period().last; ++y) {
        auto iv = ifs.value(y);
        auto rv = rifs.value(y);
        out << y << ',' << window_paper_count(corpus, j, y, cfg.window) << ','
            << (iv ? format_double(*iv) : "") << ',' << (iv ? 1 : 0) << ','
            << (rv ? format_double(*rv) : "") << ',' << (rv ? 1 : 0) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"citewatch: anomalous citation pattern detection over journal corpora"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string period_arg = "1990:2012";
    std::string cite_mode = "current";
    std::string format = "json";
    app.add_option("--period", period_arg, "Analysis period Y1:Y2")->capture_default_str();
    app.add_option("--window", cfg.window, "Impact factor window (2 or 5)")
        ->check(CLI::IsMember({2, 5}))
        ->capture_default_str();
    app.add_option("--in-threshold", cfg.in_threshold, "Vertex threshold, incoming view")
        ->capture_default_str();
    app.add_option("--out-threshold", cfg.out_threshold, "Vertex threshold, outgoing view")
        ->capture_default_str();
    app.add_option("--self-loop-ratio", cfg.self_loop_ratio,
                   "Excessive self-citation share threshold")
        ->capture_default_str();
    app.add_option("--bucket-high", cfg.bucket_high, "High bucket lower bound")
        ->capture_default_str();
    app.add_option("--bucket-med", cfg.bucket_med, "Medium bucket lower bound")
        ->capture_default_str();
    app.add_option("--peak-ratio", cfg.peak_ratio, "Sudden-peak year-over-year ratio")
        ->capture_default_str();
    app.add_option("--peak-min-abs", cfg.peak_min_abs, "Sudden-peak absolute floor")
        ->capture_default_str();
    app.add_option("--surge-factor", cfg.surge_factor, "Paper count surge factor")
        ->capture_default_str();
    app.add_option("--cartel-min-donors", cfg.cartel_min_donors, "Minimum cartel donors")
        ->capture_default_str();
    app.add_option("--cartel-back-max", cfg.cartel_back_max,
                   "Maximum raw back-citations a cartel target may give a donor")
        ->capture_default_str();
    app.add_option("--cite-year-mode", cite_mode, "Citation dating: current|window")
        ->check(CLI::IsMember({"current", "window"}))
        ->capture_default_str();
    app.add_option("--format", format, "Output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    auto* seed_opt =
        app.add_option("--seed", cfg.seed, "Generator seed (synth)")->capture_default_str();

    // ingest
    std::string ingest_input, ingest_out;
    auto* ingest = app.add_subcommand("ingest", "Parse a corpus file into a snapshot");
    ingest->add_option("input", ingest_input, "Corpus file (JSON lines)")->required();
    ingest->add_option("-o,--out", ingest_out, "Snapshot directory")->required();

    // stats
    std::string stats_input;
    auto* stats = app.add_subcommand("stats", "Corpus statistics");
    stats->add_option("input", stats_input, "Corpus file or snapshot directory")->required();

    // analyze
    std::string analyze_snapshot, analyze_out;
    auto* analyze = app.add_subcommand("analyze", "Run the full anomaly analysis");
    analyze->add_option("-s,--snapshot", analyze_snapshot, "Snapshot directory")->required();
    analyze->add_option("-o,--out", analyze_out, "Report output directory")->required();

    // series
    std::string series_snapshot, series_journal, series_out;
    bool series_exclude_self = false;
    std::vector<std::string> series_exclude;
    auto* series = app.add_subcommand("series", "IF/RIF time series for one journal");
    series->add_option("-s,--snapshot", series_snapshot, "Snapshot directory")->required();
    series->add_option("-j,--journal", series_journal, "Journal id")->required();
    series->add_flag("--exclude-self", series_exclude_self, "Remove self-citations from RIF");
    series->add_option("--exclude", series_exclude, "Journal id removed from RIF numerator");
    series->add_option("-o,--out", series_out, "Output file (default stdout)");

    // synth
    std::string synth_manifest, synth_out, synth_echo;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted anomalies");
    synth->add_option("manifest", synth_manifest, "Plant manifest (JSON)")->required();
    synth->add_option("-o,--out", synth_out, "Corpus output file")->required();
    synth->add_option("--echo", synth_echo, "Manifest echo output file (default <out>.manifest.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        cfg.period = parse_period(period_arg);
        cfg.cite_year_mode = cite_mode == "window" ? CiteYearMode::Window : CiteYearMode::Current;
        cfg.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
        cfg.validate();

        if (*ingest) {
            auto in = open_input(ingest_input);
            Corpus corpus = parse_corpus(in, cfg.period);
            save_snapshot(corpus, ingest_out);
            print_stats(corpus_stats(corpus), corpus.dangling_ref_count(), cfg.format, std::cout);
        } else if (*stats) {
            Corpus corpus = load_corpus_arg(stats_input, cfg);
            print_stats(corpus_stats(corpus), corpus.dangling_ref_count(), cfg.format, std::cout);
        } else if (*analyze) {
            Corpus corpus = load_snapshot(analyze_snapshot);
            AnalysisResult result = run_analysis(corpus, cfg);
            write_report_bundle(result, corpus, cfg, analyze_out);
            std::cout << census_to_json(result.patterns.census).dump(2) << '\n';
        } else if (*series) {
            Corpus corpus = load_snapshot(series_snapshot);
            if (series_out.empty()) {
                run_series(corpus, cfg, series_journal, series_exclude_self, series_exclude,
                           std::cout);
            } else {
                std::ofstream out(series_out);
                if (!out) throw std::runtime_error("cannot write " + series_out);
                run_series(corpus, cfg, series_journal, series_exclude_self, series_exclude, out);
            }
        } else if (*synth) {
            auto manifest_in = open_input(synth_manifest);
            nlohmann::json mj = nlohmann::json::parse(manifest_in, nullptr, false);
            if (mj.is_discarded()) throw std::runtime_error("malformed manifest JSON");
            PlantManifest manifest = manifest_from_json(mj);
            if (seed_opt->count() > 0) manifest.seed = cfg.seed;
            std::ofstream out(synth_out);
            if (!out) throw std::runtime_error("cannot write " + synth_out);
            nlohmann::json echo = generate_synthetic_corpus(manifest, out);
            std::string echo_path = synth_echo.empty() ? synth_out + ".manifest.json" : synth_echo;
            std::ofstream echo_out(echo_path);
            if (!echo_out) throw std::runtime_error("cannot write " + echo_path);
            echo_out << echo.dump(2) << '\n';
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitOk;
}
