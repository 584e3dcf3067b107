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

#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace citewatch {

using PaperIdx = std::uint32_t;
using JournalIdx = std::uint32_t;
using AuthorIdx = std::uint32_t;

/// Inclusive calendar-year interval.
struct YearRange {
    int first = 0;
    int last = 0;

    bool contains(int y) const { return y >= first && y <= last; }
    int span() const { return last >= first ? last - first + 1 : 0; }

    friend bool operator==(const YearRange&, const YearRange&) = default;
};

/// Default analysis period used throughout the pipeline.
inline constexpr YearRange kDefaultPeriod{1990, 2012};

enum class Direction { In, Out };

/// Publication houses recognized in the corpus schema.  Unknown marks
/// journals that carry no publisher tag.
enum class Publisher : std::uint8_t {
    Unknown = 0,
    ACM,
    Elsevier,
    IEEE,
    Springer,
    Wiley,
    OxfordPress,
    Other,
};

inline constexpr std::array<Publisher, 8> kAllPublishers = {
    Publisher::Unknown,  Publisher::ACM,   Publisher::Elsevier,
    Publisher::IEEE,     Publisher::Springer, Publisher::Wiley,
    Publisher::OxfordPress, Publisher::Other,
};

inline std::string_view publisher_name(Publisher p) {
    switch (p) {
        case Publisher::ACM: return "ACM";
        case Publisher::Elsevier: return "Elsevier";
        case Publisher::IEEE: return "IEEE";
        case Publisher::Springer: return "Springer";
        case Publisher::Wiley: return "Wiley";
        case Publisher::OxfordPress: return "OxfordPress";
        case Publisher::Other: return "Other";
        case Publisher::Unknown: break;
    }
    return "Unknown";
}

inline std::optional<Publisher> publisher_from_name(std::string_view s) {
    for (Publisher p : kAllPublishers) {
        if (publisher_name(p) == s) return p;
    }
    return std::nullopt;
}

/// Malformed or inconsistent input; carries the 1-based line number of the
/// offending record where applicable (0 when not line-specific).
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& msg)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

class UnknownJournalError : public std::runtime_error {
  public:
    explicit UnknownJournalError(std::string_view id)
        : std::runtime_error("unknown journal: " + std::string(id)) {}
};

/// Invalid threshold or option value.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Shortest round-trip decimal form; keeps emitted reports byte-stable.
inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

}  // namespace citewatch
