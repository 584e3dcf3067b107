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

#include <cstdint>
#include <string>

#include <json.hpp>

#include "citewatch/core.hpp"
#include "citewatch/metrics.hpp"
#include "citewatch/patterns.hpp"

namespace citewatch {

enum class OutputFormat { Json, Csv };

/// Every knob a run depends on.  Serialized into each emitted report so a
/// result can be reproduced from the report alone.
struct RunConfig {
    YearRange period = kDefaultPeriod;
    int window = 2;  // 2 or 5
    int in_threshold = 110;
    int out_threshold = 109;
    double self_loop_ratio = 0.55;
    double bucket_high = 1200.0;
    double bucket_med = 450.0;
    double peak_ratio = 1.5;
    double peak_min_abs = 0.5;
    double surge_factor = 2.0;
    int cartel_min_donors = 2;
    std::uint64_t cartel_back_max = 0;
    CiteYearMode cite_year_mode = CiteYearMode::Current;
    OutputFormat format = OutputFormat::Json;
    std::uint64_t seed = 0;

    void validate() const {
        if (period.first > period.last) throw ConfigError("period start exceeds end");
        if (window != 2 && window != 5) throw ConfigError("window must be 2 or 5");
        if (in_threshold <= 0 || out_threshold <= 0)
            throw ConfigError("vertex thresholds must be positive");
        if (!(self_loop_ratio > 0.0 && self_loop_ratio < 1.0))
            throw ConfigError("self-loop ratio must be in (0, 1)");
        if (!(bucket_high > bucket_med && bucket_med > 0))
            throw ConfigError("bucket bounds must satisfy high > med > 0");
        if (peak_ratio <= 1.0) throw ConfigError("peak ratio must be > 1");
        if (peak_min_abs < 0.0) throw ConfigError("peak floor must be >= 0");
        if (surge_factor <= 1.0) throw ConfigError("surge factor must be > 1");
        if (cartel_min_donors < 2) throw ConfigError("cartel requires at least 2 donors");
    }

    PatternConfig pattern_config() const {
        return {self_loop_ratio, bucket_high, bucket_med, 2, 4, cartel_min_donors,
                cartel_back_max};
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["period"] = {{"first", period.first}, {"last", period.last}};
        j["window"] = window;
        j["in_threshold"] = in_threshold;
        j["out_threshold"] = out_threshold;
        j["self_loop_ratio"] = self_loop_ratio;
        j["bucket_high"] = bucket_high;
        j["bucket_med"] = bucket_med;
        j["peak_ratio"] = peak_ratio;
        j["peak_min_abs"] = peak_min_abs;
        j["surge_factor"] = surge_factor;
        j["cartel_min_donors"] = cartel_min_donors;
        j["cartel_back_max"] = cartel_back_max;
        j["cite_year_mode"] = cite_year_mode == CiteYearMode::Current ? "current" : "window";
        j["format"] = format == OutputFormat::Json ? "json" : "csv";
        j["seed"] = seed;
        return j;
    }
};

}  // namespace citewatch
