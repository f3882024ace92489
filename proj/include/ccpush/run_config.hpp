// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccpush/harness.hpp"

namespace ccpush {

/// Parsed and validated scenario configuration. Defaults applied during
/// parsing are listed in `applied_defaults` so the CLI can echo them.
struct RunConfig {
    TrialSpec trial;
    std::optional<SweepParameter> sweep_parameter;
    std::vector<double> sweep_grid;
    std::string output_path;
    int verbosity = 0;
    std::vector<std::string> applied_defaults;

    friend bool operator==(const RunConfig& a, const RunConfig& b);
};

/// Parses the JSON config document. Unknown keys are rejected; validation
/// errors name the offending field. See the README for the schema.
RunConfig parse_config(const std::string& json_text);

/// Emits every field explicitly; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace ccpush
