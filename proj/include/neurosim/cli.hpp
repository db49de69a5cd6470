/*
 * Copyright 2026 The neurosim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neurosim/experiments.hpp"
#include "neurosim/scaling_model.hpp"

namespace neurosim::cli {

/// Contents of an experiment config file. The file is INI-style: sections
/// [topology], [workload], [sweep], [model] and [output] holding key = value
/// lines; see docs/config.md for every key.
struct ExperimentConfig {
  ExperimentSpec experiment;
  std::optional<SweepParameter> sweep_parameter;
  std::vector<std::int64_t> sweep_values;
  model::ScalingParams model;
  std::string dataset_path;
  std::string trace_path;
  DatasetFormat format = DatasetFormat::kTabular;
};

/// Throws Error(kConfig) on syntax errors, unknown sections or keys, and
/// values outside their domain.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// "2..64", "2..64:2" or "1,2,4".
std::vector<std::int64_t> parse_value_list(std::string_view text);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Entry point behind the `neurosim` executable. Errors go to `err` as one
/// line, `error[<code>]: <message>`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace neurosim::cli
