/*
 * Copyright 2026 the gridbeam authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/// \file config.hpp
/// JSON configuration for the command-line tool: cluster, tariffs, QoS,
/// explicit channels or a generative layout, solver knobs, and simulation
/// settings.  Parsing is strict (unknown keys are errors) and failures
/// carry file, line, and column.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gridbeam/duality_solver.hpp"
#include "gridbeam/model.hpp"
#include "gridbeam/scenario.hpp"

namespace gridbeam {

struct SimulationConfig {
  int blocks = 24;
  ChannelMode channel_mode = ChannelMode::FixedSet;
  InfeasiblePolicy policy = InfeasiblePolicy::Skip;
  std::vector<Scheme> schemes{Scheme::Optimal, Scheme::Zf, Scheme::ConvOptimal,
                              Scheme::ConvZf};
  std::uint64_t seed = 1;
  double renewable_scale = 1.0;  ///< synthetic series peak level [W]
};

/// Everything a CLI invocation can describe.  Exactly one of `channels`
/// and `layout` is present.
struct AppConfig {
  ClusterConfig cluster;
  EnergyInputs energy;
  QosTargets qos;
  std::optional<ChannelSet> channels;
  std::optional<LayoutSpec> layout;
  std::uint64_t channel_seed = 1;  ///< used with `layout`
  SolveOptions solver;
  SimulationConfig simulation;
};

/// Parse and fully validate; `name` labels error messages.
AppConfig parse_config_text(const std::string& text, const std::string& name);
AppConfig parse_config_file(const std::string& path);

/// Canonical JSON (2-space indent, sorted keys) that parses back to an
/// equivalent config.
std::string serialize_config(const AppConfig& config);

/// Materialize the single-block instance: explicit channels when given,
/// otherwise a draw from the layout under channel_seed.
ProblemInstance make_instance(const AppConfig& config);

/// The scenario template for timeline runs: explicit channels are pinned
/// for every block, a layout yields per-seed random draws.
ScenarioSpec make_scenario(const AppConfig& config);

}  // namespace gridbeam
