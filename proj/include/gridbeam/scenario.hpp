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

/// \file scenario.hpp
/// Batch simulation over a timeline of scheduling blocks: cluster
/// geometry, random channel draws, renewable-energy series (CSV or
/// synthetic), the per-block solve loop, and CSV reporting.  Everything
/// is deterministic under a fixed seed, byte-identical output included.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridbeam/duality_solver.hpp"
#include "gridbeam/model.hpp"

#include <Eigen/Dense>

namespace gridbeam {

enum class Scheme { Optimal, Zf, ConvOptimal, ConvZf };

const char* to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

/// Planar cluster geometry and the distance-based channel statistics.
///
/// Base stations sit on a regular polygon with the given spacing between
/// adjacent sites; terminals are placed uniformly over a disc covering
/// the cluster, never closer than min_link_distance_m to any site.  The
/// average power gain at distance d km is
/// -(pathloss_offset_db + 10 * pathloss_exponent * log10(d)) dB,
/// with independent complex-normal fading per antenna on top.
struct LayoutSpec {
  double inter_bs_distance_m = 1000.0;
  double min_link_distance_m = 10.0;
  double pathloss_exponent = 3.76;
  double pathloss_offset_db = 128.1;

  void validate() const;
};

/// Sites of a regular polygon, centroid at the origin.
std::vector<std::array<double, 2>> bs_positions(const LayoutSpec& layout,
                                                int n_bs);

/// Linear average power gain of a link of the given length.
double pathloss_gain(const LayoutSpec& layout, double distance_m);

/// One random channel draw: terminal positions, distance-based gains,
/// and complex-normal fading, all from the given seed.
ChannelSet generate_channels(const LayoutSpec& layout,
                             const ClusterConfig& cluster, std::uint64_t seed);

/// Harvest per block and base station [W].
struct RenewableSeries {
  Eigen::MatrixXd energy;  ///< n_blocks x n_bs, nonnegative

  int n_blocks() const { return static_cast<int>(energy.rows()); }
  int n_bs() const { return static_cast<int>(energy.cols()); }
};

/// Read a series from CSV with header `block,bs_id,energy` and rows in
/// (block, bs_id) order, blocks and BS ids each contiguous from zero.
/// Throws std::runtime_error naming the offending line on any violation.
RenewableSeries load_renewable_csv(const std::string& path);
RenewableSeries load_renewable_csv(std::istream& in, const std::string& name);

/// Inverse of the loader; the loader accepts its exact output.
void write_renewable_csv(const RenewableSeries& series, std::ostream& out);

/// Synthetic harvests over one day: a half-sine solar arc over the middle
/// of the horizon plus a mean-reverting, clamped-positive wind process.
/// Site i is solar, wind, or mixed according to i mod 3.  `scale` sets
/// the peak per-site level in watts.
RenewableSeries synthetic_renewables(int n_bs, int n_blocks,
                                     std::uint64_t seed, double scale);

enum class ChannelMode {
  PerBlock,  ///< fresh fading every block
  FixedSet,  ///< one draw shared by all blocks
};

enum class InfeasiblePolicy {
  Skip,    ///< drop blocks any requested scheme cannot serve
  Error,   ///< throw on the first such block
  Record,  ///< keep the block, mark the failing schemes
};

const char* to_string(ChannelMode mode);
const char* to_string(InfeasiblePolicy policy);
ChannelMode channel_mode_from_string(const std::string& name);
InfeasiblePolicy infeasible_policy_from_string(const std::string& name);

/// Instance template for a timeline; per-block harvests come from the
/// renewable series and channels either from explicit pinned coefficients
/// or from random draws over the layout.
struct ScenarioSpec {
  ClusterConfig cluster;
  EnergyInputs energy;  ///< harvest entries are overwritten per block
  QosTargets qos;
  LayoutSpec layout;

  /// When set, every block uses exactly these channels and the layout
  /// and channel mode are moot.
  std::optional<ChannelSet> channels;
};

struct TimelineOptions {
  std::vector<Scheme> schemes{Scheme::Optimal, Scheme::Zf, Scheme::ConvOptimal,
                              Scheme::ConvZf};
  ChannelMode channel_mode = ChannelMode::FixedSet;
  InfeasiblePolicy policy = InfeasiblePolicy::Skip;
  std::uint64_t seed = 1;
  SolveOptions solve;
};

struct BlockResult {
  int block = 0;
  Scheme scheme = Scheme::Optimal;
  bool solved = false;  ///< converged solve; numeric fields valid
  SolveStatus status = SolveStatus::NotConverged;
  Eigen::VectorXd tx_power;     ///< per BS
  Eigen::VectorXd consumption;  ///< per BS
  Eigen::VectorXd buy;          ///< per BS
  Eigen::VectorXd sell;         ///< per BS
  double cost = 0.0;
  std::string detail;
};

struct TimelineReport {
  std::vector<BlockResult> rows;  ///< ordered by block, then requested scheme

  /// Mean cost per scheme over the blocks every requested scheme solved,
  /// so the numbers are directly comparable.
  std::map<Scheme, double> mean_cost;
  std::map<Scheme, long> blocks_solved;  ///< per-scheme solved count
  long comparable_blocks = 0;  ///< blocks in the mean-cost set
  std::vector<int> dropped_blocks;  ///< skipped under InfeasiblePolicy::Skip
};

/// Solve every requested scheme on every block.  Feasibility is checked
/// once per channel draw (not per scheme) and solver prechecks are
/// skipped accordingly.
TimelineReport run_timeline(const ScenarioSpec& spec,
                            const RenewableSeries& renewables,
                            const TimelineOptions& options);

/// Per-BS rows: `block,scheme,bs_id,tx_power,consumption,buy,sell`.
/// Unsolved rows carry `nan` in the numeric columns.
void write_report_csv(const TimelineReport& report, std::ostream& out);

/// One row per scheme: `scheme,mean_cost,blocks_feasible`.
void write_summary_csv(const TimelineReport& report, std::ostream& out);

/// Stable seed derivation for per-block randomness.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace gridbeam
