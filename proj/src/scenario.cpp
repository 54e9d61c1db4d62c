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

#include "gridbeam/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "gridbeam/baselines.hpp"
#include "gridbeam/feasibility.hpp"
#include "gridbeam/zf_solver.hpp"

namespace gridbeam {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error(what);
}

/// Fixed-width float formatting so identical runs emit identical bytes.
std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

double draw_standard_normal(std::mt19937_64& rng) {
  // Explicit Box-Muller keeps the byte stream independent of the
  // standard library's normal_distribution implementation.
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double u = 0.0;
  do {
    u = uniform(rng);
  } while (u <= 0.0);
  const double v = uniform(rng);
  return std::sqrt(-2.0 * std::log(u)) *
         std::cos(2.0 * std::numbers::pi * v);
}

}  // namespace

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Optimal: return "optimal";
    case Scheme::Zf: return "zf";
    case Scheme::ConvOptimal: return "conv-optimal";
    case Scheme::ConvZf: return "conv-zf";
  }
  return "unknown";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "optimal") return Scheme::Optimal;
  if (name == "zf") return Scheme::Zf;
  if (name == "conv-optimal") return Scheme::ConvOptimal;
  if (name == "conv-zf") return Scheme::ConvZf;
  throw std::invalid_argument("unknown scheme '" + name +
                              "' (expected optimal|zf|conv-optimal|conv-zf)");
}

const char* to_string(ChannelMode mode) {
  return mode == ChannelMode::PerBlock ? "per-block" : "fixed-set";
}

const char* to_string(InfeasiblePolicy policy) {
  switch (policy) {
    case InfeasiblePolicy::Skip: return "skip";
    case InfeasiblePolicy::Error: return "error";
    case InfeasiblePolicy::Record: return "record-infeasible";
  }
  return "unknown";
}

ChannelMode channel_mode_from_string(const std::string& name) {
  if (name == "per-block") return ChannelMode::PerBlock;
  if (name == "fixed-set") return ChannelMode::FixedSet;
  throw std::invalid_argument("unknown channel mode '" + name +
                              "' (expected per-block|fixed-set)");
}

InfeasiblePolicy infeasible_policy_from_string(const std::string& name) {
  if (name == "skip") return InfeasiblePolicy::Skip;
  if (name == "error") return InfeasiblePolicy::Error;
  if (name == "record-infeasible") return InfeasiblePolicy::Record;
  throw std::invalid_argument(
      "unknown infeasible policy '" + name +
      "' (expected skip|error|record-infeasible)");
}

void LayoutSpec::validate() const {
  if (!(inter_bs_distance_m > 0.0)) fail("LayoutSpec: inter_bs_distance_m must be positive");
  if (!(min_link_distance_m > 0.0)) fail("LayoutSpec: min_link_distance_m must be positive");
  if (!(pathloss_exponent > 0.0)) fail("LayoutSpec: pathloss_exponent must be positive");
  if (!std::isfinite(pathloss_offset_db)) fail("LayoutSpec: pathloss_offset_db must be finite");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::array<double, 2>> bs_positions(const LayoutSpec& layout,
                                                int n_bs) {
  layout.validate();
  if (n_bs < 1) fail("bs_positions: n_bs must be >= 1");
  std::vector<std::array<double, 2>> sites(n_bs);
  if (n_bs == 1) {
    sites[0] = {0.0, 0.0};
    return sites;
  }
  // Circumradius putting adjacent polygon vertices the requested
  // distance apart.
  const double radius =
      layout.inter_bs_distance_m / (2.0 * std::sin(std::numbers::pi / n_bs));
  for (int i = 0; i < n_bs; ++i) {
    const double angle =
        std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * i / n_bs;
    sites[i] = {radius * std::cos(angle), radius * std::sin(angle)};
  }
  return sites;
}

double pathloss_gain(const LayoutSpec& layout, double distance_m) {
  const double d =
      std::max(distance_m, layout.min_link_distance_m) / 1000.0;  // km
  const double loss_db =
      layout.pathloss_offset_db + 10.0 * layout.pathloss_exponent * std::log10(d);
  return std::pow(10.0, -loss_db / 10.0);
}

ChannelSet generate_channels(const LayoutSpec& layout,
                             const ClusterConfig& cluster,
                             std::uint64_t seed) {
  layout.validate();
  cluster.validate();
  const auto sites = bs_positions(layout, cluster.n_bs);

  // Terminals fall uniformly on the disc through the BS ring, so every
  // terminal sits inside the cluster the sites jointly serve.
  double area_radius = 0.0;
  for (const auto& s : sites) {
    area_radius = std::max(area_radius, std::hypot(s[0], s[1]));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  ChannelSet channels;
  channels.n_ant = cluster.n_ant;
  channels.h.resize(cluster.stacked_dim(), cluster.n_mt);
  for (int k = 0; k < cluster.n_mt; ++k) {
    const double r = area_radius * std::sqrt(uniform(rng));
    const double phi = 2.0 * std::numbers::pi * uniform(rng);
    const double x = r * std::cos(phi);
    const double y = r * std::sin(phi);
    for (int i = 0; i < cluster.n_bs; ++i) {
      const double dist = std::hypot(x - sites[i][0], y - sites[i][1]);
      const double amp = std::sqrt(pathloss_gain(layout, dist) / 2.0);
      for (int a = 0; a < cluster.n_ant; ++a) {
        const double re = draw_standard_normal(rng);
        const double im = draw_standard_normal(rng);
        channels.h(i * cluster.n_ant + a, k) = Complex(amp * re, amp * im);
      }
    }
  }
  return channels;
}

RenewableSeries load_renewable_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open renewable CSV '" + path + "'");
  return load_renewable_csv(in, path);
}

RenewableSeries load_renewable_csv(std::istream& in, const std::string& name) {
  const auto at = [&](long line) {
    std::ostringstream oss;
    oss << name << ":" << line;
    return oss.str();
  };

  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) fail(at(1) + ": empty file, expected header");
  ++line_no;
  // Tolerate a UTF-8 BOM and trailing CR from foreign tools.
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "block,bs_id,energy") {
    fail(at(line_no) + ": header must be 'block,bs_id,energy', got '" + line + "'");
  }

  struct Row {
    long block;
    long bs;
    double energy;
  };
  std::vector<Row> rows;
  long max_block = -1, max_bs = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    Row row{};
    char c1 = 0, c2 = 0;
    if (!(ls >> row.block >> c1 >> row.bs >> c2 >> row.energy) || c1 != ',' ||
        c2 != ',' || !(ls >> std::ws).eof()) {
      fail(at(line_no) + ": expected 'block,bs_id,energy' integers and a number, got '" +
           line + "'");
    }
    if (row.block < 0 || row.bs < 0) {
      fail(at(line_no) + ": block and bs_id must be nonnegative");
    }
    if (!(row.energy >= 0.0) || !std::isfinite(row.energy)) {
      fail(at(line_no) + ": energy must be finite and nonnegative");
    }
    if (!rows.empty()) {
      const Row& prev = rows.back();
      if (row.block < prev.block ||
          (row.block == prev.block && row.bs <= prev.bs)) {
        fail(at(line_no) + ": rows must be strictly increasing in (block, bs_id)");
      }
    }
    rows.push_back(row);
    max_block = std::max(max_block, row.block);
    max_bs = std::max(max_bs, row.bs);
  }
  if (rows.empty()) fail(name + ": no data rows");

  const long n_blocks = max_block + 1;
  const long n_bs = max_bs + 1;
  if (static_cast<long>(rows.size()) != n_blocks * n_bs) {
    std::ostringstream oss;
    oss << name << ": expected " << n_blocks * n_bs << " rows for " << n_blocks
        << " blocks x " << n_bs << " base stations, got " << rows.size();
    fail(oss.str());
  }
  RenewableSeries series;
  series.energy.resize(n_blocks, n_bs);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const long expect_block = static_cast<long>(r) / n_bs;
    const long expect_bs = static_cast<long>(r) % n_bs;
    if (rows[r].block != expect_block || rows[r].bs != expect_bs) {
      std::ostringstream oss;
      oss << name << ": data row " << r + 1 << " is (" << rows[r].block << ","
          << rows[r].bs << "), expected (" << expect_block << "," << expect_bs
          << "); blocks and bs_ids must be contiguous from 0";
      fail(oss.str());
    }
    series.energy(rows[r].block, rows[r].bs) = rows[r].energy;
  }
  return series;
}

void write_renewable_csv(const RenewableSeries& series, std::ostream& out) {
  out << "block,bs_id,energy\n";
  for (int b = 0; b < series.n_blocks(); ++b) {
    for (int i = 0; i < series.n_bs(); ++i) {
      out << b << ',' << i << ',' << format_number(series.energy(b, i))
          << '\n';
    }
  }
}

RenewableSeries synthetic_renewables(int n_bs, int n_blocks,
                                     std::uint64_t seed, double scale) {
  if (n_bs < 1 || n_blocks < 1) {
    throw std::invalid_argument("synthetic_renewables: n_bs and n_blocks must be >= 1");
  }
  if (!(scale >= 0.0)) {
    throw std::invalid_argument("synthetic_renewables: scale must be nonnegative");
  }
  RenewableSeries series;
  series.energy.resize(n_blocks, n_bs);
  for (int i = 0; i < n_bs; ++i) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const int site_type = i % 3;  // 0 solar, 1 wind, 2 both
    double wind_state = 1.0;
    for (int b = 0; b < n_blocks; ++b) {
      // The horizon spans one day; the solar arc covers its middle half.
      const double t = (b + 0.5) / n_blocks;
      double solar = 0.0;
      if (t > 0.25 && t < 0.75) {
        solar = std::sin(std::numbers::pi * (t - 0.25) / 0.5);
        solar *= 0.8 + 0.2 * uniform(rng);  // cloud flicker
      }
      wind_state += 0.15 * (1.0 - wind_state) +
                    0.35 * (2.0 * uniform(rng) - 1.0);
      wind_state = std::max(wind_state, 0.0);
      const double wind = 0.6 * wind_state;

      double level = 0.0;
      if (site_type == 0) level = solar;
      else if (site_type == 1) level = wind;
      else level = 0.5 * (solar + wind);
      series.energy(b, i) = scale * level;
    }
  }
  return series;
}

namespace {

/// Run one scheme on one materialized instance, prechecks disabled.
SolveOutcome dispatch_scheme(Scheme scheme, const ProblemInstance& instance,
                             const SolveOptions& options) {
  switch (scheme) {
    case Scheme::Optimal: return solve_joint(instance, options);
    case Scheme::Zf: return solve_zf(instance, options);
    case Scheme::ConvOptimal: return conventional_optimal(instance, options);
    case Scheme::ConvZf: return conventional_zf(instance, options);
  }
  throw std::logic_error("dispatch_scheme: unhandled scheme");
}

bool needs_zf(Scheme scheme) {
  return scheme == Scheme::Zf || scheme == Scheme::ConvZf;
}

}  // namespace

TimelineReport run_timeline(const ScenarioSpec& spec,
                            const RenewableSeries& renewables,
                            const TimelineOptions& options) {
  spec.cluster.validate();
  spec.qos.validate(spec.cluster.n_mt);
  if (spec.channels) {
    spec.channels->validate(spec.cluster);
  } else {
    spec.layout.validate();
  }
  if (options.schemes.empty()) {
    throw std::invalid_argument("run_timeline: no schemes requested");
  }
  if (renewables.n_bs() != spec.cluster.n_bs) {
    std::ostringstream oss;
    oss << "run_timeline: renewable series covers " << renewables.n_bs()
        << " base stations, cluster has " << spec.cluster.n_bs;
    throw std::invalid_argument(oss.str());
  }
  const int n_blocks = renewables.n_blocks();
  const bool any_general = std::any_of(options.schemes.begin(),
                                       options.schemes.end(),
                                       [](Scheme s) { return !needs_zf(s); });
  const bool any_zf = std::any_of(options.schemes.begin(),
                                  options.schemes.end(), needs_zf);

  SolveOptions solve_options = options.solve;
  solve_options.feasibility_precheck = false;  // checked once per draw below

  TimelineReport report;
  for (const Scheme s : options.schemes) {
    report.mean_cost[s] = 0.0;
    report.blocks_solved[s] = 0;
  }

  // Pinned channels behave like a fixed set regardless of the channel mode.
  const bool one_channel_set =
      spec.channels.has_value() || options.channel_mode == ChannelMode::FixedSet;

  ChannelSet fixed_channels;
  FeasibilityReport fixed_general, fixed_zf;
  if (one_channel_set) {
    fixed_channels = spec.channels
                         ? *spec.channels
                         : generate_channels(spec.layout, spec.cluster,
                                             mix_seed(options.seed, 0));
    ProblemInstance probe{spec.cluster, spec.energy, fixed_channels, spec.qos};
    probe.energy.harvest = Eigen::VectorXd::Zero(spec.cluster.n_bs);
    if (any_general) fixed_general = check_feasible(probe, options.solve);
    if (any_zf) fixed_zf = check_zf_feasible(probe, options.solve);
  }

  std::map<Scheme, double> cost_sum;
  for (const Scheme s : options.schemes) cost_sum[s] = 0.0;

  for (int b = 0; b < n_blocks; ++b) {
    ProblemInstance instance;
    instance.cluster = spec.cluster;
    instance.energy = spec.energy;
    instance.energy.harvest = renewables.energy.row(b).transpose();
    instance.qos = spec.qos;

    FeasibilityReport feas_general, feas_zf;
    if (one_channel_set) {
      instance.channels = fixed_channels;
      feas_general = fixed_general;
      feas_zf = fixed_zf;
    } else {
      instance.channels = generate_channels(
          spec.layout, spec.cluster,
          mix_seed(options.seed, static_cast<std::uint64_t>(b) + 1));
      if (any_general) feas_general = check_feasible(instance, options.solve);
      if (any_zf) feas_zf = check_zf_feasible(instance, options.solve);
    }

    // Mutual filtering: a block enters the comparison only when every
    // requested scheme can serve it.
    bool all_ok = true;
    std::string block_trouble;
    for (const Scheme s : options.schemes) {
      const FeasibilityReport& feas = needs_zf(s) ? feas_zf : feas_general;
      if (feas.verdict != FeasibilityVerdict::Feasible) {
        all_ok = false;
        std::ostringstream oss;
        oss << "block " << b << ", scheme " << to_string(s) << ": "
            << to_string(feas.verdict) << " (" << feas.detail << ")";
        block_trouble = oss.str();
        break;
      }
    }
    if (!all_ok && options.policy == InfeasiblePolicy::Error) {
      throw std::runtime_error("run_timeline: " + block_trouble);
    }
    if (!all_ok && options.policy == InfeasiblePolicy::Skip) {
      report.dropped_blocks.push_back(b);
      continue;
    }

    bool block_comparable = true;
    std::vector<BlockResult> block_rows;
    for (const Scheme s : options.schemes) {
      BlockResult row;
      row.block = b;
      row.scheme = s;
      const FeasibilityReport& feas = needs_zf(s) ? feas_zf : feas_general;
      if (feas.verdict != FeasibilityVerdict::Feasible) {
        row.status = SolveStatus::Infeasible;
        row.detail = feas.detail;
        block_comparable = false;
        block_rows.push_back(std::move(row));
        continue;
      }
      const SolveOutcome outcome = dispatch_scheme(s, instance, solve_options);
      row.status = outcome.status;
      row.detail = outcome.detail;
      if (outcome.status == SolveStatus::Converged) {
        row.solved = true;
        row.tx_power = per_bs_tx_power(spec.cluster, outcome.beams);
        row.consumption = consumption(spec.cluster, outcome.beams);
        row.buy = outcome.schedule.buy;
        row.sell = outcome.schedule.sell;
        row.cost = outcome.cost;
      } else {
        block_comparable = false;
        if (options.policy == InfeasiblePolicy::Error) {
          std::ostringstream oss;
          oss << "run_timeline: block " << b << ", scheme " << to_string(s)
              << ": " << to_string(outcome.status) << " (" << outcome.detail
              << ")";
          throw std::runtime_error(oss.str());
        }
      }
      block_rows.push_back(std::move(row));
    }

    if (!block_comparable && options.policy == InfeasiblePolicy::Skip) {
      report.dropped_blocks.push_back(b);
      continue;
    }
    for (BlockResult& row : block_rows) {
      if (row.solved) {
        ++report.blocks_solved[row.scheme];
        if (block_comparable) cost_sum[row.scheme] += row.cost;
      }
      report.rows.push_back(std::move(row));
    }
    if (block_comparable) ++report.comparable_blocks;
  }

  for (const Scheme s : options.schemes) {
    report.mean_cost[s] = report.comparable_blocks > 0
                              ? cost_sum[s] / report.comparable_blocks
                              : std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

void write_report_csv(const TimelineReport& report, std::ostream& out) {
  out << "block,scheme,bs_id,tx_power,consumption,buy,sell\n";
  for (const BlockResult& row : report.rows) {
    const int n_bs = row.solved ? static_cast<int>(row.tx_power.size()) : 1;
    for (int i = 0; i < n_bs; ++i) {
      out << row.block << ',' << to_string(row.scheme) << ',' << i << ',';
      if (row.solved) {
        out << format_number(row.tx_power[i]) << ','
            << format_number(row.consumption[i]) << ','
            << format_number(row.buy[i]) << ',' << format_number(row.sell[i]);
      } else {
        out << "nan,nan,nan,nan";
      }
      out << '\n';
    }
  }
}

void write_summary_csv(const TimelineReport& report, std::ostream& out) {
  out << "scheme,mean_cost,blocks_feasible\n";
  for (const auto& [scheme, mean] : report.mean_cost) {
    out << to_string(scheme) << ',' << format_number(mean) << ','
        << report.blocks_solved.at(scheme) << '\n';
  }
}

}  // namespace gridbeam
