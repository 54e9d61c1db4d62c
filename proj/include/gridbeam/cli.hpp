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

/// \file cli.hpp
/// Command implementations behind the `gridbeam` binary, stream-injected
/// for tests.  Exit codes: 0 success, 1 usage/config/IO errors and failed
/// verification, 2 infeasible, 3 not converged.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace gridbeam {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitNotConverged = 3;

/// Command-line overrides layered over the config file.
struct CliOverrides {
  std::optional<std::uint64_t> seed;  ///< channel seed (solve) / run seed (simulate)
  std::optional<double> tol;          ///< dual localization tolerance
  std::optional<long> max_iter;       ///< dual iteration budget
};

/// Solve one block under the given scheme and print the solution.
int cmd_solve(const std::string& config_path, const std::string& scheme_name,
              const CliOverrides& overrides, std::ostream& out,
              std::ostream& err);

/// Report general and zero-forcing feasibility for one block.
int cmd_feasibility(const std::string& config_path,
                    const CliOverrides& overrides, std::ostream& out,
                    std::ostream& err);

/// Cross-check the solver against the independent reference computations;
/// requires an instance small enough for them (single terminal; the grid
/// scan additionally wants two single-antenna base stations).
int cmd_verify(const std::string& config_path, const CliOverrides& overrides,
               std::ostream& out, std::ostream& err);

/// Run a timeline simulation and write report.csv and summary.csv into
/// out_dir.  An empty renewables_csv selects the synthetic generator.
int cmd_simulate(const std::string& config_path,
                 const std::string& renewables_csv, const std::string& out_dir,
                 const CliOverrides& overrides, std::ostream& out,
                 std::ostream& err);

/// Full argument parsing and dispatch for the binary.
int run_cli(int argc, const char* const* argv);

}  // namespace gridbeam
