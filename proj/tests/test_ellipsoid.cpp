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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gridbeam/ellipsoid.hpp"

using namespace gridbeam;

namespace {

/// Concave quadratic -||z - target||^2 with its exact gradient.
SubgradientOracle quadratic(const Eigen::VectorXd& target) {
  return [target](const Eigen::VectorXd& z) {
    SubgradientOracleResult r;
    r.value = -(z - target).squaredNorm();
    r.subgradient = -2.0 * (z - target);
    return r;
  };
}

}  // namespace

TEST_CASE("interior maximum of a smooth concave function") {
  const Eigen::Vector2d target(0.3, -0.7);
  const Eigen::Vector2d lower(-2.0, -2.0);
  const Eigen::Vector2d upper(2.0, 2.0);
  EllipsoidOptions options;
  options.tol = 1e-9;
  const MaximizeResult res = maximize(quadratic(target), lower, upper, options);
  CHECK(res.converged);
  CHECK((res.best_point - target).norm() < 1e-4);
  CHECK(res.best_value > -1e-8);
  CHECK(res.best_value <= 0.0);
}

TEST_CASE("maximum pinned to the box boundary") {
  // Target outside the box: the solution clamps to the nearest face.
  const Eigen::Vector2d target(3.0, 0.25);
  const Eigen::Vector2d lower(-1.0, -1.0);
  const Eigen::Vector2d upper(1.0, 1.0);
  EllipsoidOptions options;
  options.tol = 1e-10;
  const MaximizeResult res = maximize(quadratic(target), lower, upper, options);
  CHECK(res.converged);
  CHECK(res.best_point[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(res.best_point[1] == doctest::Approx(0.25).epsilon(1e-3));
  CHECK((res.best_point.array() <= upper.array() + 1e-12).all());
  CHECK((res.best_point.array() >= lower.array() - 1e-12).all());
}

TEST_CASE("nondifferentiable objective") {
  // -|z0 - 0.5| - 3|z1 + 0.25| with a subgradient selection at the kinks.
  const auto oracle = [](const Eigen::VectorXd& z) {
    SubgradientOracleResult r;
    r.value = -std::abs(z[0] - 0.5) - 3.0 * std::abs(z[1] + 0.25);
    r.subgradient = Eigen::Vector2d(z[0] >= 0.5 ? -1.0 : 1.0,
                                    z[1] >= -0.25 ? -3.0 : 3.0);
    return r;
  };
  const MaximizeResult res =
      maximize(oracle, Eigen::Vector2d(-2.0, -2.0), Eigen::Vector2d(2.0, 2.0),
               {.tol = 1e-8});
  CHECK(res.converged);
  CHECK(res.best_point[0] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(res.best_point[1] == doctest::Approx(-0.25).epsilon(1e-3));
}

TEST_CASE("single free dimension falls back to interval halving") {
  const auto oracle = [](const Eigen::VectorXd& z) {
    SubgradientOracleResult r;
    r.value = -(z[0] - 1.25) * (z[0] - 1.25);
    r.subgradient = Eigen::VectorXd::Constant(1, -2.0 * (z[0] - 1.25));
    return r;
  };
  const MaximizeResult res =
      maximize(oracle, Eigen::VectorXd::Constant(1, 0.0),
               Eigen::VectorXd::Constant(1, 4.0), {.tol = 1e-9});
  CHECK(res.converged);
  CHECK(res.best_point[0] == doctest::Approx(1.25).epsilon(1e-6));
}

TEST_CASE("zero-width coordinates are frozen, not searched") {
  // Dimension 1 is pinned at 2.0; the search must hold it exactly and
  // still optimize the free coordinates.
  const Eigen::Vector3d target(0.5, -1.0, -0.5);
  const Eigen::Vector3d lower(-4.0, 2.0, -4.0);
  const Eigen::Vector3d upper(4.0, 2.0, 4.0);
  long calls = 0;
  const auto oracle = [&](const Eigen::VectorXd& z) {
    ++calls;
    CHECK(z[1] == 2.0);  // frozen exactly, every query
    SubgradientOracleResult r;
    r.value = -(z - target).squaredNorm();
    r.subgradient = -2.0 * (z - target);
    return r;
  };
  const MaximizeResult res = maximize(oracle, lower, upper, {.tol = 1e-9});
  CHECK(res.converged);
  CHECK(calls > 0);
  CHECK(res.best_point[1] == 2.0);
  CHECK(res.best_point[0] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(res.best_point[2] == doctest::Approx(-0.5).epsilon(1e-3));
}

TEST_CASE("fully pinned box evaluates the single point") {
  const Eigen::Vector2d point(1.5, -2.5);
  const MaximizeResult res = maximize(quadratic(Eigen::Vector2d(0.0, 0.0)),
                                      point, point, {.tol = 1e-9});
  CHECK(res.converged);
  CHECK(res.oracle_calls == 1);
  CHECK(res.best_point == point);
  CHECK(res.best_value == doctest::Approx(-point.squaredNorm()));
}

TEST_CASE("queries outside the box are cut away without evaluation") {
  // Maximum sits in a corner sliver; the oracle must only ever see
  // in-box points because out-of-box centers get feasibility cuts.
  const Eigen::Vector2d lower(0.0, 0.0);
  const Eigen::Vector2d upper(1.0, 0.01);
  const auto oracle = [&](const Eigen::VectorXd& z) {
    CHECK((z.array() >= lower.array() - 1e-12).all());
    CHECK((z.array() <= upper.array() + 1e-12).all());
    SubgradientOracleResult r;
    r.value = z.sum();
    r.subgradient = Eigen::Vector2d(1.0, 1.0);
    return r;
  };
  const MaximizeResult res = maximize(oracle, lower, upper, {.tol = 1e-8});
  CHECK(res.converged);
  CHECK(res.best_value == doctest::Approx(1.01).epsilon(1e-3));
}

TEST_CASE("unbounded coordinate with a linear cap objective") {
  // f(z) = -|z0 - 7| over [0, inf): must find 7 via the unbounded extent.
  const auto oracle = [](const Eigen::VectorXd& z) {
    SubgradientOracleResult r;
    r.value = -std::abs(z[0] - 7.0);
    r.subgradient = Eigen::VectorXd::Constant(1, z[0] >= 7.0 ? -1.0 : 1.0);
    return r;
  };
  const Eigen::VectorXd lower = Eigen::VectorXd::Zero(1);
  const Eigen::VectorXd upper =
      Eigen::VectorXd::Constant(1, std::numeric_limits<double>::infinity());
  const MaximizeResult res = maximize(oracle, lower, upper, {.tol = 1e-9});
  CHECK(res.converged);
  CHECK(res.best_point[0] == doctest::Approx(7.0).epsilon(1e-5));
}

TEST_CASE("early stop hands back the incumbent") {
  const Eigen::Vector2d target(0.0, 0.0);
  EllipsoidOptions options;
  options.tol = 1e-12;
  options.early_stop = [](double best, const Eigen::VectorXd&) {
    return best > -0.5;  // well before tol would trigger
  };
  const MaximizeResult res =
      maximize(quadratic(target), Eigen::Vector2d(-3.0, -3.0),
               Eigen::Vector2d(1.0, 1.0), options);
  CHECK(res.converged);
  CHECK(res.stopped_early);
  CHECK(res.best_value > -0.5);
}

TEST_CASE("incumbent value never decreases over a run") {
  double best_seen = -std::numeric_limits<double>::infinity();
  const Eigen::Vector3d target(0.1, 0.2, 0.3);
  const auto oracle = [&](const Eigen::VectorXd& z) {
    SubgradientOracleResult r;
    r.value = -(z - target).squaredNorm();
    r.subgradient = -2.0 * (z - target);
    best_seen = std::max(best_seen, r.value);
    return r;
  };
  const MaximizeResult res = maximize(
      oracle, Eigen::Vector3d(-2.0, -2.0, -2.0),
      Eigen::Vector3d(2.0, 2.0, 2.0), {.tol = 1e-7});
  CHECK(res.converged);
  CHECK(res.best_value == doctest::Approx(best_seen));
}

TEST_CASE("inconsistent bounds are rejected") {
  CHECK_THROWS_AS(maximize(quadratic(Eigen::Vector2d(0.0, 0.0)),
                           Eigen::Vector2d(1.0, 0.0),
                           Eigen::Vector2d(-1.0, 0.0), {}),
                  std::invalid_argument);
}

TEST_CASE("iteration budget exhaustion is reported, not thrown") {
  EllipsoidOptions options;
  options.tol = 1e-16;  // unreachable
  options.max_iter = 25;
  const MaximizeResult res =
      maximize(quadratic(Eigen::Vector2d(0.3, 0.4)),
               Eigen::Vector2d(-1.0, -1.0), Eigen::Vector2d(1.0, 1.0), options);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations <= 25);
  CHECK_FALSE(res.detail.empty());
}
