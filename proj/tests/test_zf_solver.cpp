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
#include <random>

#include "gridbeam/duality_solver.hpp"
#include "gridbeam/model.hpp"
#include "gridbeam/zf_solver.hpp"
#include "support.hpp"

using namespace gridbeam;

namespace {

/// Largest cross-terminal leak |h_l^H w_k| / (|h_l| |w_k|) over l != k.
double worst_leak(const ChannelSet& channels, const BeamformingSolution& beams) {
  double worst = 0.0;
  for (int k = 0; k < beams.w.cols(); ++k) {
    for (int l = 0; l < channels.n_mt(); ++l) {
      if (l == k) continue;
      const double denom =
          channels.h.col(l).norm() * beams.w.col(k).norm();
      if (denom > 0.0) {
        worst = std::max(
            worst, std::abs(channels.h.col(l).dot(beams.w.col(k))) / denom);
      }
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("null-space bases are orthonormal and annihilate the others") {
  std::mt19937_64 rng(111);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2;
    const int m = 1 + trial % 3;
    const int k_mt = 1 + trial % (n * m);
    const ChannelSet channels = testsupport::random_channels(rng, n, m, k_mt);
    const auto bases = all_null_space_bases(channels);
    REQUIRE(static_cast<int>(bases.size()) == k_mt);
    for (int k = 0; k < k_mt; ++k) {
      const Eigen::MatrixXcd& v = bases[k].basis;
      CHECK(static_cast<int>(v.rows()) == n * m);
      CHECK(static_cast<int>(v.cols()) == n * m - (k_mt - 1));
      const Eigen::MatrixXcd gram = v.adjoint() * v;
      CHECK((gram - Eigen::MatrixXcd::Identity(v.cols(), v.cols()))
                .cwiseAbs()
                .maxCoeff() < 1e-12);
      for (int l = 0; l < k_mt; ++l) {
        if (l != k) {
          CHECK((channels.h.col(l).adjoint() * v).cwiseAbs().maxCoeff() <
                1e-10 * channels.h.col(l).norm());
        }
      }
    }
  }
}

TEST_CASE("closed form meets every SNR target with zero interference") {
  std::mt19937_64 rng(222);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2;
    const int m = 2;
    const int k_mt = 1 + trial % (n * m - 1);
    const ProblemInstance instance =
        testsupport::random_instance(rng, n, m, k_mt);
    const WeightedNoise noise = make_weighted_noise(
        instance.cluster,
        0.5 * (instance.energy.price_sell + instance.energy.price_buy),
        Eigen::VectorXd::Constant(n, 0.03));
    const auto bases = all_null_space_bases(instance.channels);
    const BeamformingSolution beams =
        zf_closed_form(instance.channels, instance.qos, noise, bases);

    CHECK(worst_leak(instance.channels, beams) < 1e-10);
    const Eigen::VectorXd achieved =
        sinr(instance.channels, instance.qos, beams);
    for (int k = 0; k < k_mt; ++k) {
      CHECK(achieved[k] ==
            doctest::Approx(instance.qos.sinr_min[k]).epsilon(1e-8));
    }
  }
}

TEST_CASE("closed form minimizes the weighted form within the ZF family") {
  // Any other interference-free beam set meeting the targets must weigh
  // at least as much.  Perturb inside the null space and re-scale.
  std::mt19937_64 rng(333);
  const ProblemInstance instance = testsupport::random_instance(rng, 2, 2, 2);
  const WeightedNoise noise = make_weighted_noise(
      instance.cluster, instance.energy.price_buy, Eigen::Vector2d(0.1, 0.2));
  const auto bases = all_null_space_bases(instance.channels);
  const BeamformingSolution star =
      zf_closed_form(instance.channels, instance.qos, noise, bases);
  const Eigen::VectorXd weights = noise.antenna_diagonal();
  const auto weighted = [&](const BeamformingSolution& b) {
    double acc = 0.0;
    for (int c = 0; c < b.w.cols(); ++c) {
      acc += (b.w.col(c).array().abs2() * weights.array()).sum();
    }
    return acc;
  };
  const double best = weighted(star);

  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    BeamformingSolution other = star;
    for (int k = 0; k < 2; ++k) {
      const Eigen::MatrixXcd& v = bases[k].basis;
      Eigen::VectorXcd coef(v.cols());
      for (int j = 0; j < v.cols(); ++j) {
        coef[j] = Complex(normal(rng), normal(rng));
      }
      // Stay in the null space, then rescale to hit the SNR target again.
      Eigen::VectorXcd cand = other.w.col(k) + 0.3 * (v * coef);
      const double gain = std::abs(instance.channels.h.col(k).dot(cand));
      REQUIRE(gain > 0.0);
      const double want = std::sqrt(instance.qos.sinr_min[k] *
                                    instance.qos.noise_power[k]);
      other.w.col(k) = cand * (want / gain);
    }
    CHECK(weighted(other) >= best * (1.0 - 1e-9));
  }
}

TEST_CASE("ZF solve on the two-BS golden instance equals the optimum") {
  // With a single terminal there is nothing to null, so the ZF scheme
  // coincides with the unrestricted one.
  const ProblemInstance toy = testsupport::make_toy();
  const SolveOutcome outcome = solve_zf(toy);
  REQUIRE(outcome.status == SolveStatus::Converged);
  CHECK(outcome.cost == doctest::Approx(0.05).epsilon(1e-3));
  const Eigen::VectorXd tx = per_bs_tx_power(toy.cluster, outcome.beams);
  CHECK(tx[0] == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(tx[1] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("ZF cost dominates the unrestricted cost") {
  std::mt19937_64 rng(444);
  int compared = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2;
    const int m = 1 + trial % 2;
    const int k_mt = 1 + trial % (n * m);
    const ProblemInstance instance =
        testsupport::random_instance(rng, n, m, k_mt);
    const SolveOutcome joint = solve_joint(instance);
    const SolveOutcome zf = solve_zf(instance);
    REQUIRE(joint.status == SolveStatus::Converged);
    REQUIRE(zf.status == SolveStatus::Converged);
    CHECK(zf.cost >=
          joint.cost - 1e-6 * std::max(1.0, std::abs(joint.cost)));
    // And the restricted beams still satisfy the full SINR constraints.
    const Eigen::VectorXd achieved =
        sinr(instance.channels, instance.qos, zf.beams);
    CHECK(((achieved - instance.qos.sinr_min).array() >
           -1e-6 * instance.qos.sinr_min.array())
              .all());
    ++compared;
  }
  CHECK(compared == 10);
}

TEST_CASE("too many terminals for the antenna budget is structural") {
  std::mt19937_64 rng(555);
  ProblemInstance instance = testsupport::random_instance(rng, 2, 1, 3);
  const SolveOutcome outcome = solve_zf(instance);
  CHECK(outcome.status == SolveStatus::Infeasible);
  CHECK(outcome.detail.find("exceeds") != std::string::npos);
  // The unrestricted solver may still serve them.
  const SolveOutcome joint = solve_joint(instance);
  CHECK(joint.status == SolveStatus::Converged);
}

TEST_CASE("duplicated channels defeat zero forcing") {
  ProblemInstance instance = testsupport::make_toy();
  instance.cluster.n_mt = 2;
  instance.channels.h = Eigen::MatrixXcd(2, 2);
  // Colinear columns: the stack is rank deficient.
  instance.channels.h << Complex(1.0, 0.0), Complex(2.0, 0.0),
      Complex(0.5, 0.0), Complex(1.0, 0.0);
  instance.qos.sinr_min = Eigen::Vector2d(1.0, 1.0);
  instance.qos.noise_power = Eigen::Vector2d(1.0, 1.0);
  const SolveOutcome outcome = solve_zf(instance);
  CHECK(outcome.status == SolveStatus::Infeasible);
}

TEST_CASE("ZF dual oracle agrees with the generic dual pieces") {
  std::mt19937_64 rng(666);
  const ProblemInstance instance = testsupport::random_instance(rng, 3, 2, 4);
  const Eigen::VectorXd mu =
      0.5 * (instance.energy.price_sell + instance.energy.price_buy);
  const Eigen::VectorXd nu = Eigen::VectorXd::Constant(3, 0.01);
  const auto bases = all_null_space_bases(instance.channels);
  const ZfDualEvaluation eval = zf_dual_oracle(instance, bases, mu, nu);

  const Eigen::VectorXd tx = per_bs_tx_power(instance.cluster, eval.beams);
  CHECK((eval.tx_power - tx).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::VectorXd draw = consumption(instance.cluster, eval.beams);
  CHECK((eval.subgradient_mu - (draw - instance.energy.harvest)).cwiseAbs()
            .maxCoeff() < 1e-9);
  CHECK((eval.subgradient_nu - (tx - instance.cluster.p_max)).cwiseAbs()
            .maxCoeff() < 1e-9);

  const WeightedNoise noise = make_weighted_noise(instance.cluster, mu, nu);
  const double expected_value =
      noise.bs_weight.dot(tx) +
      mu.dot(instance.cluster.p_circuit - instance.energy.harvest) -
      nu.dot(instance.cluster.p_max);
  CHECK(eval.value == doctest::Approx(expected_value).epsilon(1e-10));
}
