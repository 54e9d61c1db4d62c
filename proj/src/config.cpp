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

#include "gridbeam/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gridbeam {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw std::runtime_error(context + ": " + what);
}

/// Translate a nlohmann byte offset into line:column for the message.
std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream oss;
  oss << line << ":" << col;
  return oss.str();
}

void reject_unknown_keys(const json& obj, const std::string& context,
                         std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(context, "unknown key '" + key + "'");
  }
}

const json& require(const json& obj, const std::string& context,
                    const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(context, std::string("missing key '") + key + "'");
  return *it;
}

double get_number(const json& obj, const std::string& context, const char* key) {
  const json& v = require(obj, context, key);
  if (!v.is_number()) fail(context, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

double get_number_or(const json& obj, const std::string& context,
                     const char* key, double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) fail(context, std::string("'") + key + "' must be a number");
  return it->get<double>();
}

long get_integer(const json& obj, const std::string& context, const char* key) {
  const json& v = require(obj, context, key);
  if (!v.is_number_integer()) {
    fail(context, std::string("'") + key + "' must be an integer");
  }
  return v.get<long>();
}

long get_integer_or(const json& obj, const std::string& context,
                    const char* key, long fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) {
    fail(context, std::string("'") + key + "' must be an integer");
  }
  return it->get<long>();
}

Eigen::VectorXd get_vector(const json& obj, const std::string& context,
                           const char* key) {
  const json& v = require(obj, context, key);
  if (!v.is_array()) fail(context, std::string("'") + key + "' must be an array");
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      std::ostringstream oss;
      oss << "'" << key << "[" << i << "]' must be a number";
      fail(context, oss.str());
    }
    out[static_cast<int>(i)] = v[i].get<double>();
  }
  return out;
}

json to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

ClusterConfig parse_cluster(const json& obj, const std::string& context) {
  if (!obj.is_object()) fail(context, "must be an object");
  reject_unknown_keys(obj, context,
                      {"n_bs", "n_ant", "n_mt", "pa_efficiency", "p_max",
                       "p_circuit"});
  ClusterConfig cluster;
  cluster.n_bs = static_cast<int>(get_integer(obj, context, "n_bs"));
  cluster.n_ant = static_cast<int>(get_integer(obj, context, "n_ant"));
  cluster.n_mt = static_cast<int>(get_integer(obj, context, "n_mt"));
  cluster.pa_efficiency = get_number_or(obj, context, "pa_efficiency", 1.0);
  cluster.p_max = get_vector(obj, context, "p_max");
  cluster.p_circuit = get_vector(obj, context, "p_circuit");
  return cluster;
}

EnergyInputs parse_energy(const json& obj, const std::string& context) {
  if (!obj.is_object()) fail(context, "must be an object");
  reject_unknown_keys(obj, context,
                      {"harvest", "price_buy", "price_sell", "price_floor",
                       "price_cap"});
  EnergyInputs energy;
  energy.harvest = get_vector(obj, context, "harvest");
  energy.price_buy = get_vector(obj, context, "price_buy");
  energy.price_sell = get_vector(obj, context, "price_sell");
  energy.price_floor = get_number(obj, context, "price_floor");
  energy.price_cap = get_number(obj, context, "price_cap");
  return energy;
}

QosTargets parse_qos(const json& obj, const std::string& context) {
  if (!obj.is_object()) fail(context, "must be an object");
  reject_unknown_keys(obj, context, {"sinr_min", "noise_power"});
  QosTargets qos;
  qos.sinr_min = get_vector(obj, context, "sinr_min");
  qos.noise_power = get_vector(obj, context, "noise_power");
  return qos;
}

ChannelSet parse_channels(const json& arr, const std::string& context,
                          const ClusterConfig& cluster) {
  if (!arr.is_array()) {
    fail(context, "must be an array of per-terminal coefficient arrays");
  }
  ChannelSet channels;
  channels.n_ant = cluster.n_ant;
  channels.h.resize(cluster.stacked_dim(), static_cast<int>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k) {
    std::ostringstream kctx;
    kctx << context << "[" << k << "]";
    const json& vec = arr[k];
    if (!vec.is_array() ||
        vec.size() != static_cast<std::size_t>(cluster.stacked_dim())) {
      std::ostringstream oss;
      oss << "must be an array of " << cluster.stacked_dim()
          << " [re, im] pairs";
      fail(kctx.str(), oss.str());
    }
    for (std::size_t j = 0; j < vec.size(); ++j) {
      const json& pair = vec[j];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number()) {
        std::ostringstream oss;
        oss << "entry " << j << " must be an [re, im] pair";
        fail(kctx.str(), oss.str());
      }
      channels.h(static_cast<int>(j), static_cast<int>(k)) =
          Complex(pair[0].get<double>(), pair[1].get<double>());
    }
  }
  return channels;
}

LayoutSpec parse_layout(const json& obj, const std::string& context) {
  if (!obj.is_object()) fail(context, "must be an object");
  reject_unknown_keys(obj, context,
                      {"inter_bs_distance_m", "min_link_distance_m",
                       "pathloss_exponent", "pathloss_offset_db"});
  LayoutSpec layout;
  layout.inter_bs_distance_m =
      get_number_or(obj, context, "inter_bs_distance_m", 1000.0);
  layout.min_link_distance_m =
      get_number_or(obj, context, "min_link_distance_m", 10.0);
  layout.pathloss_exponent =
      get_number_or(obj, context, "pathloss_exponent", 3.76);
  layout.pathloss_offset_db =
      get_number_or(obj, context, "pathloss_offset_db", 128.1);
  return layout;
}

SolveOptions parse_solver(const json& obj, const std::string& context) {
  if (!obj.is_object()) fail(context, "must be an object");
  reject_unknown_keys(obj, context,
                      {"inner_tol", "inner_max_iter", "ellipsoid_tol",
                       "ellipsoid_max_iter", "nu_cap_scale", "gap_tol",
                       "feasibility_precheck", "cap_slack"});
  SolveOptions options;
  options.inner_tol = get_number_or(obj, context, "inner_tol", options.inner_tol);
  options.inner_max_iter =
      get_integer_or(obj, context, "inner_max_iter", options.inner_max_iter);
  options.ellipsoid_tol =
      get_number_or(obj, context, "ellipsoid_tol", options.ellipsoid_tol);
  options.ellipsoid_max_iter = get_integer_or(obj, context, "ellipsoid_max_iter",
                                              options.ellipsoid_max_iter);
  options.nu_cap_scale =
      get_number_or(obj, context, "nu_cap_scale", options.nu_cap_scale);
  options.gap_tol = get_number_or(obj, context, "gap_tol", options.gap_tol);
  if (const auto it = obj.find("feasibility_precheck"); it != obj.end()) {
    if (!it->is_boolean()) fail(context, "'feasibility_precheck' must be a boolean");
    options.feasibility_precheck = it->get<bool>();
  }
  options.cap_slack = get_number_or(obj, context, "cap_slack", options.cap_slack);
  return options;
}

SimulationConfig parse_simulation(const json& obj, const std::string& context) {
  if (!obj.is_object()) fail(context, "must be an object");
  reject_unknown_keys(obj, context,
                      {"blocks", "channel_mode", "policy", "schemes", "seed",
                       "renewable_scale"});
  SimulationConfig sim;
  sim.blocks = static_cast<int>(get_integer_or(obj, context, "blocks", sim.blocks));
  if (const auto it = obj.find("channel_mode"); it != obj.end()) {
    if (!it->is_string()) fail(context, "'channel_mode' must be a string");
    sim.channel_mode = channel_mode_from_string(it->get<std::string>());
  }
  if (const auto it = obj.find("policy"); it != obj.end()) {
    if (!it->is_string()) fail(context, "'policy' must be a string");
    sim.policy = infeasible_policy_from_string(it->get<std::string>());
  }
  if (const auto it = obj.find("schemes"); it != obj.end()) {
    if (!it->is_array() || it->empty()) {
      fail(context, "'schemes' must be a nonempty array of scheme names");
    }
    sim.schemes.clear();
    for (const json& s : *it) {
      if (!s.is_string()) fail(context, "'schemes' entries must be strings");
      sim.schemes.push_back(scheme_from_string(s.get<std::string>()));
    }
  }
  sim.seed = static_cast<std::uint64_t>(
      get_integer_or(obj, context, "seed", static_cast<long>(sim.seed)));
  sim.renewable_scale =
      get_number_or(obj, context, "renewable_scale", sim.renewable_scale);
  if (sim.blocks < 1) fail(context, "'blocks' must be >= 1");
  if (!(sim.renewable_scale >= 0.0)) {
    fail(context, "'renewable_scale' must be nonnegative");
  }
  return sim;
}

}  // namespace

AppConfig parse_config_text(const std::string& text, const std::string& name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    std::ostringstream oss;
    oss << name << ":" << locate(text, err.byte) << ": " << err.what();
    throw std::runtime_error(oss.str());
  }
  if (!root.is_object()) fail(name, "top level must be an object");
  reject_unknown_keys(root, name,
                      {"cluster", "energy", "qos", "channels", "layout",
                       "channel_seed", "solver", "simulation"});

  AppConfig config;
  config.cluster = parse_cluster(require(root, name, "cluster"), name + ": cluster");
  config.energy = parse_energy(require(root, name, "energy"), name + ": energy");
  config.qos = parse_qos(require(root, name, "qos"), name + ": qos");

  const bool has_channels = root.contains("channels");
  const bool has_layout = root.contains("layout");
  if (has_channels == has_layout) {
    fail(name, "exactly one of 'channels' and 'layout' is required");
  }
  if (has_channels) {
    config.channels =
        parse_channels(root["channels"], name + ": channels", config.cluster);
  } else {
    config.layout = parse_layout(root["layout"], name + ": layout");
  }
  config.channel_seed = static_cast<std::uint64_t>(get_integer_or(
      root, name, "channel_seed", static_cast<long>(config.channel_seed)));
  if (root.contains("solver")) {
    config.solver = parse_solver(root["solver"], name + ": solver");
  }
  if (root.contains("simulation")) {
    config.simulation =
        parse_simulation(root["simulation"], name + ": simulation");
  }

  // Full semantic validation up front so commands can trust the config.
  config.cluster.validate();
  config.energy.validate(config.cluster.n_bs);
  config.qos.validate(config.cluster.n_mt);
  if (config.channels) config.channels->validate(config.cluster);
  if (config.layout) config.layout->validate();
  return config;
}

AppConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

std::string serialize_config(const AppConfig& config) {
  json root;
  root["cluster"] = {{"n_bs", config.cluster.n_bs},
                     {"n_ant", config.cluster.n_ant},
                     {"n_mt", config.cluster.n_mt},
                     {"pa_efficiency", config.cluster.pa_efficiency},
                     {"p_max", to_json(config.cluster.p_max)},
                     {"p_circuit", to_json(config.cluster.p_circuit)}};
  root["energy"] = {{"harvest", to_json(config.energy.harvest)},
                    {"price_buy", to_json(config.energy.price_buy)},
                    {"price_sell", to_json(config.energy.price_sell)},
                    {"price_floor", config.energy.price_floor},
                    {"price_cap", config.energy.price_cap}};
  root["qos"] = {{"sinr_min", to_json(config.qos.sinr_min)},
                 {"noise_power", to_json(config.qos.noise_power)}};
  if (config.channels) {
    json arr = json::array();
    for (int k = 0; k < config.channels->n_mt(); ++k) {
      json vec = json::array();
      for (int j = 0; j < config.channels->h.rows(); ++j) {
        vec.push_back(
            {config.channels->h(j, k).real(), config.channels->h(j, k).imag()});
      }
      arr.push_back(std::move(vec));
    }
    root["channels"] = std::move(arr);
  }
  if (config.layout) {
    root["layout"] = {
        {"inter_bs_distance_m", config.layout->inter_bs_distance_m},
        {"min_link_distance_m", config.layout->min_link_distance_m},
        {"pathloss_exponent", config.layout->pathloss_exponent},
        {"pathloss_offset_db", config.layout->pathloss_offset_db}};
  }
  root["channel_seed"] = config.channel_seed;
  root["solver"] = {
      {"inner_tol", config.solver.inner_tol},
      {"inner_max_iter", config.solver.inner_max_iter},
      {"ellipsoid_tol", config.solver.ellipsoid_tol},
      {"ellipsoid_max_iter", config.solver.ellipsoid_max_iter},
      {"nu_cap_scale", config.solver.nu_cap_scale},
      {"gap_tol", config.solver.gap_tol},
      {"feasibility_precheck", config.solver.feasibility_precheck},
      {"cap_slack", config.solver.cap_slack}};
  json schemes = json::array();
  for (const Scheme s : config.simulation.schemes) schemes.push_back(to_string(s));
  root["simulation"] = {
      {"blocks", config.simulation.blocks},
      {"channel_mode", to_string(config.simulation.channel_mode)},
      {"policy", to_string(config.simulation.policy)},
      {"schemes", std::move(schemes)},
      {"seed", config.simulation.seed},
      {"renewable_scale", config.simulation.renewable_scale}};
  return root.dump(2) + "\n";
}

ProblemInstance make_instance(const AppConfig& config) {
  ProblemInstance instance;
  instance.cluster = config.cluster;
  instance.energy = config.energy;
  instance.qos = config.qos;
  if (config.channels) {
    instance.channels = *config.channels;
  } else {
    instance.channels =
        generate_channels(*config.layout, config.cluster, config.channel_seed);
  }
  instance.validate();
  return instance;
}

ScenarioSpec make_scenario(const AppConfig& config) {
  ScenarioSpec spec;
  spec.cluster = config.cluster;
  spec.energy = config.energy;
  spec.qos = config.qos;
  if (config.channels) {
    spec.channels = *config.channels;  // every block reuses the pinned set
  } else {
    spec.layout = *config.layout;
  }
  return spec;
}

}  // namespace gridbeam
