#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssrank/sim.hpp"

namespace ssrank::harness {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BehaviorConfig {
  double attraction_scale = 1.0;
  double base_leave = 0.15;
  double fatigue = 0.02;
  double purchase_gain = 3.0;
  double price_noise = 0.1;
  int window = 4;
  double target_conversion = 0.05;
  int calibration_sessions = 400;
  double click_base = 0.05;
  double click_gain = 0.3;
  std::uint64_t seed = 2;
};

struct AgentSection {
  std::string type = "dpg_fbe";
  double gamma = 1.0;
  double alpha_actor = 1e-3;
  double alpha_critic = 1e-2;
  double tau = 1e-3;
  double noise_scale = 0.1;
  std::int64_t noise_half_life = 20000;
  std::vector<int> actor_hidden{200, 100};
  std::vector<int> critic_hidden{200, 100};
  std::string optimizer = "sgd";
  bool grad_at_executed_action = true;
  double outcome_step = 0.1;
  double price_step = 0.1;
  std::int64_t buffer_capacity = 100000;
  std::int64_t batch_size = 32;
  double updates_per_step = 1.0;
  double negative_weight = 0.05;
  double exp3_eta = 0.1;
  double exp3_mixing = 0.05;
};

struct RunSection {
  std::int64_t sessions = 10000;
  std::int64_t warmup_sessions = 2000;
  std::uint64_t seed_agent = 3;
  std::uint64_t seed_sessions = 4;
  std::int64_t metrics_window = 1000;
  bool record_wall_time = false;  // keeps CSV output byte-reproducible
};

// Flat key-value configuration with one section per module. Parsing is
// strict: unknown sections or keys are validation errors.
struct ExperimentConfig {
  sim::CatalogConfig catalog;
  BehaviorConfig behavior;
  AgentSection agent;
  RunSection run;

  static ExperimentConfig from_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);

  // Applies one "section.key" assignment (used by sweeps and CLI
  // overrides). Throws ConfigError for unknown names or bad values.
  void set(const std::string& dotted_key, const std::string& value);

  // Every key in a fixed order; parse(canonical_text()) round-trips.
  std::string canonical_text() const;
  std::uint64_t hash() const;  // FNV-1a over the canonical text

  void validate() const;  // throws ConfigError naming the offending field
};

const std::vector<std::string>& known_agent_types();

}  // namespace ssrank::harness
