#pragma once

#include "ssrank/agents/agent.hpp"
#include "ssrank/nn.hpp"

namespace ssrank::agents {

struct DdpgConfig {
  std::vector<int> actor_hidden{200, 100};
  std::vector<int> critic_hidden{200, 100};
  double alpha_actor = 1e-4;
  double alpha_critic = 1e-3;
  double gamma = 1.0;
  double tau = 1e-3;
  double noise_scale = 0.1;
  std::int64_t noise_half_life = 20000;
  std::size_t buffer_capacity = 100000;
  std::size_t batch_size = 32;
  // gradient steps per environment step once the buffer holds a batch
  double updates_per_step = 1.0;
};

// Transition cached as fixed-width feature vectors for replay.
struct CachedTransition {
  std::vector<double> state;
  std::vector<double> action;
  double reward = 0.0;
  std::vector<double> next_state;  // empty when terminal
  bool terminal = false;
};

// Deep deterministic policy gradient baseline: replay buffer, sampled
// one-step targets r + gamma * Q'(s', pi'(s')), Adam on both networks,
// soft target updates after every gradient step.
class DdpgAgent : public WeightVectorAgent {
 public:
  DdpgAgent(const env::FeatureContext& context, DdpgConfig config, Rng& init_rng);

  RankingAction select_action(const std::vector<double>& state_features,
                              bool explore, Rng& rng) override;
  void observe(const sim::SessionTrajectory& trajectory) override;

  void export_params(ParamStore& store) const override;
  void import_params(const ParamStore& store) override;

  double q_value(const std::vector<double>& state_features,
                 const RankingAction& action) const;
  const nn::ReplayBuffer<CachedTransition>& buffer() const { return buffer_; }
  const DdpgConfig& config() const { return config_; }
  std::int64_t skipped_updates() const {
    return adam_actor_.skipped + adam_critic_.skipped;
  }

  // Training randomness (batch sampling) is drawn from this stream.
  void set_update_rng(Rng* rng) { update_rng_ = rng; }

  void gradient_step(const std::vector<std::size_t>& batch_indices);

 private:
  std::vector<double> critic_input(std::span<const double> state,
                                   std::span<const double> action) const;

  DdpgConfig config_;
  int state_dims_ = 0;
  nn::TargetPair actor_;
  nn::TargetPair critic_;
  nn::AdamState adam_actor_;
  nn::AdamState adam_critic_;
  nn::ReplayBuffer<CachedTransition> buffer_;
  double update_credit_ = 0.0;
  Rng own_rng_;
  Rng* update_rng_ = nullptr;
};

}  // namespace ssrank::agents
