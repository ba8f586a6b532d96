#include "ssrank/agents/ddpg.hpp"

#include <cmath>
#include <stdexcept>

namespace ssrank::agents {

namespace {

std::vector<int> layer_sizes(int input, const std::vector<int>& hidden,
                             int output) {
  std::vector<int> sizes;
  sizes.push_back(input);
  for (int h : hidden) sizes.push_back(h);
  sizes.push_back(output);
  return sizes;
}

}  // namespace

DdpgAgent::DdpgAgent(const env::FeatureContext& context, DdpgConfig config,
                     Rng& init_rng)
    : WeightVectorAgent(context, config.noise_scale, config.noise_half_life),
      config_(std::move(config)),
      state_dims_(context.state_dims()),
      buffer_(config_.buffer_capacity),
      own_rng_(0) {
  if (config_.batch_size < 1) {
    throw std::invalid_argument("DdpgAgent: batch_size must be >= 1");
  }
  nn::Mlp actor(
      layer_sizes(state_dims_, config_.actor_hidden, context.n_features),
      nn::Activation::Tanh);
  actor.init(init_rng);
  nn::Mlp critic(
      layer_sizes(state_dims_ + context.n_features, config_.critic_hidden, 1),
      nn::Activation::Identity);
  critic.init(init_rng);
  actor_ = nn::TargetPair(std::move(actor), config_.tau);
  critic_ = nn::TargetPair(std::move(critic), config_.tau);
  adam_actor_ = nn::AdamState(actor_.live.param_count(), config_.alpha_actor);
  adam_critic_ = nn::AdamState(critic_.live.param_count(), config_.alpha_critic);
}

std::vector<double> DdpgAgent::critic_input(std::span<const double> state,
                                            std::span<const double> action) const {
  std::vector<double> input;
  input.reserve(state.size() + action.size());
  input.insert(input.end(), state.begin(), state.end());
  input.insert(input.end(), action.begin(), action.end());
  return input;
}

RankingAction DdpgAgent::select_action(const std::vector<double>& state_features,
                                       bool explore, Rng& rng) {
  return with_exploration(actor_.live.forward(state_features), explore, rng);
}

double DdpgAgent::q_value(const std::vector<double>& state_features,
                          const RankingAction& action) const {
  return critic_.live.forward(critic_input(state_features, action.weights))[0];
}

void DdpgAgent::observe(const sim::SessionTrajectory& trajectory) {
  for (const TransitionSample& sample : trajectory.samples) {
    CachedTransition cached;
    cached.state = featurizer_(sample.state);
    cached.action = sample.action.weights;
    cached.reward = sample.reward;
    cached.terminal = sample.next_state.terminal();
    if (!cached.terminal) {
      cached.next_state = featurizer_(sample.next_state);
    }
    buffer_.push(std::move(cached));
  }
  if (buffer_.size() < config_.batch_size) return;

  Rng& rng = update_rng_ ? *update_rng_ : own_rng_;
  update_credit_ +=
      config_.updates_per_step * static_cast<double>(trajectory.samples.size());
  while (update_credit_ >= 1.0) {
    update_credit_ -= 1.0;
    gradient_step(buffer_.sample_indices(config_.batch_size, rng));
  }
}

void DdpgAgent::gradient_step(const std::vector<std::size_t>& batch_indices) {
  const double batch = static_cast<double>(batch_indices.size());
  std::vector<double> critic_grad(critic_.live.param_count(), 0.0);
  std::vector<double> actor_grad(actor_.live.param_count(), 0.0);
  std::vector<double> critic_in_grad(critic_.live.input_size());
  std::vector<double> actor_in_grad(actor_.live.input_size());

  for (std::size_t idx : batch_indices) {
    const CachedTransition& tr = buffer_.raw(idx);
    double target = tr.reward;
    if (!tr.terminal && config_.gamma > 0.0) {
      const std::vector<double> next_action = actor_.target.forward(tr.next_state);
      target += config_.gamma *
                critic_.target.forward(critic_input(tr.next_state, next_action))[0];
    }
    nn::Trace critic_trace;
    const double q = critic_.live.forward(critic_input(tr.state, tr.action),
                                          critic_trace)[0];
    // d/dw of (q - target)^2 / (2 batch)
    const double seed = (q - target) / batch;
    critic_.live.backward(critic_trace, std::span<const double>(&seed, 1),
                          critic_grad, critic_in_grad);

    // policy gradient at the on-policy action
    nn::Trace actor_trace;
    const std::vector<double> pi = actor_.live.forward(tr.state, actor_trace);
    nn::Trace q_trace;
    critic_.live.forward(critic_input(tr.state, pi), q_trace);
    std::vector<double> scratch(critic_.live.param_count(), 0.0);
    const double unit = 1.0;
    critic_.live.backward(q_trace, std::span<const double>(&unit, 1), scratch,
                          critic_in_grad);
    std::vector<double> action_grad(context_.n_features);
    for (int j = 0; j < context_.n_features; ++j) {
      // ascend Q: negate for the Adam descent step
      action_grad[j] = -critic_in_grad[state_dims_ + j] / batch;
    }
    actor_.live.backward(actor_trace, action_grad, actor_grad, actor_in_grad);
  }

  adam_critic_.step(critic_.live.params(), critic_grad);
  adam_actor_.step(actor_.live.params(), actor_grad);
  critic_.soft_update();
  actor_.soft_update();
}

void DdpgAgent::export_params(ParamStore& store) const {
  actor_.live.export_params(store, "ddpg.actor");
  actor_.target.export_params(store, "ddpg.actor_target");
  critic_.live.export_params(store, "ddpg.critic");
  critic_.target.export_params(store, "ddpg.critic_target");
  adam_actor_.export_params(store, "ddpg.adam_actor");
  adam_critic_.export_params(store, "ddpg.adam_critic");
  store.put_scalar("ddpg.update_credit", update_credit_);

  // replay ring, in raw storage order so resumed sampling is identical
  const std::size_t count = buffer_.size();
  std::vector<double> states, actions, next_states;
  std::vector<double> rewards, terminals;
  states.reserve(count * state_dims_);
  actions.reserve(count * context_.n_features);
  next_states.reserve(count * state_dims_);
  for (std::size_t i = 0; i < count; ++i) {
    const CachedTransition& tr = buffer_.raw(i);
    states.insert(states.end(), tr.state.begin(), tr.state.end());
    actions.insert(actions.end(), tr.action.begin(), tr.action.end());
    if (tr.terminal) {
      next_states.insert(next_states.end(), state_dims_, 0.0);
    } else {
      next_states.insert(next_states.end(), tr.next_state.begin(),
                         tr.next_state.end());
    }
    rewards.push_back(tr.reward);
    terminals.push_back(tr.terminal ? 1.0 : 0.0);
  }
  store.put("ddpg.buffer.states", std::move(states));
  store.put("ddpg.buffer.actions", std::move(actions));
  store.put("ddpg.buffer.next_states", std::move(next_states));
  store.put("ddpg.buffer.rewards", std::move(rewards));
  store.put("ddpg.buffer.terminals", std::move(terminals));
  store.put_scalar("ddpg.buffer.head", static_cast<double>(buffer_.head()));
}

void DdpgAgent::import_params(const ParamStore& store) {
  actor_.live.import_params(store, "ddpg.actor");
  actor_.target.import_params(store, "ddpg.actor_target");
  critic_.live.import_params(store, "ddpg.critic");
  critic_.target.import_params(store, "ddpg.critic_target");
  adam_actor_.import_params(store, "ddpg.adam_actor");
  adam_critic_.import_params(store, "ddpg.adam_critic");
  update_credit_ = store.scalar("ddpg.update_credit");

  const auto& rewards = store.get("ddpg.buffer.rewards");
  const auto& terminals = store.get("ddpg.buffer.terminals");
  const auto& states = store.get("ddpg.buffer.states");
  const auto& actions = store.get("ddpg.buffer.actions");
  const auto& next_states = store.get("ddpg.buffer.next_states");
  const std::size_t count = rewards.size();
  if (states.size() != count * state_dims_ ||
      actions.size() != count * static_cast<std::size_t>(context_.n_features) ||
      next_states.size() != count * state_dims_ || terminals.size() != count) {
    throw std::invalid_argument("DdpgAgent: inconsistent buffer arrays");
  }
  std::vector<CachedTransition> items(count);
  for (std::size_t i = 0; i < count; ++i) {
    CachedTransition& tr = items[i];
    tr.state.assign(states.begin() + i * state_dims_,
                    states.begin() + (i + 1) * state_dims_);
    tr.action.assign(actions.begin() + i * context_.n_features,
                     actions.begin() + (i + 1) * context_.n_features);
    tr.reward = rewards[i];
    tr.terminal = terminals[i] != 0.0;
    if (!tr.terminal) {
      tr.next_state.assign(next_states.begin() + i * state_dims_,
                           next_states.begin() + (i + 1) * state_dims_);
    }
  }
  buffer_.restore(std::move(items),
                  static_cast<std::size_t>(store.scalar("ddpg.buffer.head")));
}

}  // namespace ssrank::agents
