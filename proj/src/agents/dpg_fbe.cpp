#include "ssrank/agents/dpg_fbe.hpp"

#include <cmath>
#include <stdexcept>

namespace ssrank::agents {

double fbe_target(double b, double m, double c, double q_next) {
  return b * m + c * q_next;
}

LearnedHistoryModel::LearnedHistoryModel(const env::FeatureContext& context,
                                         double outcome_step, double price_step)
    : context_(context),
      outcome_(context.history_dims(), outcome_step),
      price_(context.history_dims(), price_step) {}

HistoryModel::Estimate LearnedHistoryModel::estimate(
    const ItemPageHistory& history) const {
  const std::vector<double> feats = env::featurize_history(history, context_);
  const env::OutcomeProbs probs = outcome_.predict(feats);
  return Estimate{probs.b, probs.c, price_.predict(feats)};
}

void LearnedHistoryModel::learn(const ItemPageHistory& history,
                                env::OutcomeLabel label, double observed_price) {
  const std::vector<double> feats = env::featurize_history(history, context_);
  outcome_.update(feats, label);
  if (label == env::OutcomeLabel::Conversion) {
    price_.update(feats, observed_price);
  }
}

void LearnedHistoryModel::export_params(ParamStore& store,
                                        const std::string& prefix) const {
  outcome_.export_params(store, prefix + ".outcome");
  price_.export_params(store, prefix + ".price");
}

void LearnedHistoryModel::import_params(const ParamStore& store,
                                        const std::string& prefix) {
  outcome_.import_params(store, prefix + ".outcome");
  price_.import_params(store, prefix + ".price");
}

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

DpgFbeAgent::DpgFbeAgent(const env::FeatureContext& context, DpgFbeConfig config,
                         Rng& init_rng)
    : WeightVectorAgent(context, config.noise_scale, config.noise_half_life),
      config_(std::move(config)),
      model_(std::make_unique<LearnedHistoryModel>(context, config_.outcome_step,
                                                   config_.price_step)) {
  if (config_.optimizer != "sgd" && config_.optimizer != "adam") {
    throw std::invalid_argument("DpgFbeAgent: optimizer must be sgd or adam");
  }
  rebuild_networks(context.state_dims(), init_rng);
}

void DpgFbeAgent::rebuild_networks(int state_dims, Rng& init_rng) {
  state_dims_ = state_dims;
  nn::Mlp actor(layer_sizes(state_dims, config_.actor_hidden, context_.n_features),
                nn::Activation::Tanh);
  actor.init(init_rng);
  nn::Mlp critic(
      layer_sizes(state_dims + context_.n_features, config_.critic_hidden, 1),
      nn::Activation::Identity);
  critic.init(init_rng);
  actor_ = nn::TargetPair(std::move(actor), config_.tau);
  critic_ = nn::TargetPair(std::move(critic), config_.tau);
  adam_actor_ = nn::AdamState(actor_.live.param_count(), config_.alpha_actor);
  adam_critic_ = nn::AdamState(critic_.live.param_count(), config_.alpha_critic);
}

void DpgFbeAgent::set_history_model(std::unique_ptr<HistoryModel> model) {
  model_ = std::move(model);
}

std::vector<double> DpgFbeAgent::critic_input(
    std::span<const double> state, std::span<const double> action) const {
  std::vector<double> input;
  input.reserve(state.size() + action.size());
  input.insert(input.end(), state.begin(), state.end());
  input.insert(input.end(), action.begin(), action.end());
  return input;
}

RankingAction DpgFbeAgent::select_action(
    const std::vector<double>& state_features, bool explore, Rng& rng) {
  return with_exploration(actor_.live.forward(state_features), explore, rng);
}

double DpgFbeAgent::q_value(const std::vector<double>& state_features,
                            const RankingAction& action) const {
  return critic_.live.forward(critic_input(state_features, action.weights))[0];
}

std::vector<double> DpgFbeAgent::policy(
    const std::vector<double>& state_features) const {
  return actor_.live.forward(state_features);
}

void DpgFbeAgent::observe(const sim::SessionTrajectory& trajectory) {
  const std::size_t steps = trajectory.samples.size();
  if (steps == 0) return;
  const bool use_adam = config_.optimizer == "adam";

  std::vector<double> dw(critic_.live.param_count(), 0.0);
  std::vector<double> dtheta(actor_.live.param_count(), 0.0);
  std::vector<double> scratch_params(critic_.live.param_count());
  std::vector<double> critic_in_grad(critic_.live.input_size());
  bool finite = true;

  for (const TransitionSample& sample : trajectory.samples) {
    const ItemPageHistory& next_history = sample.next_history;
    model_->learn(next_history, env::label_of(sample.next_state), sample.reward);

    HistoryModel::Estimate est = model_->estimate(next_history);
    if (next_history.step() >= context_.max_step) {
      est.c = 0.0;  // the session cannot continue past the horizon
    }
    double q_next = 0.0;
    if (est.c > 0.0 && config_.gamma > 0.0) {
      const std::vector<double> next_feats =
          featurizer_(SessionState::continuation(next_history));
      const std::vector<double> next_action = actor_.target.forward(next_feats);
      q_next = critic_.target.forward(critic_input(next_feats, next_action))[0];
    }

    const std::vector<double> state_feats = featurizer_(sample.state);
    const std::vector<double> executed_in =
        critic_input(state_feats, sample.action.weights);
    nn::Trace critic_trace;
    const double q_sa = critic_.live.forward(executed_in, critic_trace)[0];
    const double target = fbe_target(est.b, est.m, config_.gamma * est.c, q_next);
    const double delta = target - q_sa;
    if (!std::isfinite(delta)) {
      finite = false;
      break;
    }

    // critic accumulation: dw += (alpha_w) * delta * grad_w Q(s, a)
    const double critic_seed = use_adam ? delta : config_.alpha_critic * delta;
    critic_.live.backward(critic_trace, std::span<const double>(&critic_seed, 1),
                          dw, critic_in_grad);

    if (!actor_frozen_) {
      // action gradient of the live critic, by default at the executed action
      std::vector<double> on_policy_action;
      nn::Trace on_policy_trace;
      const double unit_seed = 1.0;
      std::fill(scratch_params.begin(), scratch_params.end(), 0.0);
      if (config_.grad_at_executed_action) {
        critic_.live.backward(critic_trace, std::span<const double>(&unit_seed, 1),
                              scratch_params, critic_in_grad);
      } else {
        on_policy_action = actor_.live.forward(state_feats);
        critic_.live.forward(critic_input(state_feats, on_policy_action),
                             on_policy_trace);
        critic_.live.backward(on_policy_trace,
                              std::span<const double>(&unit_seed, 1),
                              scratch_params, critic_in_grad);
      }
      // action slice of the critic input gradient, scaled by alpha_theta
      std::vector<double> action_grad(context_.n_features);
      for (int j = 0; j < context_.n_features; ++j) {
        const double g = critic_in_grad[state_dims_ + j];
        action_grad[j] = use_adam ? g : config_.alpha_actor * g;
      }
      nn::Trace actor_trace;
      actor_.live.forward(state_feats, actor_trace);
      std::vector<double> actor_in_grad(state_dims_);
      actor_.live.backward(actor_trace, action_grad, dtheta, actor_in_grad);
    }
  }

  if (!finite) {
    ++skipped_sessions_;
    return;
  }

  const double inv_t = 1.0 / static_cast<double>(steps);
  if (use_adam) {
    for (double& g : dw) g *= -inv_t;  // Adam descends; the update ascends
    adam_critic_.step(critic_.live.params(), dw);
    if (!actor_frozen_) {
      for (double& g : dtheta) g *= -inv_t;
      adam_actor_.step(actor_.live.params(), dtheta);
    }
  } else {
    auto& w = critic_.live.params();
    bool ok = true;
    for (double g : dw) {
      if (!std::isfinite(g)) ok = false;
    }
    for (double g : dtheta) {
      if (!std::isfinite(g)) ok = false;
    }
    if (!ok) {
      ++skipped_sessions_;
      return;
    }
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += dw[i] * inv_t;
    if (!actor_frozen_) {
      auto& theta = actor_.live.params();
      for (std::size_t i = 0; i < theta.size(); ++i) {
        theta[i] += dtheta[i] * inv_t;
      }
    }
  }
  critic_.soft_update();
  actor_.soft_update();
}

void DpgFbeAgent::export_params(ParamStore& store) const {
  actor_.live.export_params(store, "dpgfbe.actor");
  actor_.target.export_params(store, "dpgfbe.actor_target");
  critic_.live.export_params(store, "dpgfbe.critic");
  critic_.target.export_params(store, "dpgfbe.critic_target");
  adam_actor_.export_params(store, "dpgfbe.adam_actor");
  adam_critic_.export_params(store, "dpgfbe.adam_critic");
  model_->export_params(store, "dpgfbe.model");
  store.put_scalar("dpgfbe.skipped", static_cast<double>(skipped_sessions_));
}

void DpgFbeAgent::import_params(const ParamStore& store) {
  actor_.live.import_params(store, "dpgfbe.actor");
  actor_.target.import_params(store, "dpgfbe.actor_target");
  critic_.live.import_params(store, "dpgfbe.critic");
  critic_.target.import_params(store, "dpgfbe.critic_target");
  adam_actor_.import_params(store, "dpgfbe.adam_actor");
  adam_critic_.import_params(store, "dpgfbe.adam_critic");
  model_->import_params(store, "dpgfbe.model");
  skipped_sessions_ = static_cast<std::int64_t>(store.scalar("dpgfbe.skipped"));
}

}  // namespace ssrank::agents
