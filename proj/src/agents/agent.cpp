#include "ssrank/agents/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssrank::agents {

std::vector<double> featurize_state(const SessionState& state,
                                    const env::FeatureContext& context) {
  if (state.terminal()) {
    throw std::invalid_argument("featurize_state: state must be nonterminal");
  }
  const int block = context.page_block_dims();
  std::vector<double> out(context.state_dims(), 0.0);
  const int step = state.history.step();
  const int take = std::min(step, context.window);
  for (int i = 0; i < take; ++i) {
    const ItemPage& page = state.history.pages[step - take + i];
    const int slot = context.window - take + i;
    env::write_page_block(page, context,
                          std::span<double>(out.data() + slot * block, block));
  }
  out.back() = 1.0;  // query slot
  return out;
}

WeightVectorAgent::WeightVectorAgent(env::FeatureContext context,
                                     double noise_scale,
                                     std::int64_t noise_half_life)
    : context_(context),
      noise_scale_(noise_scale),
      noise_half_life_(noise_half_life) {
  featurizer_ = [ctx = context_](const SessionState& state) {
    return featurize_state(state, ctx);
  };
}

void WeightVectorAgent::set_state_featurizer(StateFeaturizer featurizer) {
  featurizer_ = std::move(featurizer);
}

void WeightVectorAgent::begin_session(std::int64_t session_index) {
  if (noise_half_life_ > 0) {
    noise_factor_ =
        std::pow(0.5, static_cast<double>(session_index / noise_half_life_));
  }
}

Agent::Decision WeightVectorAgent::act(const SessionState& state,
                                       const std::vector<Item>& pool, int step,
                                       Rng& rng) {
  const std::vector<double> features = featurizer_(state);
  RankingAction action = select_action(features, explore_, rng);
  Decision decision;
  decision.page = top_k_list(pool, action, context_.page_size, step);
  decision.action = std::move(action);
  return decision;
}

RankingAction WeightVectorAgent::with_exploration(std::vector<double> base,
                                                  bool explore,
                                                  Rng& rng) const {
  if (explore && current_noise_scale() > 0.0) {
    std::normal_distribution<double> noise(0.0, current_noise_scale());
    for (double& w : base) w = std::clamp(w + noise(rng), -1.0, 1.0);
  }
  RankingAction action;
  action.weights = std::move(base);
  return action;
}

}  // namespace ssrank::agents
