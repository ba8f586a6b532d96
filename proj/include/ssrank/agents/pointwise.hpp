#pragma once

#include "ssrank/agents/agent.hpp"
#include "ssrank/nn.hpp"

namespace ssrank::agents {

struct PointwiseLtrConfig {
  std::vector<int> hidden{200, 100};
  double alpha = 1e-3;  // Adam step size
  double noise_scale = 0.1;
  std::int64_t noise_half_life = 20000;
  // weight of non-converting sessions relative to price-weighted positives
  double negative_weight = 0.05;
};

// Point-wise LTR baseline: a network maps state features to a ranking
// weight vector, trained by logistic regression on session outcomes.
// Pages of converting sessions are positives weighted by the deal
// price; all other pages are negatives.
class PointwiseLtrAgent : public WeightVectorAgent {
 public:
  PointwiseLtrAgent(const env::FeatureContext& context, PointwiseLtrConfig config,
                    Rng& init_rng);

  RankingAction select_action(const std::vector<double>& state_features,
                              bool explore, Rng& rng) override;
  void observe(const sim::SessionTrajectory& trajectory) override;

  void export_params(ParamStore& store) const override;
  void import_params(const ParamStore& store) override;

  // Conversion propensity the logistic objective assigns to showing
  // this page in this state.
  double page_score(const std::vector<double>& state_features,
                    const ItemPage& page) const;
  const nn::Mlp& net() const { return net_; }

 private:
  std::vector<double> page_mean_features(const ItemPage& page) const;

  PointwiseLtrConfig config_;
  nn::Mlp net_;
  nn::AdamState adam_;
};

// Uniform-random weight vectors; the reference do-nothing policy.
class RandomAgent : public WeightVectorAgent {
 public:
  explicit RandomAgent(const env::FeatureContext& context);

  RankingAction select_action(const std::vector<double>& state_features,
                              bool explore, Rng& rng) override;
};

}  // namespace ssrank::agents
