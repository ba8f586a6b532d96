#pragma once

#include <memory>
#include <string>

#include "ssrank/agents/agent.hpp"
#include "ssrank/nn.hpp"

namespace ssrank::agents {

// Full-backup critic target: b * m + c * q_next. Callers fold the
// discount into the continuation weight.
double fbe_target(double b, double m, double c, double q_next);

// Conversion/continuation probability and expected deal price estimates
// of item page histories, as consumed by the full-backup target.
class HistoryModel {
 public:
  struct Estimate {
    double b;
    double c;
    double m;
  };

  virtual ~HistoryModel() = default;
  virtual Estimate estimate(const ItemPageHistory& history) const = 0;
  virtual void learn(const ItemPageHistory& history, env::OutcomeLabel label,
                     double observed_price) = 0;
  virtual void export_params(ParamStore& store, const std::string& prefix) const = 0;
  virtual void import_params(const ParamStore& store, const std::string& prefix) = 0;
};

// Softmax outcome classifier plus linear price head over history features.
class LearnedHistoryModel : public HistoryModel {
 public:
  LearnedHistoryModel(const env::FeatureContext& context, double outcome_step,
                      double price_step);

  Estimate estimate(const ItemPageHistory& history) const override;
  void learn(const ItemPageHistory& history, env::OutcomeLabel label,
             double observed_price) override;
  void export_params(ParamStore& store, const std::string& prefix) const override;
  void import_params(const ParamStore& store, const std::string& prefix) override;

  const env::OutcomeClassifier& outcome() const { return outcome_; }
  const env::PriceModel& price() const { return price_; }

 private:
  env::FeatureContext context_;
  env::OutcomeClassifier outcome_;
  env::PriceModel price_;
};

struct DpgFbeConfig {
  std::vector<int> actor_hidden{200, 100};
  std::vector<int> critic_hidden{200, 100};
  double alpha_actor = 1e-3;
  double alpha_critic = 1e-2;
  double gamma = 1.0;
  double tau = 1e-3;
  double noise_scale = 0.1;
  std::int64_t noise_half_life = 20000;
  // Evaluate the action gradient at the executed (noisy) action, as the
  // update rule states it; the alternative uses the on-policy action.
  bool grad_at_executed_action = true;
  // "sgd" applies the session-averaged accumulators directly;
  // "adam" feeds the session-averaged gradients to Adam instead.
  std::string optimizer = "sgd";
  double outcome_step = 0.1;
  double price_step = 0.1;
};

// Deterministic policy gradient with full-backup critic targets.
// Actor and critic updates accumulate over the session and apply once,
// averaged by the session length; bootstrap terms use target networks.
class DpgFbeAgent : public WeightVectorAgent {
 public:
  DpgFbeAgent(const env::FeatureContext& context, DpgFbeConfig config,
              Rng& init_rng);

  // Replaces the learned b/c/m model (e.g. with exact tabular values).
  void set_history_model(std::unique_ptr<HistoryModel> model);
  // Replaces the state featurizer; state_dims must match the new map.
  void rebuild_networks(int state_dims, Rng& init_rng);

  RankingAction select_action(const std::vector<double>& state_features,
                              bool explore, Rng& rng) override;
  void observe(const sim::SessionTrajectory& trajectory) override;

  void export_params(ParamStore& store) const override;
  void import_params(const ParamStore& store) override;

  double q_value(const std::vector<double>& state_features,
                 const RankingAction& action) const;
  std::vector<double> policy(const std::vector<double>& state_features) const;

  const nn::Mlp& actor() const { return actor_.live; }
  const nn::Mlp& critic() const { return critic_.live; }
  nn::Mlp& mutable_actor() { return actor_.live; }
  HistoryModel& history_model() { return *model_; }
  std::int64_t skipped_sessions() const { return skipped_sessions_; }
  const DpgFbeConfig& config() const { return config_; }

  // Freezes the actor so the critic can be evaluated under a fixed policy.
  void set_actor_frozen(bool frozen) { actor_frozen_ = frozen; }

 private:
  std::vector<double> critic_input(std::span<const double> state,
                                   std::span<const double> action) const;

  DpgFbeConfig config_;
  int state_dims_ = 0;
  nn::TargetPair actor_;
  nn::TargetPair critic_;
  nn::AdamState adam_actor_;
  nn::AdamState adam_critic_;
  std::unique_ptr<HistoryModel> model_;
  bool actor_frozen_ = false;
  std::int64_t skipped_sessions_ = 0;
};

}  // namespace ssrank::agents
