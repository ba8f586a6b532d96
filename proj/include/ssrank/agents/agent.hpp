#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ssrank/core.hpp"
#include "ssrank/envmodel.hpp"
#include "ssrank/param_store.hpp"
#include "ssrank/sim.hpp"

namespace ssrank::agents {

// Actor/critic state features: page blocks of the last `window` pages
// plus a trailing query slot (set even before any page is displayed).
// Throws std::invalid_argument for terminal states.
std::vector<double> featurize_state(const SessionState& state,
                                    const env::FeatureContext& context);

using StateFeaturizer = std::function<std::vector<double>(const SessionState&)>;

// Uniform agent surface consumed by the experiment harness: produce the
// next page, then observe the finished trajectory (RL/LTR agents) or
// per-page click feedback (bandit agents).
class Agent {
 public:
  struct Decision {
    ItemPage page;
    RankingAction action;  // empty weights for list-ranking agents
  };

  virtual ~Agent() = default;

  virtual Decision act(const SessionState& state, const std::vector<Item>& pool,
                       int step, Rng& rng) = 0;
  virtual void observe(const sim::SessionTrajectory& trajectory) {}
  virtual void click_feedback(const ItemPage& page,
                              std::optional<int> click_position) {}
  virtual bool wants_clicks() const { return false; }

  // Called with the absolute session index before each session; drives
  // exploration schedules across checkpoint resumes.
  virtual void begin_session(std::int64_t session_index) {}

  virtual void export_params(ParamStore& store) const {}
  virtual void import_params(const ParamStore& store) {}
};

// Agents that rank by scoring items against a weight vector.
class WeightVectorAgent : public Agent {
 public:
  WeightVectorAgent(env::FeatureContext context, double noise_scale,
                    std::int64_t noise_half_life);

  Decision act(const SessionState& state, const std::vector<Item>& pool,
               int step, Rng& rng) final;

  // Deterministic policy action; with explore set, adds zero-mean
  // gaussian noise and clamps every component to [-1, 1].
  virtual RankingAction select_action(const std::vector<double>& state_features,
                                      bool explore, Rng& rng) = 0;

  void set_explore(bool on) { explore_ = on; }
  bool exploring() const { return explore_; }
  void begin_session(std::int64_t session_index) override;
  double current_noise_scale() const { return noise_scale_ * noise_factor_; }

  void set_state_featurizer(StateFeaturizer featurizer);
  const StateFeaturizer& state_featurizer() const { return featurizer_; }

 protected:
  RankingAction with_exploration(std::vector<double> base, bool explore,
                                 Rng& rng) const;

  env::FeatureContext context_;
  StateFeaturizer featurizer_;
  bool explore_ = true;
  double noise_scale_ = 0.1;
  std::int64_t noise_half_life_ = 20000;  // sessions; 0 disables decay
  double noise_factor_ = 1.0;
};

}  // namespace ssrank::agents
