#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssrank/core.hpp"

namespace ssrank::sim {

struct CatalogConfig {
  int n_features = 20;
  int catalog_size = 1000;
  int page_size = 10;  // K
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument
};

// Per-feature parameters of the truncated-normal sampling distribution
// on [0,1]; drawn deterministically from the catalog seed.
struct FeatureDistribution {
  std::vector<double> mu;
  std::vector<double> sigma;
};

FeatureDistribution feature_distribution(const CatalogConfig& config);

std::vector<Item> sample_catalog(const CatalogConfig& config, Rng& rng);
std::vector<Item> sample_catalog(const CatalogConfig& config);  // rng from config.seed

// Parametric population model standing in for logged user behavior.
// Page attractiveness drives conversions through a logistic link; the
// leave pressure grows linearly with the step index.
struct UserBehaviorModel {
  FeatureVector preference;      // latent population preference direction
  double attraction_scale = 1.0;
  double base_leave = 0.15;
  double fatigue = 0.02;         // per-step additive leave pressure
  double purchase_gain = 3.0;
  double purchase_offset = 3.0;  // logistic offset, set by calibration
  double price_noise = 0.1;      // multiplicative deal-price noise
  int window = 4;                // recent pages entering the attraction mean

  void validate(int n_features) const;
};

// Mean item score of the page against the population preference.
double page_attraction(const UserBehaviorModel& model, const ItemPage& page);

struct BehaviorProbs {
  double b;  // conversion
  double l;  // abandon
  double c;  // continuation
  double m;  // expected deal price given conversion
};

// Ground-truth outcome distribution for a history of step >= 1.
// At step max_step the continuation mass folds into abandonment.
BehaviorProbs behavior_probs(const UserBehaviorModel& model,
                             const ItemPageHistory& history, int max_step);

enum class OutcomeKind { Purchase, Leave, Continue };

struct Outcome {
  OutcomeKind kind = OutcomeKind::Continue;
  double deal_price = 0.0;  // Purchase only
};

// Deal price realized on a conversion at this page: the price feature of
// one item drawn proportionally to item attractiveness, perturbed by
// zero-mean multiplicative noise, floored at 0.
double sample_deal_price(const UserBehaviorModel& model, const ItemPage& page,
                         Rng& rng);

Outcome user_response(const UserBehaviorModel& model,
                      const ItemPageHistory& history, int max_step, Rng& rng);

struct SessionTrajectory {
  enum class Terminal { Conversion, Abandon, Truncated };

  std::vector<TransitionSample> samples;
  int final_step = 0;
  Terminal terminal = Terminal::Truncated;

  double total_reward() const;
};

const char* to_string(SessionTrajectory::Terminal terminal);

using Policy = std::function<RankingAction(const SessionState&)>;

// Page producer: returns the page for the next step together with the
// ranking action that produced it (empty weights when the producer does
// not rank by a weight vector).
using Pager = std::function<std::pair<ItemPage, RankingAction>(
    const SessionState&, const std::vector<Item>& pool, int step)>;

// Called after every environment step; may consume session randomness
// (e.g. to sample click feedback).
using StepObserver = std::function<void(const TransitionSample&, Rng&)>;

SessionTrajectory run_session_paged(const std::vector<Item>& catalog,
                                    const UserBehaviorModel& model,
                                    const Pager& pager, int page_size, Rng& rng,
                                    const std::string& query = "q",
                                    const StepObserver& observer = nullptr);

// Weight-vector policy entry point: pages are the top-K lists of the
// policy's actions over the remaining items.
SessionTrajectory run_session(const std::vector<Item>& catalog,
                              const UserBehaviorModel& model,
                              const Policy& policy, int page_size, Rng& rng,
                              const std::string& query = "q");

// Solves for the logistic offset that makes the session conversion rate
// under a uniform-random ranking policy approximately target_rate.
double calibrate_purchase_offset(const std::vector<Item>& catalog,
                                 const UserBehaviorModel& model, int page_size,
                                 double target_rate, int probe_sessions,
                                 Rng& rng);

// Per-item click probabilities for the cascade model: the user scans a
// page top-down and clicks the first attractive item. Serves the bandit
// baselines; conversions are not driven by clicks.
class CascadeClickModel {
 public:
  CascadeClickModel() = default;
  explicit CascadeClickModel(std::vector<double> attraction_by_id);

  static CascadeClickModel from_behavior(const std::vector<Item>& catalog,
                                         const UserBehaviorModel& model,
                                         double base, double gain);

  double attraction(int item_id) const;
  // 0-based position of the clicked item, if any.
  std::optional<int> sample_click(const ItemPage& page, Rng& rng) const;
  // Exact probability of at least one click on the page.
  double click_through(const ItemPage& page) const;

 private:
  std::vector<double> attraction_;
};

}  // namespace ssrank::sim
