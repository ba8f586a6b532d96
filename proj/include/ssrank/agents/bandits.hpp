#pragma once

#include <cstdint>
#include <optional>

#include "ssrank/agents/agent.hpp"

namespace ssrank::agents {

enum class UcbVariant { Ucb1, KlUcb };

// Per-item click statistics for the cascade bandits.
struct BanditState {
  std::vector<double> pulls;  // indexed by item id
  std::vector<double> means;
  std::int64_t rounds = 0;

  explicit BanditState(int n_items = 0)
      : pulls(n_items, 0.0), means(n_items, 0.0) {}
};

double ucb1_index(double mean, double count, std::int64_t t);
double klucb_index(double mean, double count, std::int64_t t);

// Ranks the pool by upper confidence index; unpulled items come first,
// ties break by ascending item id.
ItemPage cascade_ucb_rank(const BanditState& state, const std::vector<Item>& pool,
                          int k, std::int64_t t, UcbVariant variant,
                          int step = 1);

// Cascade feedback: items above the click observe no-click, the clicked
// item observes a click, items below are not updated. Without a click
// every shown item observes no-click.
void cascade_update(BanditState& state, const ItemPage& page,
                    std::optional<int> click_position);

class CascadeUcbAgent : public Agent {
 public:
  CascadeUcbAgent(const env::FeatureContext& context, int n_items,
                  UcbVariant variant);

  Decision act(const SessionState& state, const std::vector<Item>& pool,
               int step, Rng& rng) override;
  void click_feedback(const ItemPage& page,
                      std::optional<int> click_position) override;
  bool wants_clicks() const override { return true; }

  void export_params(ParamStore& store) const override;
  void import_params(const ParamStore& store) override;

  const BanditState& state() const { return state_; }

 private:
  env::FeatureContext context_;
  UcbVariant variant_;
  BanditState state_;
};

// One exponential-weights expert per position; each samples from the
// items still available at its position.
struct RankedExp3State {
  int n_items = 0;
  int k = 0;
  std::vector<double> weights;  // k x n_items, row-major

  RankedExp3State() = default;
  RankedExp3State(int k_, int n_items_)
      : n_items(n_items_), k(k_),
        weights(static_cast<std::size_t>(k_) * n_items_, 1.0) {}

  double& weight(int position, int item_id) {
    return weights[static_cast<std::size_t>(position) * n_items + item_id];
  }
  double weight(int position, int item_id) const {
    return weights[static_cast<std::size_t>(position) * n_items + item_id];
  }
};

struct Exp3Draw {
  ItemPage page;
  std::vector<double> probabilities;  // of the drawn item, per position
};

// Samples one item per position from the exploration-mixed weight
// distribution over the remaining pool.
Exp3Draw ranked_exp3_rank(const RankedExp3State& state,
                          const std::vector<Item>& pool, double mixing,
                          Rng& rng, int step = 1);

// Importance-weighted update of the drawn item at the clicked position;
// rewards are clipped to [0,1] and positions without a click see 0.
void ranked_exp3_update(RankedExp3State& state, const Exp3Draw& draw,
                        std::optional<int> click_position, double eta);

class RankedExp3Agent : public Agent {
 public:
  RankedExp3Agent(const env::FeatureContext& context, int n_items, double eta,
                  double mixing);

  Decision act(const SessionState& state, const std::vector<Item>& pool,
               int step, Rng& rng) override;
  void click_feedback(const ItemPage& page,
                      std::optional<int> click_position) override;
  bool wants_clicks() const override { return true; }

  void export_params(ParamStore& store) const override;
  void import_params(const ParamStore& store) override;

  const RankedExp3State& state() const { return state_; }

 private:
  env::FeatureContext context_;
  double eta_;
  double mixing_;
  RankedExp3State state_;
  Exp3Draw last_draw_;
};

}  // namespace ssrank::agents
