#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ssrank {

using Rng = std::mt19937_64;
using FeatureVector = std::vector<double>;

// One catalog entry. Feature components are normalized attributes;
// component 0 is the price attribute, component 1 is quality.
struct Item {
  int id = 0;
  FeatureVector features;
};

// Linear scoring weights: items are ranked by the inner product of
// their feature vector with these weights.
struct RankingAction {
  std::vector<double> weights;
};

// Inner product of item features and action weights.
// Throws std::invalid_argument on dimension mismatch.
double score(const Item& item, const RankingAction& action);

// One displayed page: at most K items, ordered by non-increasing score
// under the action that produced it. step is 1-based.
struct ItemPage {
  std::vector<Item> items;
  int step = 0;
};

// The query plus every page displayed so far. step() == pages shown.
struct ItemPageHistory {
  std::string query;
  std::vector<ItemPage> pages;
  int step() const { return static_cast<int>(pages.size()); }
};

enum class StateKind { Continuation, Conversion, Abandon };

const char* to_string(StateKind kind);

// Session state: the user either keeps browsing the history, bought an
// item (with the realized deal price), or left.
struct SessionState {
  StateKind kind = StateKind::Continuation;
  ItemPageHistory history;
  double deal_price = 0.0;  // meaningful for Conversion only

  static SessionState continuation(ItemPageHistory h);
  static SessionState conversion(ItemPageHistory h, double deal_price);
  static SessionState abandon(ItemPageHistory h);

  bool terminal() const { return kind != StateKind::Continuation; }
};

// One environment step. next_history is the page history produced by
// the action; next_state embeds the same history.
struct TransitionSample {
  SessionState state;
  RankingAction action;
  double reward = 0.0;
  SessionState next_state;
  ItemPageHistory next_history;
};

// Top-K selection by descending score, ties broken by ascending item id.
// Returns min(k, pool size) items. Throws on empty pool or k < 1.
ItemPage top_k_list(const std::vector<Item>& pool, const RankingAction& action,
                    int k, int step = 1);

// Catalog minus every item displayed in the history. Throws if the
// history references an item that is not in the catalog.
std::vector<Item> remaining_items(const std::vector<Item>& catalog,
                                  const ItemPageHistory& history);

// Returns the history extended by one page; the input is not modified.
// The page step must be history.step() + 1 and its items must not
// already appear in the history.
ItemPageHistory advance_history(const ItemPageHistory& history,
                                const ItemPage& page);

// Maximal decision step: ceil(catalog_size / k).
int max_steps(int catalog_size, int k);

// Deal price of the next state if it is a conversion, 0 otherwise.
// The originating state must be nonterminal.
double reward(const SessionState& state, const RankingAction& action,
              const SessionState& next_state);

// Per-step conversion/abandon/continuation probabilities and expected
// deal price of the chain induced by one fixed policy. Index i holds
// the step-(i+1) values; b+l+c = 1 at every step and c is 0 at the
// final step.
struct TabularSSMDP {
  std::vector<double> b;
  std::vector<double> l;
  std::vector<double> c;
  std::vector<double> m;

  int T() const { return static_cast<int>(b.size()); }
  void validate() const;  // throws std::invalid_argument
};

// Expected gross merchandise volume of a session:
//   b_1 m_1 + sum_{k=2..T} (prod_{j<k} c_j) b_k m_k
double oracle_gmv(const TabularSSMDP& mdp);

// State value of the continuation state at from_step under discount
// gamma: b_{t+1} m_{t+1} + sum_{k>=2} gamma^{k-1} (prod c) b_{t+k} m_{t+k}.
double oracle_value(const TabularSSMDP& mdp, double gamma, int from_step);

// Backward recursion q_t = b_{t+1} m_{t+1} + gamma c_{t+1} q_{t+1},
// q_T = 0.
double oracle_q(const TabularSSMDP& mdp, int step, double gamma);

}  // namespace ssrank
