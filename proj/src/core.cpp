#include "ssrank/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace ssrank {

double score(const Item& item, const RankingAction& action) {
  if (item.features.size() != action.weights.size()) {
    throw std::invalid_argument("score: feature/weight dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < item.features.size(); ++i) {
    s += item.features[i] * action.weights[i];
  }
  return s;
}

const char* to_string(StateKind kind) {
  switch (kind) {
    case StateKind::Continuation: return "continuation";
    case StateKind::Conversion: return "conversion";
    case StateKind::Abandon: return "abandon";
  }
  return "unknown";
}

SessionState SessionState::continuation(ItemPageHistory h) {
  SessionState s;
  s.kind = StateKind::Continuation;
  s.history = std::move(h);
  return s;
}

SessionState SessionState::conversion(ItemPageHistory h, double deal_price) {
  if (h.step() < 1) {
    throw std::invalid_argument("conversion state requires at least one page");
  }
  if (deal_price < 0.0) {
    throw std::invalid_argument("deal price must be nonnegative");
  }
  SessionState s;
  s.kind = StateKind::Conversion;
  s.history = std::move(h);
  s.deal_price = deal_price;
  return s;
}

SessionState SessionState::abandon(ItemPageHistory h) {
  if (h.step() < 1) {
    throw std::invalid_argument("abandon state requires at least one page");
  }
  SessionState s;
  s.kind = StateKind::Abandon;
  s.history = std::move(h);
  return s;
}

ItemPage top_k_list(const std::vector<Item>& pool, const RankingAction& action,
                    int k, int step) {
  if (pool.empty()) {
    throw std::invalid_argument("top_k_list: empty pool");
  }
  if (k < 1) {
    throw std::invalid_argument("top_k_list: k must be >= 1");
  }
  std::vector<std::pair<double, int>> scored;  // (score, index into pool)
  scored.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    scored.emplace_back(score(pool[i], action), static_cast<int>(i));
  }
  auto better = [&pool](const std::pair<double, int>& a,
                        const std::pair<double, int>& b) {
    if (a.first != b.first) return a.first > b.first;
    return pool[a.second].id < pool[b.second].id;
  };
  const std::size_t take = std::min<std::size_t>(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end(), better);

  ItemPage page;
  page.step = step;
  page.items.reserve(take);
  std::unordered_set<int> seen;
  for (std::size_t i = 0; i < take; ++i) {
    const Item& it = pool[scored[i].second];
    if (!seen.insert(it.id).second) {
      throw std::invalid_argument("top_k_list: duplicate item id in pool");
    }
    page.items.push_back(it);
  }
  return page;
}

std::vector<Item> remaining_items(const std::vector<Item>& catalog,
                                  const ItemPageHistory& history) {
  std::unordered_set<int> catalog_ids;
  catalog_ids.reserve(catalog.size());
  for (const Item& it : catalog) catalog_ids.insert(it.id);

  std::unordered_set<int> shown;
  for (const ItemPage& page : history.pages) {
    for (const Item& it : page.items) {
      if (!catalog_ids.count(it.id)) {
        throw std::invalid_argument(
            "remaining_items: history references item not in catalog");
      }
      shown.insert(it.id);
    }
  }
  std::vector<Item> rest;
  rest.reserve(catalog.size() - shown.size());
  for (const Item& it : catalog) {
    if (!shown.count(it.id)) rest.push_back(it);
  }
  return rest;
}

ItemPageHistory advance_history(const ItemPageHistory& history,
                                const ItemPage& page) {
  if (page.step != history.step() + 1) {
    throw std::invalid_argument("advance_history: page step must be history step + 1");
  }
  std::unordered_set<int> shown;
  for (const ItemPage& p : history.pages) {
    for (const Item& it : p.items) shown.insert(it.id);
  }
  for (const Item& it : page.items) {
    if (!shown.insert(it.id).second) {
      throw std::invalid_argument("advance_history: page repeats a displayed item");
    }
  }
  ItemPageHistory next = history;
  next.pages.push_back(page);
  return next;
}

int max_steps(int catalog_size, int k) {
  if (catalog_size < 1 || k < 1) {
    throw std::invalid_argument("max_steps: catalog_size and k must be >= 1");
  }
  return (catalog_size + k - 1) / k;
}

double reward(const SessionState& state, const RankingAction& /*action*/,
              const SessionState& next_state) {
  if (state.terminal()) {
    throw std::invalid_argument("reward: originating state must be nonterminal");
  }
  return next_state.kind == StateKind::Conversion ? next_state.deal_price : 0.0;
}

void TabularSSMDP::validate() const {
  const std::size_t t = b.size();
  if (t < 1) throw std::invalid_argument("TabularSSMDP: T must be >= 1");
  if (l.size() != t || c.size() != t || m.size() != t) {
    throw std::invalid_argument("TabularSSMDP: per-step vectors must share length");
  }
  for (std::size_t i = 0; i < t; ++i) {
    for (double p : {b[i], l[i], c[i]}) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("TabularSSMDP: probability outside [0,1]");
      }
    }
    if (std::abs(b[i] + l[i] + c[i] - 1.0) > 1e-9) {
      throw std::invalid_argument("TabularSSMDP: b+l+c must equal 1");
    }
    if (m[i] < 0.0) throw std::invalid_argument("TabularSSMDP: m must be >= 0");
  }
  if (c[t - 1] != 0.0) {
    throw std::invalid_argument("TabularSSMDP: continuation past the final step");
  }
}

double oracle_gmv(const TabularSSMDP& mdp) {
  double total = 0.0;
  double reach = 1.0;  // prod of continuation probs up to the current step
  for (int k = 0; k < mdp.T(); ++k) {
    total += reach * mdp.b[k] * mdp.m[k];
    reach *= mdp.c[k];
  }
  return total;
}

double oracle_value(const TabularSSMDP& mdp, double gamma, int from_step) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("oracle_value: gamma must lie in [0,1]");
  }
  if (from_step < 0 || from_step >= mdp.T()) {
    throw std::invalid_argument("oracle_value: from_step out of range");
  }
  double total = 0.0;
  double reach = 1.0;
  double discount = 1.0;
  for (int step = from_step; step < mdp.T(); ++step) {
    total += discount * reach * mdp.b[step] * mdp.m[step];
    reach *= mdp.c[step];
    discount *= gamma;
  }
  return total;
}

double oracle_q(const TabularSSMDP& mdp, int step, double gamma) {
  if (step < 0 || step >= mdp.T()) {
    throw std::invalid_argument("oracle_q: step out of range");
  }
  double q = 0.0;
  for (int s = mdp.T() - 1; s >= step; --s) {
    q = mdp.b[s] * mdp.m[s] + gamma * mdp.c[s] * q;
  }
  return q;
}

}  // namespace ssrank
