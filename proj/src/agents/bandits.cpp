#include "ssrank/agents/bandits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ssrank::agents {

double ucb1_index(double mean, double count, std::int64_t t) {
  if (count <= 0.0) return std::numeric_limits<double>::infinity();
  const double tt = static_cast<double>(std::max<std::int64_t>(t, 2));
  return mean + std::sqrt(1.5 * std::log(tt) / count);
}

namespace {

double bernoulli_kl(double p, double q) {
  const double eps = 1e-12;
  p = std::clamp(p, eps, 1.0 - eps);
  q = std::clamp(q, eps, 1.0 - eps);
  return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

}  // namespace

double klucb_index(double mean, double count, std::int64_t t) {
  if (count <= 0.0) return std::numeric_limits<double>::infinity();
  const double tt = static_cast<double>(std::max<std::int64_t>(t, 2));
  const double bound =
      (std::log(tt) + 3.0 * std::log(std::max(1.001, std::log(tt)))) / count;
  double lo = std::clamp(mean, 0.0, 1.0);
  double hi = 1.0;
  for (int iter = 0; iter < 32; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (bernoulli_kl(mean, mid) > bound) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ItemPage cascade_ucb_rank(const BanditState& state, const std::vector<Item>& pool,
                          int k, std::int64_t t, UcbVariant variant, int step) {
  if (pool.empty()) throw std::invalid_argument("cascade_ucb_rank: empty pool");
  if (k < 1) throw std::invalid_argument("cascade_ucb_rank: k must be >= 1");
  std::vector<std::pair<double, int>> indexed;  // (index value, pool position)
  indexed.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const int id = pool[i].id;
    if (id < 0 || id >= static_cast<int>(state.pulls.size())) {
      throw std::out_of_range("cascade_ucb_rank: item id outside state");
    }
    const double value = variant == UcbVariant::Ucb1
                             ? ucb1_index(state.means[id], state.pulls[id], t)
                             : klucb_index(state.means[id], state.pulls[id], t);
    indexed.emplace_back(value, static_cast<int>(i));
  }
  auto better = [&pool](const std::pair<double, int>& a,
                        const std::pair<double, int>& b) {
    if (a.first != b.first) return a.first > b.first;
    return pool[a.second].id < pool[b.second].id;
  };
  const std::size_t take = std::min<std::size_t>(k, indexed.size());
  std::partial_sort(indexed.begin(), indexed.begin() + take, indexed.end(),
                    better);
  ItemPage page;
  page.step = step;
  page.items.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    page.items.push_back(pool[indexed[i].second]);
  }
  return page;
}

void cascade_update(BanditState& state, const ItemPage& page,
                    std::optional<int> click_position) {
  const int limit = click_position
                        ? *click_position
                        : static_cast<int>(page.items.size()) - 1;
  if (click_position &&
      (*click_position < 0 ||
       *click_position >= static_cast<int>(page.items.size()))) {
    throw std::invalid_argument("cascade_update: click position outside page");
  }
  ++state.rounds;
  for (int pos = 0; pos <= limit; ++pos) {
    const int id = page.items[pos].id;
    if (id < 0 || id >= static_cast<int>(state.pulls.size())) {
      throw std::out_of_range("cascade_update: item id outside state");
    }
    const double reward =
        (click_position && pos == *click_position) ? 1.0 : 0.0;
    state.pulls[id] += 1.0;
    state.means[id] += (reward - state.means[id]) / state.pulls[id];
  }
}

CascadeUcbAgent::CascadeUcbAgent(const env::FeatureContext& context, int n_items,
                                 UcbVariant variant)
    : context_(context), variant_(variant), state_(n_items) {}

Agent::Decision CascadeUcbAgent::act(const SessionState& /*state*/,
                                     const std::vector<Item>& pool, int step,
                                     Rng& /*rng*/) {
  Decision decision;
  decision.page = cascade_ucb_rank(state_, pool, context_.page_size,
                                   std::max<std::int64_t>(state_.rounds, 1),
                                   variant_, step);
  return decision;
}

void CascadeUcbAgent::click_feedback(const ItemPage& page,
                                     std::optional<int> click_position) {
  cascade_update(state_, page, click_position);
}

void CascadeUcbAgent::export_params(ParamStore& store) const {
  store.put("bandit.pulls", state_.pulls);
  store.put("bandit.means", state_.means);
  store.put_scalar("bandit.rounds", static_cast<double>(state_.rounds));
}

void CascadeUcbAgent::import_params(const ParamStore& store) {
  state_.pulls = store.get("bandit.pulls");
  state_.means = store.get("bandit.means");
  state_.rounds = static_cast<std::int64_t>(store.scalar("bandit.rounds"));
}

Exp3Draw ranked_exp3_rank(const RankedExp3State& state,
                          const std::vector<Item>& pool, double mixing,
                          Rng& rng, int step) {
  if (pool.empty()) throw std::invalid_argument("ranked_exp3_rank: empty pool");
  if (!(mixing >= 0.0 && mixing <= 1.0)) {
    throw std::invalid_argument("ranked_exp3_rank: mixing must lie in [0,1]");
  }
  Exp3Draw draw;
  draw.page.step = step;
  std::vector<int> available(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) available[i] = static_cast<int>(i);

  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const int positions = std::min<int>(state.k, static_cast<int>(pool.size()));
  for (int pos = 0; pos < positions; ++pos) {
    double total = 0.0;
    for (int idx : available) total += state.weight(pos, pool[idx].id);
    const double n_avail = static_cast<double>(available.size());

    // p_i = (1 - mixing) w_i / sum(w) + mixing / n
    double u = uniform(rng);
    int chosen_slot = static_cast<int>(available.size()) - 1;
    double cumulative = 0.0;
    for (std::size_t slot = 0; slot < available.size(); ++slot) {
      const double w = state.weight(pos, pool[available[slot]].id);
      const double p = (1.0 - mixing) * (w / total) + mixing / n_avail;
      cumulative += p;
      if (u < cumulative) {
        chosen_slot = static_cast<int>(slot);
        break;
      }
    }
    const int pool_index = available[chosen_slot];
    const double w = state.weight(pos, pool[pool_index].id);
    draw.probabilities.push_back((1.0 - mixing) * (w / total) + mixing / n_avail);
    draw.page.items.push_back(pool[pool_index]);
    available.erase(available.begin() + chosen_slot);
  }
  return draw;
}

void ranked_exp3_update(RankedExp3State& state, const Exp3Draw& draw,
                        std::optional<int> click_position, double eta) {
  if (click_position &&
      (*click_position < 0 ||
       *click_position >= static_cast<int>(draw.page.items.size()))) {
    throw std::invalid_argument("ranked_exp3_update: click position outside page");
  }
  for (std::size_t pos = 0; pos < draw.page.items.size(); ++pos) {
    const double reward =
        (click_position && static_cast<int>(pos) == *click_position) ? 1.0 : 0.0;
    if (reward <= 0.0) continue;  // zero estimated reward leaves weights as-is
    const double p = draw.probabilities[pos];
    const int id = draw.page.items[pos].id;
    state.weight(static_cast<int>(pos), id) *=
        std::exp(eta * std::min(reward, 1.0) / p);
  }
  // keep weights finite under long horizons
  for (int pos = 0; pos < state.k; ++pos) {
    double top = 0.0;
    for (int i = 0; i < state.n_items; ++i) {
      top = std::max(top, state.weight(pos, i));
    }
    if (top > 1e100) {
      for (int i = 0; i < state.n_items; ++i) state.weight(pos, i) /= top;
    }
  }
}

RankedExp3Agent::RankedExp3Agent(const env::FeatureContext& context, int n_items,
                                 double eta, double mixing)
    : context_(context),
      eta_(eta),
      mixing_(mixing),
      state_(context.page_size, n_items) {
  if (!(eta > 0.0)) throw std::invalid_argument("RankedExp3Agent: eta must be > 0");
}

Agent::Decision RankedExp3Agent::act(const SessionState& /*state*/,
                                     const std::vector<Item>& pool, int step,
                                     Rng& rng) {
  last_draw_ = ranked_exp3_rank(state_, pool, mixing_, rng, step);
  Decision decision;
  decision.page = last_draw_.page;
  return decision;
}

void RankedExp3Agent::click_feedback(const ItemPage& page,
                                     std::optional<int> click_position) {
  if (page.items.size() != last_draw_.page.items.size()) {
    throw std::logic_error("RankedExp3Agent: feedback for an unknown page");
  }
  ranked_exp3_update(state_, last_draw_, click_position, eta_);
}

void RankedExp3Agent::export_params(ParamStore& store) const {
  store.put("exp3.weights", state_.weights);
}

void RankedExp3Agent::import_params(const ParamStore& store) {
  const auto& w = store.get("exp3.weights");
  if (w.size() != state_.weights.size()) {
    throw std::invalid_argument("RankedExp3Agent: weight size mismatch");
  }
  state_.weights = w;
}

}  // namespace ssrank::agents
