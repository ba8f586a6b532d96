#include "ssrank/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace ssrank::sim {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double dot(const FeatureVector& a, const FeatureVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Nonnegative weights used for both deal-price draws and the expected
// deal price; uniform fallback when no item matches the preference.
std::vector<double> attraction_weights(const UserBehaviorModel& model,
                                       const ItemPage& page) {
  std::vector<double> w(page.items.size());
  double total = 0.0;
  for (std::size_t i = 0; i < page.items.size(); ++i) {
    w[i] = std::max(0.0, dot(page.items[i].features, model.preference));
    total += w[i];
  }
  if (total <= 0.0) w.assign(page.items.size(), 1.0);
  return w;
}

}  // namespace

void CatalogConfig::validate() const {
  if (n_features < 2) {
    throw std::invalid_argument("catalog: n_features must be >= 2");
  }
  if (catalog_size < 1) {
    throw std::invalid_argument("catalog: catalog_size must be >= 1");
  }
  if (page_size < 1) throw std::invalid_argument("catalog: page_size must be >= 1");
}

FeatureDistribution feature_distribution(const CatalogConfig& config) {
  config.validate();
  Rng rng(config.seed);
  std::uniform_real_distribution<double> mu_draw(0.35, 0.65);
  std::uniform_real_distribution<double> sigma_draw(0.08, 0.18);
  FeatureDistribution dist;
  dist.mu.resize(config.n_features);
  dist.sigma.resize(config.n_features);
  for (int j = 0; j < config.n_features; ++j) dist.mu[j] = mu_draw(rng);
  for (int j = 0; j < config.n_features; ++j) dist.sigma[j] = sigma_draw(rng);
  return dist;
}

std::vector<Item> sample_catalog(const CatalogConfig& config, Rng& rng) {
  config.validate();
  const FeatureDistribution dist = feature_distribution(config);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Item> catalog(config.catalog_size);
  for (int i = 0; i < config.catalog_size; ++i) {
    catalog[i].id = i;
    catalog[i].features.resize(config.n_features);
    for (int j = 0; j < config.n_features; ++j) {
      double x;
      do {
        x = dist.mu[j] + dist.sigma[j] * normal(rng);
      } while (x < 0.0 || x > 1.0);
      catalog[i].features[j] = x;
    }
  }
  return catalog;
}

std::vector<Item> sample_catalog(const CatalogConfig& config) {
  Rng rng(config.seed);
  // burn the distribution draws so item features continue the stream
  std::uniform_real_distribution<double> burn(0.0, 1.0);
  for (int j = 0; j < 2 * config.n_features; ++j) burn(rng);
  return sample_catalog(config, rng);
}

void UserBehaviorModel::validate(int n_features) const {
  if (static_cast<int>(preference.size()) != n_features) {
    throw std::invalid_argument("behavior: preference dimension mismatch");
  }
  if (!(attraction_scale >= 0.0)) {
    throw std::invalid_argument("behavior: attraction_scale must be >= 0");
  }
  if (!(base_leave >= 0.0 && base_leave <= 1.0)) {
    throw std::invalid_argument("behavior: base_leave must lie in [0,1]");
  }
  if (!(fatigue >= 0.0)) throw std::invalid_argument("behavior: fatigue must be >= 0");
  if (!(purchase_gain > 0.0)) {
    throw std::invalid_argument("behavior: purchase_gain must be > 0");
  }
  if (!(price_noise >= 0.0)) {
    throw std::invalid_argument("behavior: price_noise must be >= 0");
  }
  if (window < 1) throw std::invalid_argument("behavior: window must be >= 1");
}

double page_attraction(const UserBehaviorModel& model, const ItemPage& page) {
  if (page.items.empty()) return 0.0;
  double s = 0.0;
  for (const Item& it : page.items) s += dot(it.features, model.preference);
  return s / static_cast<double>(page.items.size());
}

BehaviorProbs behavior_probs(const UserBehaviorModel& model,
                             const ItemPageHistory& history, int max_step) {
  const int step = history.step();
  if (step < 1) {
    throw std::invalid_argument("behavior_probs: history must have a page");
  }
  const int first = std::max(0, step - model.window);
  double u = 0.0;
  for (int i = first; i < step; ++i) {
    u += page_attraction(model, history.pages[i]);
  }
  u *= model.attraction_scale / static_cast<double>(step - first);

  BehaviorProbs probs{};
  probs.b = sigmoid(model.purchase_gain * u - model.purchase_offset);
  probs.l = std::min(1.0 - probs.b, model.base_leave + model.fatigue * step);
  probs.c = 1.0 - probs.b - probs.l;
  if (step >= max_step) {
    probs.l += probs.c;
    probs.c = 0.0;
  }

  const ItemPage& last = history.pages.back();
  const std::vector<double> w = attraction_weights(model, last);
  double wsum = 0.0, psum = 0.0;
  for (std::size_t i = 0; i < last.items.size(); ++i) {
    wsum += w[i];
    psum += w[i] * last.items[i].features[0];  // feature 0 is price
  }
  probs.m = wsum > 0.0 ? psum / wsum : 0.0;

  if (std::abs(probs.b + probs.l + probs.c - 1.0) > 1e-12) {
    throw std::logic_error("behavior_probs: outcome probabilities must sum to 1");
  }
  return probs;
}

double sample_deal_price(const UserBehaviorModel& model, const ItemPage& page,
                         Rng& rng) {
  if (page.items.empty()) {
    throw std::invalid_argument("sample_deal_price: empty page");
  }
  const std::vector<double> w = attraction_weights(model, page);
  std::discrete_distribution<int> pick(w.begin(), w.end());
  const double price = page.items[pick(rng)].features[0];
  if (model.price_noise <= 0.0) return price;
  std::normal_distribution<double> noise(0.0, 1.0);
  return std::max(0.0, price * (1.0 + model.price_noise * noise(rng)));
}

Outcome user_response(const UserBehaviorModel& model,
                      const ItemPageHistory& history, int max_step, Rng& rng) {
  const BehaviorProbs probs = behavior_probs(model, history, max_step);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  Outcome outcome;
  if (u < probs.b) {
    outcome.kind = OutcomeKind::Purchase;
    outcome.deal_price = sample_deal_price(model, history.pages.back(), rng);
  } else if (u < probs.b + probs.l) {
    outcome.kind = OutcomeKind::Leave;
  } else {
    outcome.kind = OutcomeKind::Continue;
  }
  return outcome;
}

double SessionTrajectory::total_reward() const {
  double total = 0.0;
  for (const TransitionSample& s : samples) total += s.reward;
  return total;
}

const char* to_string(SessionTrajectory::Terminal terminal) {
  switch (terminal) {
    case SessionTrajectory::Terminal::Conversion: return "conversion";
    case SessionTrajectory::Terminal::Abandon: return "abandon";
    case SessionTrajectory::Terminal::Truncated: return "truncated";
  }
  return "unknown";
}

SessionTrajectory run_session_paged(const std::vector<Item>& catalog,
                                    const UserBehaviorModel& model,
                                    const Pager& pager, int page_size, Rng& rng,
                                    const std::string& query,
                                    const StepObserver& observer) {
  const int horizon = max_steps(static_cast<int>(catalog.size()), page_size);

  ItemPageHistory history;
  history.query = query;
  SessionState state = SessionState::continuation(history);
  std::vector<Item> pool = catalog;

  SessionTrajectory trajectory;
  for (int step = 1; step <= horizon; ++step) {
    auto [page, action] = pager(state, pool, step);
    if (page.step != step) {
      throw std::invalid_argument("run_session: pager returned wrong step index");
    }
    ItemPageHistory next_history = advance_history(history, page);

    std::unordered_set<int> page_ids;
    for (const Item& it : page.items) page_ids.insert(it.id);
    std::vector<Item> next_pool;
    next_pool.reserve(pool.size() - page.items.size());
    for (const Item& it : pool) {
      if (!page_ids.count(it.id)) next_pool.push_back(it);
    }
    if (pool.size() - next_pool.size() != page.items.size()) {
      throw std::invalid_argument("run_session: page contains items outside the pool");
    }

    const Outcome outcome = user_response(model, next_history, horizon, rng);
    TransitionSample sample;
    sample.state = std::move(state);
    sample.action = std::move(action);
    sample.next_history = next_history;
    switch (outcome.kind) {
      case OutcomeKind::Purchase:
        sample.next_state = SessionState::conversion(next_history, outcome.deal_price);
        sample.reward = outcome.deal_price;
        break;
      case OutcomeKind::Leave:
        sample.next_state = SessionState::abandon(next_history);
        break;
      case OutcomeKind::Continue:
        if (step >= horizon) {
          throw std::logic_error("run_session: continuation drawn at the final step");
        }
        sample.next_state = SessionState::continuation(next_history);
        break;
    }
    trajectory.samples.push_back(sample);
    trajectory.final_step = step;
    if (observer) observer(trajectory.samples.back(), rng);

    if (outcome.kind == OutcomeKind::Purchase) {
      trajectory.terminal = SessionTrajectory::Terminal::Conversion;
      return trajectory;
    }
    if (outcome.kind == OutcomeKind::Leave) {
      trajectory.terminal = SessionTrajectory::Terminal::Abandon;
      return trajectory;
    }
    state = SessionState::continuation(next_history);
    history = std::move(next_history);
    pool = std::move(next_pool);
  }
  trajectory.terminal = SessionTrajectory::Terminal::Truncated;
  return trajectory;
}

SessionTrajectory run_session(const std::vector<Item>& catalog,
                              const UserBehaviorModel& model,
                              const Policy& policy, int page_size, Rng& rng,
                              const std::string& query) {
  const std::size_t dims = catalog.empty() ? 0 : catalog.front().features.size();
  Pager pager = [&](const SessionState& state, const std::vector<Item>& pool,
                    int step) {
    RankingAction action = policy(state);
    if (action.weights.size() != dims) {
      throw std::invalid_argument("run_session: policy action dimension mismatch");
    }
    return std::make_pair(top_k_list(pool, action, page_size, step), action);
  };
  return run_session_paged(catalog, model, pager, page_size, rng, query);
}

double calibrate_purchase_offset(const std::vector<Item>& catalog,
                                 const UserBehaviorModel& model, int page_size,
                                 double target_rate, int probe_sessions,
                                 Rng& rng) {
  if (!(target_rate > 0.0 && target_rate < 1.0)) {
    throw std::invalid_argument("calibrate: target rate must lie in (0,1)");
  }
  if (probe_sessions < 1) {
    throw std::invalid_argument("calibrate: need at least one probe session");
  }
  const int horizon = max_steps(static_cast<int>(catalog.size()), page_size);
  const std::size_t dims = catalog.front().features.size();
  std::uniform_real_distribution<double> weight_draw(-1.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  // Attraction sequences of random-policy sessions with purchases
  // disabled; leave draws use the unclamped leave pressure, so the
  // calibrated conversion rate is exact up to O(b^2).
  std::vector<std::vector<double>> probes;
  probes.reserve(probe_sessions);
  for (int s = 0; s < probe_sessions; ++s) {
    ItemPageHistory history;
    history.query = "probe";
    std::vector<Item> pool = catalog;
    std::vector<double> seq;
    for (int step = 1; step <= horizon; ++step) {
      RankingAction action;
      action.weights.resize(dims);
      for (double& w : action.weights) w = weight_draw(rng);
      const ItemPage page = top_k_list(pool, action, page_size, step);
      history = advance_history(history, page);
      std::unordered_set<int> shown;
      for (const Item& it : page.items) shown.insert(it.id);
      std::erase_if(pool, [&shown](const Item& it) { return shown.count(it.id) > 0; });

      const int first = std::max(0, history.step() - model.window);
      double u = 0.0;
      for (int i = first; i < history.step(); ++i) {
        u += page_attraction(model, history.pages[i]);
      }
      u *= model.attraction_scale / static_cast<double>(history.step() - first);
      seq.push_back(u);

      const double leave = std::min(1.0, model.base_leave + model.fatigue * step);
      if (step >= horizon || uniform(rng) < leave) break;
    }
    probes.push_back(std::move(seq));
  }

  auto conversion_rate = [&](double offset) {
    double total = 0.0;
    for (const auto& seq : probes) {
      double no_purchase = 1.0;
      for (double u : seq) {
        no_purchase *= 1.0 - sigmoid(model.purchase_gain * u - offset);
      }
      total += 1.0 - no_purchase;
    }
    return total / static_cast<double>(probes.size());
  };

  double lo = -30.0, hi = 30.0;  // rate is decreasing in the offset
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (conversion_rate(mid) > target_rate) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

CascadeClickModel::CascadeClickModel(std::vector<double> attraction_by_id)
    : attraction_(std::move(attraction_by_id)) {
  for (double p : attraction_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("cascade: attraction must lie in [0,1]");
    }
  }
}

CascadeClickModel CascadeClickModel::from_behavior(
    const std::vector<Item>& catalog, const UserBehaviorModel& model,
    double base, double gain) {
  int max_id = 0;
  for (const Item& it : catalog) max_id = std::max(max_id, it.id);
  std::vector<double> attraction(max_id + 1, 0.0);
  for (const Item& it : catalog) {
    const double a = base + gain * dot(it.features, model.preference);
    attraction[it.id] = std::clamp(a, 0.0, 1.0);
  }
  return CascadeClickModel(std::move(attraction));
}

double CascadeClickModel::attraction(int item_id) const {
  if (item_id < 0 || item_id >= static_cast<int>(attraction_.size())) {
    throw std::out_of_range("cascade: unknown item id");
  }
  return attraction_[item_id];
}

std::optional<int> CascadeClickModel::sample_click(const ItemPage& page,
                                                   Rng& rng) const {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::size_t pos = 0; pos < page.items.size(); ++pos) {
    if (uniform(rng) < attraction(page.items[pos].id)) {
      return static_cast<int>(pos);
    }
  }
  return std::nullopt;
}

double CascadeClickModel::click_through(const ItemPage& page) const {
  double no_click = 1.0;
  for (const Item& it : page.items) no_click *= 1.0 - attraction(it.id);
  return 1.0 - no_click;
}

}  // namespace ssrank::sim
