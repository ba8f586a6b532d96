#include "ssrank/agents/pointwise.hpp"

#include <cmath>

namespace ssrank::agents {

namespace {

std::vector<int> layer_sizes(int input, const std::vector<int>& hidden,
                             int output) {
  std::vector<int> sizes;
  sizes.push_back(input);
  for (int h : hidden) sizes.push_back(h);
  sizes.push_back(output);
  return sizes;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

PointwiseLtrAgent::PointwiseLtrAgent(const env::FeatureContext& context,
                                     PointwiseLtrConfig config, Rng& init_rng)
    : WeightVectorAgent(context, config.noise_scale, config.noise_half_life),
      config_(std::move(config)),
      net_(layer_sizes(context.state_dims(), config_.hidden, context.n_features),
           nn::Activation::Tanh) {
  net_.init(init_rng);
  adam_ = nn::AdamState(net_.param_count(), config_.alpha);
}

std::vector<double> PointwiseLtrAgent::page_mean_features(
    const ItemPage& page) const {
  std::vector<double> mean(context_.n_features, 0.0);
  if (page.items.empty()) return mean;
  for (const Item& it : page.items) {
    for (int j = 0; j < context_.n_features; ++j) mean[j] += it.features[j];
  }
  for (double& v : mean) v /= static_cast<double>(page.items.size());
  return mean;
}

RankingAction PointwiseLtrAgent::select_action(
    const std::vector<double>& state_features, bool explore, Rng& rng) {
  return with_exploration(net_.forward(state_features), explore, rng);
}

double PointwiseLtrAgent::page_score(const std::vector<double>& state_features,
                                     const ItemPage& page) const {
  const std::vector<double> weights = net_.forward(state_features);
  const std::vector<double> mean = page_mean_features(page);
  double u = 0.0;
  for (int j = 0; j < context_.n_features; ++j) u += weights[j] * mean[j];
  return sigmoid(u);
}

void PointwiseLtrAgent::observe(const sim::SessionTrajectory& trajectory) {
  if (trajectory.samples.empty()) return;
  const bool converted =
      trajectory.terminal == sim::SessionTrajectory::Terminal::Conversion;
  const double label = converted ? 1.0 : 0.0;
  const double weight =
      converted ? trajectory.total_reward() : config_.negative_weight;
  if (weight <= 0.0) return;

  std::vector<double> grad(net_.param_count(), 0.0);
  std::vector<double> in_grad(net_.input_size());
  for (const TransitionSample& sample : trajectory.samples) {
    const std::vector<double> state_feats = featurizer_(sample.state);
    const std::vector<double> mean =
        page_mean_features(sample.next_history.pages.back());
    nn::Trace trace;
    const std::vector<double> weights = net_.forward(state_feats, trace);
    double u = 0.0;
    for (int j = 0; j < context_.n_features; ++j) u += weights[j] * mean[j];
    const double p = sigmoid(u);
    // d(weighted cross-entropy)/du = weight * (p - label)
    const double du = weight * (p - label) / trajectory.samples.size();
    std::vector<double> out_grad(context_.n_features);
    for (int j = 0; j < context_.n_features; ++j) out_grad[j] = du * mean[j];
    net_.backward(trace, out_grad, grad, in_grad);
  }
  adam_.step(net_.params(), grad);
}

void PointwiseLtrAgent::export_params(ParamStore& store) const {
  net_.export_params(store, "pointwise.net");
  adam_.export_params(store, "pointwise.adam");
}

void PointwiseLtrAgent::import_params(const ParamStore& store) {
  net_.import_params(store, "pointwise.net");
  adam_.import_params(store, "pointwise.adam");
}

RandomAgent::RandomAgent(const env::FeatureContext& context)
    : WeightVectorAgent(context, 0.0, 0) {}

RankingAction RandomAgent::select_action(
    const std::vector<double>& /*state_features*/, bool /*explore*/, Rng& rng) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  RankingAction action;
  action.weights.resize(context_.n_features);
  for (double& w : action.weights) w = uniform(rng);
  return action;
}

}  // namespace ssrank::agents
