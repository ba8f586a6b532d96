#include "ssrank/envmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssrank::env {

void write_page_block(const ItemPage& page, const FeatureContext& context,
                      std::span<double> out) {
  const int n = context.n_features;
  if (static_cast<int>(out.size()) != context.page_block_dims()) {
    throw std::invalid_argument("write_page_block: output size mismatch");
  }
  std::fill(out.begin(), out.end(), 0.0);
  if (page.items.empty()) return;

  const double count = static_cast<double>(page.items.size());
  double pos_total = 0.0;
  for (std::size_t i = 0; i < page.items.size(); ++i) {
    pos_total += 1.0 / (1.0 + static_cast<double>(i));
  }
  double max_price = 0.0;
  double max_mean = 0.0;
  for (std::size_t i = 0; i < page.items.size(); ++i) {
    const FeatureVector& x = page.items[i].features;
    if (static_cast<int>(x.size()) != n) {
      throw std::invalid_argument("write_page_block: item dimension mismatch");
    }
    const double pos_w = (1.0 / (1.0 + static_cast<double>(i))) / pos_total;
    double mean = 0.0;
    for (int j = 0; j < n; ++j) {
      out[j] += x[j] / count;
      out[n + j] += pos_w * x[j];
      mean += x[j];
    }
    max_price = std::max(max_price, x[0]);
    max_mean = std::max(max_mean, mean / n);
  }
  out[2 * n] = max_price;
  out[2 * n + 1] = max_mean;
  out[2 * n + 2] = count / static_cast<double>(context.page_size);
  out[2 * n + 3] = static_cast<double>(page.step) / context.max_step;
  out[2 * n + 4] = 1.0;
}

std::vector<double> featurize_history(const ItemPageHistory& history,
                                      const FeatureContext& context) {
  const int step = history.step();
  if (step < 1) {
    throw std::invalid_argument("featurize_history: history must have a page");
  }
  const int block = context.page_block_dims();
  std::vector<double> out(context.history_dims(), 0.0);
  const int take = std::min(step, context.window);
  for (int i = 0; i < take; ++i) {
    // newest page in the final block, zero padding in front
    const ItemPage& page = history.pages[step - take + i];
    const int slot = context.window - take + i;
    write_page_block(page, context,
                     std::span<double>(out.data() + slot * block, block));
  }
  out[context.window * block] = static_cast<double>(step) / context.max_step;
  out[context.window * block + 1] =
      static_cast<double>(take) / context.window;
  return out;
}

OutcomeLabel label_of(const SessionState& next_state) {
  switch (next_state.kind) {
    case StateKind::Conversion: return OutcomeLabel::Conversion;
    case StateKind::Abandon: return OutcomeLabel::Abandon;
    case StateKind::Continuation: return OutcomeLabel::Continuation;
  }
  return OutcomeLabel::Continuation;
}

OutcomeClassifier::OutcomeClassifier(int dims, double step_size,
                                     double decay_steps)
    : dims_(dims),
      weights_(3 * static_cast<std::size_t>(dims), 0.0),
      step_size_(step_size),
      decay_steps_(decay_steps) {
  if (dims < 1) throw std::invalid_argument("OutcomeClassifier: dims must be >= 1");
  if (!(step_size >= 0.0)) {
    throw std::invalid_argument("OutcomeClassifier: step size must be >= 0");
  }
}

double OutcomeClassifier::effective_step() const {
  if (decay_steps_ <= 0.0) return step_size_;
  return step_size_ / std::sqrt(1.0 + static_cast<double>(updates_) / decay_steps_);
}

OutcomeProbs OutcomeClassifier::predict(std::span<const double> features) const {
  if (static_cast<int>(features.size()) != dims_) {
    throw std::invalid_argument("OutcomeClassifier: feature dimension mismatch");
  }
  double logits[3];
  for (int k = 0; k < 3; ++k) {
    double acc = bias_[k];
    const double* row = weights_.data() + static_cast<std::size_t>(k) * dims_;
    for (int j = 0; j < dims_; ++j) acc += row[j] * features[j];
    logits[k] = acc;
  }
  const double top = std::max({logits[0], logits[1], logits[2]});
  double exps[3];
  double total = 0.0;
  for (int k = 0; k < 3; ++k) {
    exps[k] = std::exp(logits[k] - top);
    total += exps[k];
  }
  return OutcomeProbs{exps[0] / total, exps[1] / total, exps[2] / total};
}

void OutcomeClassifier::update(std::span<const double> features,
                               OutcomeLabel label) {
  const OutcomeProbs probs = predict(features);
  const double lr = effective_step();
  ++updates_;
  if (lr == 0.0) return;
  const double p[3] = {probs.b, probs.l, probs.c};
  for (int k = 0; k < 3; ++k) {
    const double grad = p[k] - (static_cast<int>(label) == k ? 1.0 : 0.0);
    double* row = weights_.data() + static_cast<std::size_t>(k) * dims_;
    for (int j = 0; j < dims_; ++j) row[j] -= lr * grad * features[j];
    bias_[k] -= lr * grad;
  }
}

void OutcomeClassifier::export_params(ParamStore& store,
                                      const std::string& prefix) const {
  store.put(prefix + ".weights", weights_);
  store.put(prefix + ".bias", bias_);
  store.put_scalar(prefix + ".updates", static_cast<double>(updates_));
}

void OutcomeClassifier::import_params(const ParamStore& store,
                                      const std::string& prefix) {
  const auto& w = store.get(prefix + ".weights");
  if (w.size() != weights_.size()) {
    throw std::invalid_argument("OutcomeClassifier: import size mismatch");
  }
  weights_ = w;
  bias_ = store.get(prefix + ".bias");
  updates_ = static_cast<std::int64_t>(store.scalar(prefix + ".updates"));
}

PriceModel::PriceModel(int dims, double step_size, double decay_steps)
    : dims_(dims),
      weights_(dims, 0.0),
      step_size_(step_size),
      decay_steps_(decay_steps) {
  if (dims < 1) throw std::invalid_argument("PriceModel: dims must be >= 1");
  if (!(step_size >= 0.0)) {
    throw std::invalid_argument("PriceModel: step size must be >= 0");
  }
}

double PriceModel::effective_step() const {
  if (decay_steps_ <= 0.0) return step_size_;
  return step_size_ / std::sqrt(1.0 + static_cast<double>(updates_) / decay_steps_);
}

double PriceModel::predict(std::span<const double> features) const {
  if (static_cast<int>(features.size()) != dims_) {
    throw std::invalid_argument("PriceModel: feature dimension mismatch");
  }
  double acc = bias_;
  for (int j = 0; j < dims_; ++j) acc += weights_[j] * features[j];
  return std::max(0.0, acc);
}

void PriceModel::update(std::span<const double> features,
                        double observed_price) {
  if (observed_price < 0.0) {
    throw std::invalid_argument("PriceModel: observed price must be >= 0");
  }
  if (static_cast<int>(features.size()) != dims_) {
    throw std::invalid_argument("PriceModel: feature dimension mismatch");
  }
  double acc = bias_;
  for (int j = 0; j < dims_; ++j) acc += weights_[j] * features[j];
  const double lr = effective_step();
  ++updates_;
  if (lr == 0.0) return;
  const double err = acc - observed_price;
  for (int j = 0; j < dims_; ++j) weights_[j] -= lr * err * features[j];
  bias_ -= lr * err;
}

void PriceModel::export_params(ParamStore& store,
                               const std::string& prefix) const {
  store.put(prefix + ".weights", weights_);
  store.put(prefix + ".bias", {bias_});
  store.put_scalar(prefix + ".updates", static_cast<double>(updates_));
}

void PriceModel::import_params(const ParamStore& store,
                               const std::string& prefix) {
  const auto& w = store.get(prefix + ".weights");
  if (w.size() != weights_.size()) {
    throw std::invalid_argument("PriceModel: import size mismatch");
  }
  weights_ = w;
  bias_ = store.scalar(prefix + ".bias");
  updates_ = static_cast<std::int64_t>(store.scalar(prefix + ".updates"));
}

}  // namespace ssrank::env
