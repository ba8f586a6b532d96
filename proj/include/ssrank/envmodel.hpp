#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssrank/core.hpp"
#include "ssrank/param_store.hpp"

namespace ssrank::env {

// Shared featurization parameters: catalog dimensionality, page size,
// session horizon and the number of recent pages that enter the maps.
struct FeatureContext {
  int n_features = 20;
  int page_size = 10;
  int max_step = 100;
  int window = 4;

  // mean features, position-weighted mean features, then (max price,
  // max item feature mean, fill fraction, step fraction, presence).
  int page_block_dims() const { return 2 * n_features + 5; }
  int history_dims() const { return window * page_block_dims() + 2; }
  int state_dims() const { return window * page_block_dims() + 1; }
};

void write_page_block(const ItemPage& page, const FeatureContext& context,
                      std::span<double> out);

// Fixed-width feature map over the last `window` pages of a history
// (step >= 1). Shorter histories zero-pad the leading blocks; the
// newest page always occupies the final block.
std::vector<double> featurize_history(const ItemPageHistory& history,
                                      const FeatureContext& context);

enum class OutcomeLabel { Conversion = 0, Abandon = 1, Continuation = 2 };

OutcomeLabel label_of(const SessionState& next_state);

struct OutcomeProbs {
  double b;  // conversion
  double l;  // abandon
  double c;  // continuation
};

// Three-way softmax over {conversion, abandon, continuation}, trained
// online by single cross-entropy gradient steps. Joint estimation keeps
// b + l + c = 1 by construction.
class OutcomeClassifier {
 public:
  OutcomeClassifier() = default;
  OutcomeClassifier(int dims, double step_size, double decay_steps = 0.0);

  int dims() const { return dims_; }
  double step_size() const { return step_size_; }
  std::int64_t updates() const { return updates_; }

  OutcomeProbs predict(std::span<const double> features) const;
  void update(std::span<const double> features, OutcomeLabel label);

  void export_params(ParamStore& store, const std::string& prefix) const;
  void import_params(const ParamStore& store, const std::string& prefix);

 private:
  double effective_step() const;

  int dims_ = 0;
  std::vector<double> weights_;  // 3 x dims, row-major
  std::vector<double> bias_ = std::vector<double>(3, 0.0);
  double step_size_ = 0.1;
  double decay_steps_ = 0.0;  // 0 disables step decay
  std::int64_t updates_ = 0;
};

// Linear expected-deal-price head with a nonnegative output clamp,
// trained by single squared-error gradient steps on conversion samples.
class PriceModel {
 public:
  PriceModel() = default;
  PriceModel(int dims, double step_size, double decay_steps = 0.0);

  int dims() const { return dims_; }
  std::int64_t updates() const { return updates_; }

  double predict(std::span<const double> features) const;
  void update(std::span<const double> features, double observed_price);

  void export_params(ParamStore& store, const std::string& prefix) const;
  void import_params(const ParamStore& store, const std::string& prefix);

 private:
  double effective_step() const;

  int dims_ = 0;
  std::vector<double> weights_;
  double bias_ = 0.0;
  double step_size_ = 0.1;
  double decay_steps_ = 0.0;
  std::int64_t updates_ = 0;
};

}  // namespace ssrank::env
