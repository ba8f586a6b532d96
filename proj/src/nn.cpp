#include "ssrank/nn.hpp"

#include <cmath>

namespace ssrank::nn {

namespace {

double apply_activation(Activation act, double z) {
  switch (act) {
    case Activation::Identity: return z;
    case Activation::Relu: return z > 0.0 ? z : 0.0;
    case Activation::Tanh: return std::tanh(z);
  }
  return z;
}

double activation_grad(Activation act, double z) {
  switch (act) {
    case Activation::Identity: return 1.0;
    case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::Tanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
  }
  return 1.0;
}

}  // namespace

Mlp::Mlp(std::vector<int> sizes, Activation output_activation)
    : sizes_(std::move(sizes)), output_activation_(output_activation) {
  if (sizes_.size() < 2) {
    throw std::invalid_argument("Mlp: need at least input and output sizes");
  }
  for (int s : sizes_) {
    if (s < 1) throw std::invalid_argument("Mlp: layer sizes must be >= 1");
  }
  std::size_t total = 0;
  offsets_.reserve(sizes_.size() - 1);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
}

void Mlp::init(Rng& rng) {
  for (int l = 0; l < layer_count(); ++l) {
    const int fan_in = sizes_[l];
    const int fan_out = sizes_[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> uniform(-bound, bound);
    double* w = params_.data() + weight_offset(l);
    for (int i = 0; i < fan_in * fan_out; ++i) w[i] = uniform(rng);
    double* b = params_.data() + bias_offset(l);
    for (int i = 0; i < fan_out; ++i) b[i] = 0.0;
  }
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  Trace trace;
  return forward(input, trace);
}

std::vector<double> Mlp::forward(std::span<const double> input,
                                 Trace& trace) const {
  if (static_cast<int>(input.size()) != input_size()) {
    throw std::invalid_argument("Mlp::forward: input dimension mismatch");
  }
  trace.acts.assign(1, std::vector<double>(input.begin(), input.end()));
  trace.preacts.clear();
  for (int l = 0; l < layer_count(); ++l) {
    const int in_n = sizes_[l];
    const int out_n = sizes_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    const std::vector<double>& x = trace.acts.back();

    std::vector<double> z(out_n);
    for (int o = 0; o < out_n; ++o) {
      double acc = b[o];
      const double* row = w + static_cast<std::size_t>(o) * in_n;
      for (int i = 0; i < in_n; ++i) acc += row[i] * x[i];
      z[o] = acc;
    }
    const Activation act =
        (l + 1 == layer_count()) ? output_activation_ : Activation::Relu;
    std::vector<double> a(out_n);
    for (int o = 0; o < out_n; ++o) a[o] = apply_activation(act, z[o]);
    trace.preacts.push_back(std::move(z));
    trace.acts.push_back(std::move(a));
  }
  return trace.acts.back();
}

void Mlp::backward(const Trace& trace, std::span<const double> output_grad,
                   std::span<double> param_grad,
                   std::span<double> input_grad) const {
  if (trace.acts.size() != sizes_.size() ||
      static_cast<int>(output_grad.size()) != output_size() ||
      param_grad.size() != params_.size() ||
      static_cast<int>(input_grad.size()) != input_size()) {
    throw std::invalid_argument("Mlp::backward: shape mismatch");
  }
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  for (int l = layer_count() - 1; l >= 0; --l) {
    const int in_n = sizes_[l];
    const int out_n = sizes_[l + 1];
    const Activation act =
        (l + 1 == layer_count()) ? output_activation_ : Activation::Relu;
    const std::vector<double>& z = trace.preacts[l];
    for (int o = 0; o < out_n; ++o) delta[o] *= activation_grad(act, z[o]);

    const std::vector<double>& x = trace.acts[l];
    double* gw = param_grad.data() + weight_offset(l);
    double* gb = param_grad.data() + bias_offset(l);
    for (int o = 0; o < out_n; ++o) {
      double* row = gw + static_cast<std::size_t>(o) * in_n;
      for (int i = 0; i < in_n; ++i) row[i] += delta[o] * x[i];
      gb[o] += delta[o];
    }
    const double* w = params_.data() + weight_offset(l);
    std::vector<double> prev(in_n, 0.0);
    for (int o = 0; o < out_n; ++o) {
      const double* row = w + static_cast<std::size_t>(o) * in_n;
      for (int i = 0; i < in_n; ++i) prev[i] += row[i] * delta[o];
    }
    delta = std::move(prev);
  }
  for (int i = 0; i < input_size(); ++i) input_grad[i] = delta[i];
}

void Mlp::export_params(ParamStore& store, const std::string& prefix) const {
  store.put(prefix + ".params", params_);
}

void Mlp::import_params(const ParamStore& store, const std::string& prefix) {
  const auto& values = store.get(prefix + ".params");
  if (values.size() != params_.size()) {
    throw std::invalid_argument("Mlp::import_params: size mismatch for " + prefix);
  }
  params_ = values;
}

AdamState::AdamState(std::size_t n, double step_size_)
    : step_size(step_size_), m(n, 0.0), v(n, 0.0) {}

bool AdamState::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m.size() || grads.size() != m.size()) {
    throw std::invalid_argument("AdamState::step: shape mismatch");
  }
  for (double g : grads) {
    if (!std::isfinite(g)) {
      ++skipped;
      return false;
    }
  }
  ++steps;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(steps));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(steps));
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * grads[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * grads[i] * grads[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    params[i] -= step_size * mhat / (std::sqrt(vhat) + epsilon);
  }
  return true;
}

void AdamState::export_params(ParamStore& store, const std::string& prefix) const {
  store.put(prefix + ".m", m);
  store.put(prefix + ".v", v);
  store.put(prefix + ".steps", {static_cast<double>(steps)});
}

void AdamState::import_params(const ParamStore& store, const std::string& prefix) {
  m = store.get(prefix + ".m");
  v = store.get(prefix + ".v");
  steps = static_cast<std::int64_t>(store.scalar(prefix + ".steps"));
}

TargetPair::TargetPair(Mlp net, double tau_) : live(std::move(net)), tau(tau_) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("TargetPair: tau must lie in (0,1]");
  }
  target = live;
}

void TargetPair::soft_update() {
  auto& t = target.params();
  const auto& l = live.params();
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = tau * l[i] + (1.0 - tau) * t[i];
  }
}

}  // namespace ssrank::nn
