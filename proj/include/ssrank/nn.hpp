#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssrank/param_store.hpp"

namespace ssrank::nn {

using Rng = std::mt19937_64;

enum class Activation { Identity, Relu, Tanh };

// Activations recorded by a forward pass, consumed by backward().
struct Trace {
  std::vector<std::vector<double>> acts;     // acts[0] = input, acts[L] = output
  std::vector<std::vector<double>> preacts;  // preacts[l] = z of layer l+1
};

// Fully connected network with relu hidden units and a configurable
// output activation. All parameters live in one flat array (per layer:
// weight matrix row-major, then bias) so optimizers, soft updates and
// checkpoints can treat the network as a single vector.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<int> sizes, Activation output_activation);

  // Glorot-uniform weights, zero biases.
  void init(Rng& rng);

  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int layer_count() const { return static_cast<int>(sizes_.size()) - 1; }
  const std::vector<int>& sizes() const { return sizes_; }
  Activation output_activation() const { return output_activation_; }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t param_count() const { return params_.size(); }

  std::vector<double> forward(std::span<const double> input) const;
  std::vector<double> forward(std::span<const double> input, Trace& trace) const;

  // Gradients of sum(output * output_grad) with respect to parameters
  // (accumulated into param_grad) and the input (overwritten).
  void backward(const Trace& trace, std::span<const double> output_grad,
                std::span<double> param_grad,
                std::span<double> input_grad) const;

  void export_params(ParamStore& store, const std::string& prefix) const;
  void import_params(const ParamStore& store, const std::string& prefix);

 private:
  std::size_t weight_offset(int layer) const { return offsets_[layer]; }
  std::size_t bias_offset(int layer) const {
    return offsets_[layer] +
           static_cast<std::size_t>(sizes_[layer]) * sizes_[layer + 1];
  }

  std::vector<int> sizes_;
  Activation output_activation_ = Activation::Identity;
  std::vector<double> params_;
  std::vector<std::size_t> offsets_;  // start of each layer's block
};

// Bias-corrected adaptive moment estimation over a flat parameter array.
struct AdamState {
  double step_size = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t steps = 0;
  std::int64_t skipped = 0;  // updates dropped due to non-finite gradients

  AdamState() = default;
  AdamState(std::size_t n, double step_size_);

  // Applies one descent step along grads. Returns false (and counts the
  // skip) when any gradient component is non-finite; params untouched.
  bool step(std::span<double> params, std::span<const double> grads);

  void export_params(ParamStore& store, const std::string& prefix) const;
  void import_params(const ParamStore& store, const std::string& prefix);
};

// Live network plus a slowly tracking copy used for bootstrap targets.
struct TargetPair {
  Mlp live;
  Mlp target;
  double tau = 1e-3;

  TargetPair() = default;
  TargetPair(Mlp net, double tau_);

  // target <- tau * live + (1 - tau) * target
  void soft_update();
};

// Bounded ring with uniform with-replacement sampling.
template <class T>
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) {
      throw std::invalid_argument("ReplayBuffer: capacity must be positive");
    }
  }

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return items_.size(); }

  void push(T item) {
    if (items_.size() < capacity_) {
      items_.push_back(std::move(item));
    } else {
      items_[head_] = std::move(item);
      head_ = (head_ + 1) % capacity_;
    }
  }

  // Logical index: 0 is the oldest element.
  const T& at(std::size_t i) const {
    if (i >= items_.size()) throw std::out_of_range("ReplayBuffer: index");
    return items_[(head_ + i) % items_.size()];
  }

  std::vector<std::size_t> sample_indices(std::size_t batch, Rng& rng) const {
    if (items_.empty()) {
      throw std::invalid_argument("ReplayBuffer: sampling from empty buffer");
    }
    if (batch > items_.size()) {
      throw std::invalid_argument("ReplayBuffer: batch larger than contents");
    }
    std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
    std::vector<std::size_t> out(batch);
    for (auto& idx : out) idx = pick(rng);
    return out;
  }

  const T& raw(std::size_t storage_index) const { return items_[storage_index]; }
  std::size_t head() const { return head_; }

  // Reinstates the exact ring layout (for checkpoint restore).
  void restore(std::vector<T> items, std::size_t head) {
    if (items.size() > capacity_ || (items.size() < capacity_ && head != 0) ||
        (!items.empty() && head >= std::max<std::size_t>(items.size(), 1))) {
      throw std::invalid_argument("ReplayBuffer: invalid restore layout");
    }
    items_ = std::move(items);
    head_ = head;
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // oldest element once full
  std::vector<T> items_;
};

template <class T>
void buffer_push(ReplayBuffer<T>& buffer, T item) {
  buffer.push(std::move(item));
}

template <class T>
std::vector<T> buffer_sample(const ReplayBuffer<T>& buffer, std::size_t batch,
                             Rng& rng) {
  std::vector<T> out;
  out.reserve(batch);
  for (std::size_t idx : buffer.sample_indices(batch, rng)) {
    out.push_back(buffer.raw(idx));
  }
  return out;
}

}  // namespace ssrank::nn
