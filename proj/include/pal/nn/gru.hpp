#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pal/rng.hpp"
#include "pal/types.hpp"

namespace pal::nn {

struct StateError : std::runtime_error {
  explicit StateError(const std::string& what) : std::runtime_error(what) {}
};

// Single GRU cell, batched (one column per stream).
//
//   r = sigmoid(Wx_r x + bx_r + Wh_r h + bh_r)
//   z = sigmoid(Wx_z x + bx_z + Wh_z h + bh_z)
//   n = tanh(Wx_n x + bx_n + r .* (Wh_n h + bh_n))
//   h' = (1 - z) .* n + z .* h
//
// h' stays in (-1, 1) whenever h does: n is tanh-bounded and the update gate
// mixes convexly. Gradients flow through truncated windows of cached steps;
// the hidden-state gradient is severed at window edges.
class GruCell {
 public:
  GruCell() = default;
  GruCell(int input, int hidden);

  // Orthogonal recurrent blocks, fan-in uniform input weights, zero biases.
  void init(Rng& rng);

  struct StepCache {
    MatX x, h_prev, r, z, n, gh_n;  // gh_n = Wh_n h + bh_n
  };

  MatX step(const MatX& x, const MatX& h) const;
  MatX step(const MatX& x, const MatX& h, StepCache& cache) const;

  // Backpropagation through a window of caches in forward order.
  // `dh_steps` (optional) holds upstream gradients w.r.t. the hidden state
  // emitted at every step; `dh_final` (optional) is an extra gradient on the
  // last hidden state. Parameter gradients accumulate into `grad`; per-step
  // input gradients are written to `dx` when given. Returns the gradient
  // w.r.t. the hidden state entering the window.
  MatX backward(const std::vector<StepCache>& window,
                const std::vector<MatX>* dh_steps, const MatX* dh_final,
                VecX& grad, std::vector<MatX>* dx = nullptr) const;

  int input_dim() const { return input_; }
  int hidden_dim() const { return hidden_; }
  int param_count() const { return static_cast<int>(params_.size()); }

  VecX& params() { return params_; }
  const VecX& params() const { return params_; }

 private:
  Eigen::Map<const MatX> wx() const { return {params_.data(), 3 * hidden_, input_}; }
  Eigen::Map<const MatX> wh() const {
    return {params_.data() + 3 * hidden_ * input_, 3 * hidden_, hidden_};
  }
  Eigen::Map<const VecX> bx() const {
    return {params_.data() + 3 * hidden_ * (input_ + hidden_), 3 * hidden_};
  }
  Eigen::Map<const VecX> bh() const {
    return {params_.data() + 3 * hidden_ * (input_ + hidden_) + 3 * hidden_,
            3 * hidden_};
  }

  int input_ = 0;
  int hidden_ = 0;
  VecX params_;
};

}  // namespace pal::nn
