#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pal/rng.hpp"
#include "pal/types.hpp"

namespace pal::nn {

struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Fully connected net with leaky-relu hidden layers and a linear output.
// Parameters live in one flat vector (layer-major: W then b per layer) so the
// optimizer, checkpointing and finite-difference checks all address the same
// storage. Batched interface: one column per sample.
class Mlp {
 public:
  Mlp() = default;
  Mlp(int input, std::vector<int> hidden, int output, double leaky_slope = 0.01);

  // Fan-in scaled uniform weights, zero biases; the final layer is scaled by
  // `final_layer_scale` (small values keep initial outputs near zero).
  void init(Rng& rng, double final_layer_scale = 1.0);

  struct Cache {
    MatX input;
    std::vector<MatX> pre;   // pre-activation per layer
    std::vector<MatX> post;  // post-activation per hidden layer
  };

  MatX forward(const MatX& x) const;
  MatX forward(const MatX& x, Cache& cache) const;

  // Accumulates parameter gradients into `grad` (sized like params); when
  // `dinput` is non-null also produces the gradient w.r.t. the input batch.
  void backward(const Cache& cache, const MatX& doutput, VecX& grad,
                MatX* dinput = nullptr) const;

  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  int num_layers() const { return static_cast<int>(dims_.size()) - 1; }
  int param_count() const { return static_cast<int>(params_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  double leaky_slope() const { return slope_; }

  VecX& params() { return params_; }
  const VecX& params() const { return params_; }

  Eigen::Map<MatX> weight(int layer);
  Eigen::Map<const MatX> weight(int layer) const;
  Eigen::Map<VecX> bias(int layer);
  Eigen::Map<const VecX> bias(int layer) const;

 private:
  std::vector<int> dims_;
  std::vector<int> w_offset_;
  std::vector<int> b_offset_;
  double slope_ = 0.01;
  VecX params_;
};

}  // namespace pal::nn
