#pragma once

#include "pal/rng.hpp"
#include "pal/types.hpp"

namespace pal::nn {

// Diagonal-Gaussian action head over an externally produced mean. The
// per-dimension standard deviation is fixed by default; when `learned` is set
// the log-stddev vector becomes a trainable parameter.
class GaussianHead {
 public:
  GaussianHead() = default;
  GaussianHead(int dim, double stddev, bool learned = false);

  VecX sample(const VecX& mean, Rng& rng) const;

  double log_prob(const VecX& mean, const VecX& action) const;
  VecX log_prob(const MatX& mean, const MatX& action) const;  // per column

  double entropy() const;

  // d log_prob / d mean for a batch; when learning sigma also accumulates
  // d log_prob / d log_std weighted by `weights` (one scalar per column).
  MatX dlogp_dmean(const MatX& mean, const MatX& action) const;
  void accumulate_dlogp_dlogstd(const MatX& mean, const MatX& action,
                                const VecX& weights, VecX& grad) const;

  int dim() const { return dim_; }
  bool learned() const { return learned_; }
  VecX stddev() const { return log_std_.array().exp(); }
  VecX& params() { return log_std_; }
  const VecX& params() const { return log_std_; }
  int param_count() const { return learned_ ? dim_ : 0; }

 private:
  int dim_ = 0;
  bool learned_ = false;
  VecX log_std_;
};

}  // namespace pal::nn
