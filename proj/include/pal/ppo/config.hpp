#pragma once

#include <cstdint>

namespace pal::ppo {

struct PpoConfig {
  double gamma = 0.9962;
  double gae_lambda = 0.95;
  int epochs = 4;
  int n_env = 450;
  int steps_per_iter = 140;
  int minibatch_count = 8;
  double entropy_coef = 0.0;
  double value_coef = 0.5;
  double clip_eps = 0.2;
  int bptt_window = 50;
  double robot_resample_period = 25.0;  // simulated seconds per env
  double robot_resample_fraction = 0.2;

  double lr_init = 5e-4;
  double kl_target = 0.01;
  double lr_min = 1e-6;
  double lr_max = 1e-2;

  double action_stddev = 0.6;
  bool learned_stddev = false;

  int iterations = 1000;
  int checkpoint_every = 50;
  uint64_t seed = 0;

  int batch_size() const { return n_env * steps_per_iter; }
};

// KL-adaptive step size: shrink when the update moved too far, grow when it
// barely moved, clamp to a sane range.
inline double adapt_lr(double kl, double lr, double kl_target = 0.01,
                       double lr_min = 1e-6, double lr_max = 1e-2) {
  if (kl > 2.0 * kl_target)
    lr /= 1.5;
  else if (kl < 0.5 * kl_target)
    lr *= 1.5;
  if (lr < lr_min) lr = lr_min;
  if (lr > lr_max) lr = lr_max;
  return lr;
}

}  // namespace pal::ppo
