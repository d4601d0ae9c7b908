#pragma once

#include "pal/types.hpp"

namespace pal::nn {

// Adam with bias correction, beta = (0.9, 0.999), eps = 1e-8.
class Adam {
 public:
  Adam() = default;
  explicit Adam(int size) { reset(size); }

  void reset(int size) {
    m_ = VecX::Zero(size);
    v_ = VecX::Zero(size);
    step_ = 0;
  }

  void update(VecX& params, const VecX& grad, double lr) {
    ++step_;
    m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
    v_ = beta2_ * v_.array() + (1.0 - beta2_) * grad.array().square();
    const double c1 = 1.0 - std::pow(beta1_, step_);
    const double c2 = 1.0 - std::pow(beta2_, step_);
    params.array() -=
        lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
  }

  int64_t step_count() const { return step_; }
  VecX& first_moment() { return m_; }
  VecX& second_moment() { return v_; }
  void set_step_count(int64_t s) { step_ = s; }

 private:
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  VecX m_, v_;
  int64_t step_ = 0;
};

}  // namespace pal::nn
