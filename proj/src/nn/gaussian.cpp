#include "pal/nn/gaussian.hpp"

namespace pal::nn {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

GaussianHead::GaussianHead(int dim, double stddev, bool learned)
    : dim_(dim), learned_(learned) {
  log_std_ = VecX::Constant(dim, std::log(stddev));
}

VecX GaussianHead::sample(const VecX& mean, Rng& rng) const {
  VecX out(dim_);
  for (int i = 0; i < dim_; ++i)
    out[i] = mean[i] + std::exp(log_std_[i]) * rng.normal();
  return out;
}

double GaussianHead::log_prob(const VecX& mean, const VecX& action) const {
  const VecX inv_std = (-log_std_).array().exp();
  const VecX z = (action - mean).cwiseProduct(inv_std);
  return -0.5 * z.squaredNorm() - log_std_.sum() - 0.5 * dim_ * kLog2Pi;
}

VecX GaussianHead::log_prob(const MatX& mean, const MatX& action) const {
  const VecX inv_std = (-log_std_).array().exp();
  MatX z = (action - mean).array().colwise() * inv_std.array();
  return (-0.5 * z.colwise().squaredNorm().array() - log_std_.sum() -
          0.5 * dim_ * kLog2Pi)
      .matrix()
      .transpose();
}

double GaussianHead::entropy() const {
  // sum_i 0.5 * ln(2 pi e sigma_i^2)
  return 0.5 * dim_ * (kLog2Pi + 1.0) + log_std_.sum();
}

MatX GaussianHead::dlogp_dmean(const MatX& mean, const MatX& action) const {
  const VecX inv_var = (-2.0 * log_std_).array().exp();
  return (action - mean).array().colwise() * inv_var.array();
}

void GaussianHead::accumulate_dlogp_dlogstd(const MatX& mean, const MatX& action,
                                            const VecX& weights,
                                            VecX& grad) const {
  if (!learned_) return;
  if (grad.size() != dim_) grad = VecX::Zero(dim_);
  const VecX inv_var = (-2.0 * log_std_).array().exp();
  // d logp / d log_std_i = ((a_i - mu_i)^2 / sigma_i^2) - 1
  MatX sq = (action - mean).array().square().colwise() * inv_var.array();
  grad.noalias() += sq * weights;
  grad.array() -= weights.sum();
}

}  // namespace pal::nn
