#include "pal/ppo/gae.hpp"

#include <stdexcept>

namespace pal::ppo {

GaeResult compute_gae(const GaeStream& stream, double gamma, double lambda) {
  const auto T = stream.rewards.size();
  if (stream.values.size() != T ||
      static_cast<Eigen::Index>(stream.done.size()) != T ||
      stream.bootstrap.size() != T)
    throw std::invalid_argument("gae stream arrays disagree in length");

  GaeResult out;
  out.advantages = VecX::Zero(T);
  out.returns = VecX::Zero(T);

  double carry = 0.0;
  for (Eigen::Index t = T - 1; t >= 0; --t) {
    const bool boundary = stream.done[t] || t == T - 1;
    const double next_value =
        boundary ? stream.bootstrap[t] : stream.values[t + 1];
    const double delta =
        stream.rewards[t] + gamma * next_value - stream.values[t];
    carry = boundary ? delta : delta + gamma * lambda * carry;
    out.advantages[t] = carry;
  }
  out.returns = out.advantages + stream.values;
  return out;
}

void normalize_advantages(VecX& advantages) {
  const auto n = advantages.size();
  if (n < 2) return;
  const double mean = advantages.mean();
  const double var =
      (advantages.array() - mean).square().sum() / static_cast<double>(n);
  const double std = std::sqrt(var);
  advantages = (advantages.array() - mean) / (std > 1e-12 ? std : 1.0);
}

}  // namespace pal::ppo
