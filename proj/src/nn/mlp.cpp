#include "pal/nn/mlp.hpp"

namespace pal::nn {

Mlp::Mlp(int input, std::vector<int> hidden, int output, double leaky_slope)
    : slope_(leaky_slope) {
  dims_.push_back(input);
  for (int h : hidden) dims_.push_back(h);
  dims_.push_back(output);

  int offset = 0;
  for (int l = 0; l + 1 < static_cast<int>(dims_.size()); ++l) {
    w_offset_.push_back(offset);
    offset += dims_[l + 1] * dims_[l];
    b_offset_.push_back(offset);
    offset += dims_[l + 1];
  }
  params_ = VecX::Zero(offset);
}

void Mlp::init(Rng& rng, double final_layer_scale) {
  for (int l = 0; l < num_layers(); ++l) {
    auto W = weight(l);
    const double bound = std::sqrt(1.0 / static_cast<double>(dims_[l]));
    for (int j = 0; j < W.cols(); ++j)
      for (int i = 0; i < W.rows(); ++i) W(i, j) = rng.uniform(-bound, bound);
    if (l == num_layers() - 1) W *= final_layer_scale;
    bias(l).setZero();
  }
}

Eigen::Map<MatX> Mlp::weight(int layer) {
  return {params_.data() + w_offset_[layer], dims_[layer + 1], dims_[layer]};
}
Eigen::Map<const MatX> Mlp::weight(int layer) const {
  return {params_.data() + w_offset_[layer], dims_[layer + 1], dims_[layer]};
}
Eigen::Map<VecX> Mlp::bias(int layer) {
  return {params_.data() + b_offset_[layer], dims_[layer + 1]};
}
Eigen::Map<const VecX> Mlp::bias(int layer) const {
  return {params_.data() + b_offset_[layer], dims_[layer + 1]};
}

MatX Mlp::forward(const MatX& x) const {
  Cache cache;
  return forward(x, cache);
}

MatX Mlp::forward(const MatX& x, Cache& cache) const {
  if (x.rows() != dims_.front())
    throw ShapeError("mlp input dim " + std::to_string(x.rows()) +
                     ", expected " + std::to_string(dims_.front()));
  cache.input = x;
  cache.pre.clear();
  cache.post.clear();

  MatX a = x;
  for (int l = 0; l < num_layers(); ++l) {
    MatX z = (weight(l) * a).colwise() + bias(l);
    cache.pre.push_back(z);
    if (l < num_layers() - 1) {
      a = z.unaryExpr([s = slope_](double v) { return v > 0.0 ? v : s * v; });
      cache.post.push_back(a);
    } else {
      a = std::move(z);
    }
  }
  return a;
}

void Mlp::backward(const Cache& cache, const MatX& doutput, VecX& grad,
                   MatX* dinput) const {
  if (grad.size() != params_.size()) grad = VecX::Zero(params_.size());
  if (doutput.rows() != dims_.back()) throw ShapeError("mlp doutput dim");

  MatX dz = doutput;
  for (int l = num_layers() - 1; l >= 0; --l) {
    const MatX& a_prev = (l == 0) ? cache.input : cache.post[l - 1];
    Eigen::Map<MatX> dW(grad.data() + w_offset_[l], dims_[l + 1], dims_[l]);
    Eigen::Map<VecX> db(grad.data() + b_offset_[l], dims_[l + 1]);
    dW.noalias() += dz * a_prev.transpose();
    db.noalias() += dz.rowwise().sum();

    if (l == 0) {
      if (dinput) dinput->noalias() = weight(0).transpose() * dz;
      break;
    }
    MatX da = weight(l).transpose() * dz;
    dz = da.array() * cache.pre[l - 1].unaryExpr([s = slope_](double v) {
                                return v > 0.0 ? 1.0 : s;
                              }).array();
  }
}

}  // namespace pal::nn
