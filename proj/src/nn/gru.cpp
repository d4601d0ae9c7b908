#include "pal/nn/gru.hpp"

namespace pal::nn {

namespace {

inline MatX sigmoid(const MatX& m) {
  return m.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

// Deterministic orthogonal matrix: QR of a gaussian sample with the sign of
// the R diagonal folded into Q.
MatX orthogonal(int n, Rng& rng) {
  MatX a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = rng.normal();
  Eigen::HouseholderQR<MatX> qr(a);
  MatX q = qr.householderQ();
  MatX r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace

GruCell::GruCell(int input, int hidden) : input_(input), hidden_(hidden) {
  params_ = VecX::Zero(3 * hidden * (input + hidden) + 6 * hidden);
}

void GruCell::init(Rng& rng) {
  Eigen::Map<MatX> wx_m(params_.data(), 3 * hidden_, input_);
  const double bound = std::sqrt(1.0 / static_cast<double>(input_));
  for (int j = 0; j < wx_m.cols(); ++j)
    for (int i = 0; i < wx_m.rows(); ++i) wx_m(i, j) = rng.uniform(-bound, bound);

  Eigen::Map<MatX> wh_m(params_.data() + 3 * hidden_ * input_, 3 * hidden_, hidden_);
  for (int g = 0; g < 3; ++g)
    wh_m.middleRows(g * hidden_, hidden_) = orthogonal(hidden_, rng);

  params_.tail(6 * hidden_).setZero();
}

MatX GruCell::step(const MatX& x, const MatX& h) const {
  StepCache cache;
  return step(x, h, cache);
}

MatX GruCell::step(const MatX& x, const MatX& h, StepCache& cache) const {
  if (x.rows() != input_ || h.rows() != hidden_ || x.cols() != h.cols())
    throw StateError("gru step shape mismatch");
  const int H = hidden_;

  MatX gx = (wx() * x).colwise() + bx();
  MatX gh = (wh() * h).colwise() + bh();

  cache.x = x;
  cache.h_prev = h;
  cache.r = sigmoid(gx.topRows(H) + gh.topRows(H));
  cache.z = sigmoid(gx.middleRows(H, H) + gh.middleRows(H, H));
  cache.gh_n = gh.bottomRows(H);
  cache.n = (gx.bottomRows(H).array() + cache.r.array() * cache.gh_n.array())
                .tanh()
                .matrix();
  return ((1.0 - cache.z.array()) * cache.n.array() +
          cache.z.array() * h.array())
      .matrix();
}

MatX GruCell::backward(const std::vector<StepCache>& window,
                       const std::vector<MatX>* dh_steps, const MatX* dh_final,
                       VecX& grad, std::vector<MatX>* dx) const {
  if (window.empty()) throw StateError("gru backward: empty window");
  if (dh_steps && dh_steps->size() != window.size())
    throw StateError("gru backward: dh_steps size mismatch");
  if (grad.size() != params_.size()) grad = VecX::Zero(params_.size());
  if (dx) dx->assign(window.size(), MatX());

  const int H = hidden_;
  const int T = static_cast<int>(window.size());
  const auto cols = window.back().x.cols();

  Eigen::Map<MatX> dwx(grad.data(), 3 * H, input_);
  Eigen::Map<MatX> dwh(grad.data() + 3 * H * input_, 3 * H, hidden_);
  Eigen::Map<VecX> dbx(grad.data() + 3 * H * (input_ + hidden_), 3 * H);
  Eigen::Map<VecX> dbh(grad.data() + 3 * H * (input_ + hidden_) + 3 * H, 3 * H);

  MatX dh = MatX::Zero(H, cols);
  if (dh_final) dh = *dh_final;

  MatX dpre(3 * H, cols);
  for (int t = T - 1; t >= 0; --t) {
    const StepCache& c = window[t];
    if (dh_steps && (*dh_steps)[t].size() > 0) dh += (*dh_steps)[t];

    const auto& r = c.r.array();
    const auto& z = c.z.array();
    const auto& n = c.n.array();

    MatX dz = (dh.array() * (c.h_prev.array() - n)).matrix();
    MatX dn = (dh.array() * (1.0 - z)).matrix();
    MatX dh_next = (dh.array() * z).matrix();

    MatX dpre_n = (dn.array() * (1.0 - n * n)).matrix();
    MatX dr = (dpre_n.array() * c.gh_n.array()).matrix();
    MatX dgh_n = (dpre_n.array() * r).matrix();
    MatX dpre_z = (dz.array() * z * (1.0 - z)).matrix();
    MatX dpre_r = (dr.array() * r * (1.0 - r)).matrix();

    dpre.topRows(H) = dpre_r;
    dpre.middleRows(H, H) = dpre_z;
    dpre.bottomRows(H) = dpre_n;

    dwx.noalias() += dpre * c.x.transpose();
    dbx.noalias() += dpre.rowwise().sum();

    // the candidate row of the recurrent product sees dgh_n, not dpre_n
    MatX dpre_h(3 * H, cols);
    dpre_h.topRows(H) = dpre_r;
    dpre_h.middleRows(H, H) = dpre_z;
    dpre_h.bottomRows(H) = dgh_n;
    dwh.noalias() += dpre_h * c.h_prev.transpose();
    dbh.noalias() += dpre_h.rowwise().sum();

    dh_next.noalias() += wh().transpose() * dpre_h;
    if (dx) (*dx)[t] = wx().transpose() * dpre;

    dh = std::move(dh_next);
  }
  return dh;
}

}  // namespace pal::nn
