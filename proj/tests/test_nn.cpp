#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pal/nn/adam.hpp"
#include "pal/nn/checkpoint.hpp"
#include "pal/nn/gaussian.hpp"
#include "pal/nn/gru.hpp"
#include "pal/nn/mlp.hpp"
#include "support/finite_diff.hpp"

using namespace pal;
using namespace pal::nn;

namespace {

MatX random_matrix(int rows, int cols, Rng& rng, double scale = 1.0) {
  MatX m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = scale * rng.normal();
  return m;
}

}  // namespace

TEST_CASE("mlp: zero weights pass bias through") {
  Mlp net(3, {4}, 2);
  net.params().setZero();
  net.bias(1) << 0.5, -1.25;
  MatX x = MatX::Zero(3, 5);
  MatX y = net.forward(x);
  for (int c = 0; c < 5; ++c) {
    CHECK(y(0, c) == doctest::Approx(0.5));
    CHECK(y(1, c) == doctest::Approx(-1.25));
  }
}

TEST_CASE("mlp: identity weights act as identity on positive input") {
  Mlp net(3, {3}, 3);
  net.params().setZero();
  net.weight(0).setIdentity();
  net.weight(1).setIdentity();
  VecX x(3);
  x << 0.3, 1.7, 0.001;
  MatX y = net.forward(x);
  CHECK((y.col(0) - x).norm() == doctest::Approx(0.0));
}

TEST_CASE("mlp: shape mismatch raises") {
  Mlp net(3, {4}, 2);
  CHECK_THROWS_AS(net.forward(MatX::Zero(5, 1)), ShapeError);
}

TEST_CASE("mlp: gradients match central finite differences") {
  Rng rng(11);
  Mlp net(6, {9, 7}, 4);
  net.init(rng);
  const MatX x = random_matrix(6, 3, rng);
  const MatX w = random_matrix(4, 3, rng);  // fixed projection to a scalar

  auto loss = [&](const VecX& p) {
    Mlp probe = net;
    probe.params() = p;
    return (probe.forward(x).array() * w.array()).sum();
  };

  Mlp::Cache cache;
  net.forward(x, cache);
  VecX grad = VecX::Zero(net.param_count());
  net.backward(cache, w, grad);

  const VecX numeric = pal::testing::finite_diff(loss, net.params());
  CHECK(pal::testing::max_rel_error(grad, numeric) < 1e-4);
}

TEST_CASE("mlp: input gradient matches finite differences") {
  Rng rng(13);
  Mlp net(5, {8}, 3);
  net.init(rng);
  const MatX w = random_matrix(3, 1, rng);
  VecX x0 = random_matrix(5, 1, rng).col(0);

  auto loss = [&](const VecX& xv) {
    return (net.forward(xv).array() * w.array()).sum();
  };

  Mlp::Cache cache;
  net.forward(x0, cache);
  VecX grad = VecX::Zero(net.param_count());
  MatX dx;
  net.backward(cache, w, grad, &dx);

  const VecX numeric = pal::testing::finite_diff(loss, x0);
  CHECK(pal::testing::max_rel_error(VecX(dx.col(0)), numeric) < 1e-4);
}

TEST_CASE("gru: zero parameters halve the hidden state") {
  GruCell cell(4, 3);
  VecX h(3);
  h << 0.4, -0.2, 0.9;
  MatX h2 = cell.step(MatX::Zero(4, 1), h);
  for (int i = 0; i < 3; ++i) CHECK(h2(i, 0) == doctest::Approx(0.5 * h[i]));
}

TEST_CASE("gru: hidden state stays inside (-1,1)") {
  Rng rng(7);
  GruCell cell(5, 6);
  cell.init(rng);
  MatX h = MatX::Zero(6, 2);
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    h = cell.step(random_matrix(5, 2, rng, 3.0), h);
    worst = std::max(worst, h.array().abs().maxCoeff());
  }
  CHECK(worst < 1.0);
}

TEST_CASE("gru: bptt gradient over a 50-step window matches finite differences") {
  Rng rng(21);
  const int T = 50;
  GruCell cell(3, 4);
  cell.init(rng);
  std::vector<MatX> xs;
  for (int t = 0; t < T; ++t) xs.push_back(random_matrix(3, 2, rng));
  const MatX w = random_matrix(4, 2, rng);

  auto loss = [&](const VecX& p) {
    GruCell probe = cell;
    probe.params() = p;
    MatX h = MatX::Zero(4, 2);
    for (int t = 0; t < T; ++t) h = probe.step(xs[t], h);
    return (h.array() * w.array()).sum();
  };

  std::vector<GruCell::StepCache> window(T);
  MatX h = MatX::Zero(4, 2);
  for (int t = 0; t < T; ++t) h = cell.step(xs[t], h, window[t]);
  VecX grad = VecX::Zero(cell.param_count());
  cell.backward(window, nullptr, &w, grad);

  const VecX numeric = pal::testing::finite_diff(loss, cell.params());
  CHECK(pal::testing::max_rel_error(grad, numeric) < 1e-4);
}

TEST_CASE("gru: per-step readout gradients match finite differences") {
  Rng rng(22);
  const int T = 6;
  GruCell cell(3, 4);
  cell.init(rng);
  std::vector<MatX> xs, ws;
  for (int t = 0; t < T; ++t) {
    xs.push_back(random_matrix(3, 1, rng));
    ws.push_back(random_matrix(4, 1, rng));
  }

  auto loss = [&](const VecX& p) {
    GruCell probe = cell;
    probe.params() = p;
    MatX h = MatX::Zero(4, 1);
    double total = 0.0;
    for (int t = 0; t < T; ++t) {
      h = probe.step(xs[t], h);
      total += (h.array() * ws[t].array()).sum();
    }
    return total;
  };

  std::vector<GruCell::StepCache> window(T);
  MatX h = MatX::Zero(4, 1);
  for (int t = 0; t < T; ++t) h = cell.step(xs[t], h, window[t]);
  VecX grad = VecX::Zero(cell.param_count());
  cell.backward(window, &ws, nullptr, grad);

  const VecX numeric = pal::testing::finite_diff(loss, cell.params());
  CHECK(pal::testing::max_rel_error(grad, numeric) < 1e-4);
}

TEST_CASE("gru: truncated windows differ from one long window") {
  Rng rng(23);
  const int T = 50;
  GruCell cell(3, 4);
  cell.init(rng);
  std::vector<MatX> xs, ws;
  for (int t = 0; t < T; ++t) {
    xs.push_back(random_matrix(3, 1, rng));
    ws.push_back(random_matrix(4, 1, rng));
  }

  std::vector<GruCell::StepCache> window(T);
  MatX h = MatX::Zero(4, 1);
  for (int t = 0; t < T; ++t) h = cell.step(xs[t], h, window[t]);

  VecX grad_full = VecX::Zero(cell.param_count());
  cell.backward(window, &ws, nullptr, grad_full);

  VecX grad_split = VecX::Zero(cell.param_count());
  std::vector<GruCell::StepCache> first(window.begin(), window.begin() + 25);
  std::vector<GruCell::StepCache> second(window.begin() + 25, window.end());
  std::vector<MatX> ws_first(ws.begin(), ws.begin() + 25);
  std::vector<MatX> ws_second(ws.begin() + 25, ws.end());
  cell.backward(first, &ws_first, nullptr, grad_split);
  cell.backward(second, &ws_second, nullptr, grad_split);

  CHECK((grad_full - grad_split).norm() > 1e-8);
}

TEST_CASE("gru: upstream gradient scaling is linear") {
  Rng rng(24);
  const int T = 5;
  GruCell cell(3, 4);
  cell.init(rng);
  std::vector<GruCell::StepCache> window(T);
  MatX h = MatX::Zero(4, 1);
  for (int t = 0; t < T; ++t)
    h = cell.step(random_matrix(3, 1, rng), h, window[t]);
  const MatX w = random_matrix(4, 1, rng);
  const MatX w2 = 2.0 * w;

  VecX g1 = VecX::Zero(cell.param_count());
  VecX g2 = VecX::Zero(cell.param_count());
  cell.backward(window, nullptr, &w, g1);
  cell.backward(window, nullptr, &w2, g2);
  CHECK((g2 - 2.0 * g1).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gru: window of length one is single-step backprop") {
  Rng rng(25);
  GruCell cell(3, 4);
  cell.init(rng);
  GruCell::StepCache cache;
  const MatX x = random_matrix(3, 1, rng);
  cell.step(x, MatX::Zero(4, 1), cache);
  const MatX w = random_matrix(4, 1, rng);

  auto loss = [&](const VecX& p) {
    GruCell probe = cell;
    probe.params() = p;
    return (probe.step(x, MatX::Zero(4, 1)).array() * w.array()).sum();
  };

  VecX grad = VecX::Zero(cell.param_count());
  cell.backward({cache}, nullptr, &w, grad);
  const VecX numeric = pal::testing::finite_diff(loss, cell.params());
  CHECK(pal::testing::max_rel_error(grad, numeric) < 1e-4);
}

TEST_CASE("gaussian: logprob at the mean matches the closed form") {
  GaussianHead head(12, 0.6);
  const VecX mean = VecX::Zero(12);
  const double expected = -12.0 * std::log(0.6 * std::sqrt(2.0 * M_PI));
  CHECK(head.log_prob(mean, mean) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("gaussian: doubling sigma lowers logprob at the mean by 12 ln 2") {
  GaussianHead a(12, 0.6), b(12, 1.2);
  const VecX mean = VecX::Zero(12);
  CHECK(a.log_prob(mean, mean) - b.log_prob(mean, mean) ==
        doctest::Approx(12.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("gaussian: sample mean converges") {
  GaussianHead head(3, 0.6);
  Rng rng(31);
  VecX mean(3);
  mean << 0.5, -0.25, 1.0;
  VecX acc = VecX::Zero(3);
  const int n = 100000;
  for (int i = 0; i < n; ++i) acc += head.sample(mean, rng);
  acc /= n;
  CHECK((acc - mean).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("gaussian: entropy closed form") {
  GaussianHead head(12, 0.6);
  const double expected =
      12.0 * (0.5 * std::log(2.0 * M_PI * std::exp(1.0)) + std::log(0.6));
  CHECK(head.entropy() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("gaussian: mean and log-std gradients match finite differences") {
  Rng rng(33);
  GaussianHead head(4, 0.37, true);
  const MatX mean = random_matrix(4, 3, rng);
  const MatX action = random_matrix(4, 3, rng);
  VecX weights(3);
  weights << 1.0, -0.5, 2.0;

  // gradient w.r.t. the mean entries
  auto loss_mean = [&](const VecX& m) {
    Eigen::Map<const MatX> mm(m.data(), 4, 3);
    double total = 0.0;
    for (int c = 0; c < 3; ++c)
      total += weights[c] * head.log_prob(VecX(mm.col(c)), VecX(action.col(c)));
    return total;
  };
  MatX dmean = head.dlogp_dmean(mean, action);
  for (int c = 0; c < 3; ++c) dmean.col(c) *= weights[c];
  VecX flat_mean = Eigen::Map<const VecX>(mean.data(), mean.size());
  const VecX numeric_mean = pal::testing::finite_diff(loss_mean, flat_mean);
  CHECK(pal::testing::max_rel_error(
            VecX(Eigen::Map<const VecX>(dmean.data(), dmean.size())),
            numeric_mean) < 1e-4);

  // gradient w.r.t. log-std
  auto loss_std = [&](const VecX& p) {
    GaussianHead probe = head;
    probe.params() = p;
    double total = 0.0;
    for (int c = 0; c < 3; ++c)
      total += weights[c] * probe.log_prob(VecX(mean.col(c)), VecX(action.col(c)));
    return total;
  };
  VecX dstd = VecX::Zero(4);
  head.accumulate_dlogp_dlogstd(mean, action, weights, dstd);
  const VecX numeric_std = pal::testing::finite_diff(loss_std, head.params());
  CHECK(pal::testing::max_rel_error(dstd, numeric_std) < 1e-4);
}

TEST_CASE("adam: zero gradients leave parameters unchanged") {
  Adam opt(4);
  VecX params(4);
  params << 1.0, -2.0, 0.5, 3.0;
  const VecX before = params;
  opt.update(params, VecX::Zero(4), 1e-3);
  CHECK((params - before).norm() == doctest::Approx(0.0));
}

TEST_CASE("adam: constant gradient step size approaches lr") {
  Adam opt(1);
  VecX params = VecX::Zero(1);
  VecX grad = VecX::Constant(1, 3.7);
  const double lr = 1e-3;
  double prev = params[0];
  double move = 0.0;
  for (int i = 0; i < 500; ++i) {
    opt.update(params, grad, lr);
    move = std::abs(params[0] - prev);
    prev = params[0];
  }
  CHECK(move == doctest::Approx(lr).epsilon(1e-3));
}

TEST_CASE("adam: deterministic under identical inputs") {
  auto run = [] {
    Adam opt(3);
    VecX params(3);
    params << 0.1, 0.2, 0.3;
    VecX grad(3);
    grad << -1.0, 2.0, 0.5;
    for (int i = 0; i < 10; ++i) opt.update(params, grad, 1e-3);
    return params;
  };
  CHECK((run() - run()).norm() == 0.0);
}

TEST_CASE("checkpoint: exact round trip") {
  Rng rng(41);
  Checkpoint ckpt;
  ckpt.put("policy", random_matrix(17, 1, rng).col(0));
  ckpt.put("critic", random_matrix(5, 1, rng).col(0));
  ckpt.put_meta("rng", rng.serialize());
  const std::string path = "test_ckpt.bin";
  ckpt.save(path);
  Checkpoint loaded = Checkpoint::load(path);
  CHECK((loaded.get("policy") - ckpt.get("policy")).norm() == 0.0);
  CHECK((loaded.get("critic") - ckpt.get("critic")).norm() == 0.0);
  CHECK(loaded.get_meta("rng") == ckpt.get_meta("rng"));
  std::remove(path.c_str());
}

TEST_CASE("rng: split streams are deterministic and decorrelated") {
  Rng root(5);
  Rng a = root.split(0);
  Rng b = root.split(1);
  Rng a2 = Rng(5).split(0);
  CHECK(a.uniform() == a2.uniform());
  CHECK(a.uniform() != b.uniform());
}
