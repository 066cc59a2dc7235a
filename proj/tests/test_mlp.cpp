#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "oracles.hpp"
#include "pmuguard/error.hpp"
#include "pmuguard/mlp.hpp"

using namespace pmuguard;
using mlp::Matrix;
using mlp::Vector;

namespace {

// label = 1 iff x_1 > 0, inputs uniform on [-1, 1]^2.
mlp::Samples separable(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    mlp::Samples s{oracle::random_matrix(static_cast<Eigen::Index>(n), 2, rng, 1.0), Matrix(n, 1)};
    for (Eigen::Index i = 0; i < s.inputs.rows(); ++i) s.targets(i, 0) = s.inputs(i, 0) > 0.0 ? 1.0 : 0.0;
    return s;
}

}  // namespace

TEST_CASE("default architecture is 5-20-50-20-5") {
    CHECK(mlp::default_layer_sizes() == std::vector<std::size_t>{5, 20, 50, 20, 5});
    const auto net = mlp::initialize(mlp::default_layer_sizes(), 1);
    CHECK(net.weights.size() == 4);
    CHECK(net.weights[1].rows() == 50);
    CHECK(net.weights[1].cols() == 20);
    CHECK(net.parameter_count() == 5 * 20 + 20 + 20 * 50 + 50 + 50 * 20 + 20 + 20 * 5 + 5);
}

TEST_CASE("initialization stays inside the Glorot bound") {
    const auto net = mlp::initialize({5, 20, 50, 20, 5}, 3);
    for (const auto& w : net.weights) {
        const double bound = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
        CHECK(w.cwiseAbs().maxCoeff() <= bound);
        CHECK(w.cwiseAbs().maxCoeff() > 0.5 * bound);
    }
    for (const auto& b : net.biases) CHECK(b.isZero(0.0));
    CHECK(mlp::initialize({5, 20, 5}, 3) == mlp::initialize({5, 20, 5}, 3));
    CHECK(!(mlp::initialize({5, 20, 5}, 3) == mlp::initialize({5, 20, 5}, 4)));
}

TEST_CASE("forward: zero network outputs one half") {
    const auto net = mlp::zero_network({5, 20, 50, 20, 5});
    std::mt19937_64 rng(1);
    const Vector y = mlp::forward(net, oracle::random_matrix(5, 1, rng, 3.0));
    for (Eigen::Index i = 0; i < y.size(); ++i) CHECK(y[i] == 0.5);
}

TEST_CASE("forward: single unit with w = 1, b = 0 at input 0") {
    auto net = mlp::zero_network({1, 1});
    net.weights[0](0, 0) = 1.0;
    CHECK(mlp::forward(net, Vector::Zero(1))[0] == std::exp(0.0) / (std::exp(0.0) + 1.0));
}

TEST_CASE("forward: matches a straight-line reimplementation") {
    auto net = mlp::zero_network({3, 2, 2});
    net.weights[0] << 0.1, -0.2, 0.3, 0.4, 0.5, -0.6;
    net.biases[0] << 0.05, -0.05;
    net.weights[1] << 0.7, -0.8, 0.9, 1.0;
    net.biases[1] << 0.01, 0.02;
    const std::vector<double> x{0.3, -1.2, 2.0};
    const auto want = oracle::forward(net, x);
    const Vector got = mlp::forward(net, Eigen::Map<const Vector>(x.data(), 3));
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got[static_cast<Eigen::Index>(i)] - want[i]) < 1e-12);

    std::mt19937_64 rng(2);
    const auto big = mlp::initialize({5, 20, 50, 20, 5}, 8);
    const Matrix batch = oracle::random_matrix(7, 5, rng, 2.0);
    const Matrix out = mlp::forward_batch(big, batch);
    for (Eigen::Index r = 0; r < batch.rows(); ++r) {
        std::vector<double> row(batch.cols());
        for (Eigen::Index c = 0; c < batch.cols(); ++c) row[static_cast<std::size_t>(c)] = batch(r, c);
        const auto ref = oracle::forward(big, row);
        for (Eigen::Index c = 0; c < out.cols(); ++c) CHECK(std::abs(out(r, c) - ref[static_cast<std::size_t>(c)]) < 1e-12);
    }
}

TEST_CASE("outputs stay strictly inside (0, 1)") {
    auto net = mlp::zero_network({1, 1});
    for (const double w : {-1e6, -800.0, -40.0, 0.0, 40.0, 800.0, 1e6}) {
        net.weights[0](0, 0) = w;
        const double y = mlp::forward(net, Vector::Ones(1))[0];
        CHECK(y > 0.0);
        CHECK(y < 1.0);
    }
}

TEST_CASE("backward: zero error gives zero gradient") {
    const auto net = mlp::initialize({3, 4, 2}, 5);
    std::mt19937_64 rng(5);
    const Matrix x = oracle::random_matrix(6, 3, rng);
    const Matrix t = mlp::forward_batch(net, x);
    const auto g = mlp::backward(net, x, t);
    for (const auto& w : g.weights) CHECK(w.cwiseAbs().maxCoeff() < 1e-12);
    for (const auto& b : g.biases) CHECK(b.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("backward: 3-4-2 net, batch of 8, central differences") {
    std::mt19937_64 rng(6);
    auto net = mlp::initialize({3, 4, 2}, 6);
    for (auto& b : net.biases) b = oracle::random_matrix(b.size(), 1, rng, 0.5);
    const Matrix x = oracle::random_matrix(8, 3, rng);
    const Matrix t = (oracle::random_matrix(8, 2, rng).array() > 0.0).cast<double>();
    for (const auto loss : {mlp::Loss::mse, mlp::Loss::cross_entropy}) {
        const auto r = oracle::check_gradients(net, x, t, loss);
        CHECK(r.checked == 3 * 4 + 4 + 4 * 2 + 2);
        CHECK(r.failures == 0);
    }
}

TEST_CASE("backward: random nets up to 10-10-10") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        const auto c = oracle::random_gradient_case(rng);
        CHECK(oracle::check_gradients(c.net, c.inputs, c.targets, mlp::Loss::mse).failures == 0);
    }
}

TEST_CASE("backward: duplicating the batch leaves the mean gradient unchanged") {
    const auto net = mlp::initialize({4, 6, 3}, 9);
    std::mt19937_64 rng(9);
    const Matrix x = oracle::random_matrix(5, 4, rng);
    const Matrix t = (oracle::random_matrix(5, 3, rng).array() > 0.0).cast<double>();
    Matrix x2(10, 4), t2(10, 3);
    x2 << x, x;
    t2 << t, t;
    const auto g1 = mlp::backward(net, x, t), g2 = mlp::backward(net, x2, t2);
    for (std::size_t k = 0; k < g1.weights.size(); ++k) {
        CHECK((g1.weights[k] - g2.weights[k]).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((g1.biases[k] - g2.biases[k]).cwiseAbs().maxCoeff() < 1e-15);
    }
    CHECK(g1.loss == doctest::Approx(g2.loss).epsilon(1e-15));
}

TEST_CASE("backward: shape errors") {
    const auto net = mlp::initialize({3, 4, 2}, 1);
    CHECK_THROWS_AS(mlp::backward(net, Matrix::Zero(4, 2), Matrix::Zero(4, 2)), DimensionError);
    CHECK_THROWS_AS(mlp::backward(net, Matrix::Zero(4, 3), Matrix::Zero(3, 2)), DimensionError);
}

TEST_CASE("train: separable toy task reaches 99%") {
    const auto tr = separable(400, 1), va = separable(100, 2);
    mlp::TrainConfig cfg;
    cfg.max_epochs = 200;
    cfg.batch_size = 16;
    cfg.learning_rate = 0.01;
    cfg.early_stop_patience = 200;
    const auto result = mlp::train(mlp::initialize({2, 8, 1}, 3), tr, va, cfg);
    CHECK(result.report.epochs_run <= 200);
    CHECK(mlp::accuracy(result.network, tr).per_cell >= 99.0);
}

TEST_CASE("train: deterministic, best-so-far validation loss never rises") {
    const auto tr = separable(200, 4), va = separable(60, 5);
    mlp::TrainConfig cfg;
    cfg.max_epochs = 40;
    cfg.seed = 17;
    const auto a = mlp::train(mlp::initialize({2, 8, 1}, cfg.seed), tr, va, cfg);
    const auto b = mlp::train(mlp::initialize({2, 8, 1}, cfg.seed), tr, va, cfg);
    CHECK(a.network == b.network);
    CHECK(a.report.validation_loss_curve == b.report.validation_loss_curve);

    double best = a.report.validation_loss_curve.front();
    for (const double v : a.report.validation_loss_curve) {
        const double next = std::min(best, v);
        CHECK(next <= best);
        best = next;
    }
    CHECK(a.report.validation_loss == best);
    CHECK(a.report.validation_loss == a.report.validation_loss_curve[a.report.best_epoch - 1]);
}

TEST_CASE("train: early stopping returns the best epoch's weights") {
    const auto tr = separable(200, 6), va = separable(60, 7);
    mlp::TrainConfig cfg;
    cfg.max_epochs = 300;
    cfg.learning_rate = 0.05;
    cfg.early_stop_patience = 5;
    const auto r = mlp::train(mlp::initialize({2, 8, 1}, 1), tr, va, cfg);
    CHECK(r.report.epochs_run <= r.report.best_epoch + 5);
    CHECK(mlp::loss_value(mlp::forward_batch(r.network, va.inputs), va.targets, cfg.loss) ==
          doctest::Approx(r.report.validation_loss).epsilon(1e-12));
}

TEST_CASE("train config: parse, dump and reject bad values") {
    mlp::TrainConfig cfg;
    cfg.max_epochs = 12;
    cfg.loss = mlp::Loss::cross_entropy;
    const auto back = mlp::parse_train_config(mlp::dump_train_config(cfg));
    CHECK(back.max_epochs == 12);
    CHECK(back.loss == mlp::Loss::cross_entropy);
    CHECK_THROWS_AS(mlp::parse_train_config(R"({"format":"pmuguard-train","version":1,"batch_size":0})"), ConfigError);
    CHECK_THROWS_AS(mlp::parse_train_config(R"({"format":"pmuguard-train","version":1,"loss":"hinge"})"), ConfigError);
}

TEST_CASE("checkpoint: save/load round trip is exact") {
    auto net = mlp::initialize({5, 20, 50, 20, 5}, 12);
    net.scaling = mlp::InputScaling{Vector::Constant(5, -1.0), Vector::Constant(5, 2.0)};
    const mlp::Checkpoint ckpt{net, 0.61};
    std::stringstream ss;
    mlp::write_checkpoint(ss, ckpt);
    const auto back = mlp::read_checkpoint(ss);
    CHECK(back == ckpt);
    std::mt19937_64 rng(12);
    const Matrix x = oracle::random_matrix(100, 5, rng, 3.0);
    CHECK(mlp::forward_batch(back.network, x) == mlp::forward_batch(net, x));
}

TEST_CASE("checkpoint: truncation and shape mismatch are rejected") {
    const mlp::Checkpoint ckpt{mlp::initialize({5, 20, 50, 20, 5}, 1), std::nullopt};
    std::stringstream ss;
    mlp::write_checkpoint(ss, ckpt);
    const std::string text = ss.str();

    std::istringstream cut(text.substr(0, text.size() / 2));
    CHECK_THROWS_AS(mlp::read_checkpoint(cut), ParseError);

    std::istringstream full(text);
    CHECK_THROWS_AS(mlp::read_checkpoint(full, std::vector<std::size_t>{5, 20, 5}), DimensionError);

    std::istringstream garbage("not a checkpoint\n");
    CHECK_THROWS_AS(mlp::read_checkpoint(garbage), ParseError);
}
