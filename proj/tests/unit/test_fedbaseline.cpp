// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "sgrecon/fedbaseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace sgrecon;

namespace {

ClientDataset synthetic_client(int node, std::size_t rows, std::size_t dim, std::uint64_t seed, double noise)
{
    RandomStream s(seed);
    ClientDataset c;
    c.node_id = node;
    c.dim = dim;
    std::vector<double> truth(dim);
    for (auto& v : truth) {
        v = s.normal();
    }
    for (std::size_t r = 0; r < rows; ++r) {
        double z = -0.5;
        for (std::size_t k = 0; k < dim; ++k) {
            const double v = s.normal();
            c.x.push_back(v);
            z += truth[k] * v;
        }
        c.y.push_back(z + noise * s.normal() > 0.0 ? 1 : 0);
    }
    return c;
}

} // namespace

TEST_CASE("analytic gradient matches central differences")
{
    const auto data = synthetic_client(0, 50, 11, 1, 1.0);
    RandomStream s(2);
    LogisticModel m{std::vector<double>(11), 0.3};
    for (auto& v : m.w) {
        v = s.normal(0.0, 0.5);
    }
    const auto weights = class_balanced_weights(data.y);
    std::vector<std::size_t> rows(50);
    std::iota(rows.begin(), rows.end(), 0);
    std::vector<double> gw;
    double gb = 0.0;
    logistic_gradient(m, data, weights, rows, gw, gb);
    const double h = 1e-6;
    for (std::size_t k = 0; k <= m.w.size(); ++k) {
        auto plus = m;
        auto minus = m;
        (k < m.w.size() ? plus.w[k] : plus.b) += h;
        (k < m.w.size() ? minus.w[k] : minus.b) -= h;
        const double numeric = (logistic_loss(plus, data, weights) - logistic_loss(minus, data, weights)) / (2.0 * h);
        const double analytic = k < m.w.size() ? gw[k] : gb;
        CHECK(std::abs(numeric - analytic) <= 1e-6 * std::max(1.0, std::abs(analytic)));
    }
}

TEST_CASE("class-balanced weights")
{
    const std::vector<std::uint8_t> y{1, 0, 0, 0};
    const auto w = class_balanced_weights(y);
    CHECK(w.positive == 2.0);
    CHECK(w.negative == doctest::Approx(4.0 / 6.0));
    const auto none = class_balanced_weights(std::vector<std::uint8_t>{0, 0});
    CHECK(none.positive == 0.0);
}

TEST_CASE("loss is non-increasing on a separable fixture")
{
    auto data = synthetic_client(0, 400, 2, 3, 0.0);
    BaselineParams p;
    p.rounds = 40;
    p.local_epochs = 1;
    p.batch_size = 400;
    p.learning_rate = 0.5;
    std::vector<double> history;
    const std::vector<ClientDataset> clients{data};
    const auto model = fedavg_train(clients, p, 4, &history);
    REQUIRE(history.size() == 40);
    for (std::size_t r = 1; r < history.size(); ++r) {
        CHECK(history[r] <= history[r - 1] + 1e-15);
    }
    const auto ev = evaluate_clients(model, clients, 0.5);
    CHECK(ev.accuracy > 0.95);
}

TEST_CASE("single client with one round equals local training")
{
    const auto data = synthetic_client(6, 700, 11, 5, 0.5);
    BaselineParams p;
    p.rounds = 1;
    p.local_epochs = 3;
    p.batch_size = 64;
    p.learning_rate = 0.05;
    const std::vector<ClientDataset> clients{data};
    const auto fed = fedavg_train(clients, p, 99);

    // Independent local loop with the same shuffle stream.
    RandomStream s(99, 6, Process::Baseline);
    const auto weights = class_balanced_weights(data.y);
    LogisticModel local{std::vector<double>(11, 0.0), 0.0};
    std::vector<std::size_t> order(data.rows());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> gw;
    double gb = 0.0;
    for (int e = 0; e < p.local_epochs; ++e) {
        for (std::size_t k = order.size(); k > 1; --k) {
            std::swap(order[k - 1], order[static_cast<std::size_t>(s.uniform_int(0, static_cast<std::int64_t>(k) - 1))]);
        }
        for (std::size_t start = 0; start < order.size(); start += 64) {
            const std::size_t end = std::min(order.size(), start + 64);
            logistic_gradient(local, data, weights, std::span<const std::size_t>(order.data() + start, end - start), gw, gb);
            for (std::size_t k = 0; k < 11; ++k) {
                local.w[k] -= p.learning_rate * gw[k];
            }
            local.b -= p.learning_rate * gb;
        }
    }
    for (std::size_t k = 0; k < 11; ++k) {
        CHECK(fed.w[k] == doctest::Approx(local.w[k]).epsilon(1e-12));
    }
    CHECK(fed.b == doctest::Approx(local.b).epsilon(1e-12));
}

TEST_CASE("training is deterministic and rejects a single class")
{
    const std::vector<ClientDataset> clients{synthetic_client(0, 300, 11, 6, 1.0), synthetic_client(1, 200, 11, 7, 1.0)};
    BaselineParams p;
    p.rounds = 5;
    const auto a = fedavg_train(clients, p, 8);
    const auto b = fedavg_train(clients, p, 8);
    CHECK(a.w == b.w);
    CHECK(a.b == b.b);
    auto one = clients;
    for (auto& c : one) {
        std::fill(c.y.begin(), c.y.end(), std::uint8_t{0});
    }
    CHECK_THROWS_AS(fedavg_train(one, p, 8), std::invalid_argument);
}

TEST_CASE("metrics from a hand-built confusion matrix")
{
    // 20 rows: tp 6, fp 2, tn 9, fn 3.
    const auto m = metrics_from_confusion(0, 6, 2, 9, 3);
    CHECK(m.precision == doctest::Approx(6.0 / 8.0));
    CHECK(m.recall == doctest::Approx(6.0 / 9.0));
    CHECK(m.f1 == doctest::Approx(2.0 * 0.75 * (6.0 / 9.0) / (0.75 + 6.0 / 9.0)));
    CHECK(m.f1 == doctest::Approx(12.0 / 17.0));
    CHECK(m.accuracy == doctest::Approx(15.0 / 20.0));
    CHECK(m.f1 >= std::min(m.precision, m.recall));
    CHECK(m.f1 <= std::max(m.precision, m.recall));

    const auto none_predicted = metrics_from_confusion(0, 0, 0, 15, 5);
    CHECK(none_predicted.precision == 0.0);
    CHECK(none_predicted.recall == 0.0);
    CHECK(none_predicted.accuracy == doctest::Approx(0.75));

    const auto no_pos = metrics_from_confusion(0, 0, 0, 20, 0);
    CHECK(no_pos.no_positives);
    CHECK(no_pos.recall == 0.0);
}

TEST_CASE("evaluation of perfect and all-negative predictors")
{
    ClientDataset c;
    c.node_id = 4;
    c.dim = 1;
    for (int r = 0; r < 20; ++r) {
        const bool pos = r % 4 == 0;
        c.x.push_back(pos ? 3.0 : -3.0);
        c.y.push_back(pos ? 1 : 0);
    }
    const std::vector<ClientDataset> clients{c};
    const auto perfect = evaluate_clients(LogisticModel{{5.0}, 0.0}, clients, 0.5);
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f1 == 1.0);
    CHECK(perfect.accuracy == 1.0);
    const auto negative = evaluate_clients(LogisticModel{{0.0}, -10.0}, clients, 0.5);
    CHECK(negative.recall == 0.0);
    CHECK(negative.accuracy == doctest::Approx(15.0 / 20.0));
}

TEST_CASE("macro metrics are unweighted client means")
{
    std::vector<ClientDataset> clients;
    for (int node = 0; node < 3; ++node) {
        clients.push_back(synthetic_client(node, 100 + 50 * static_cast<std::size_t>(node), 11, 20 + static_cast<std::uint64_t>(node), 1.0));
    }
    BaselineParams p;
    p.rounds = 3;
    const auto model = fedavg_train(clients, p, 1);
    const auto ev = evaluate_clients(model, clients, 0.5);
    REQUIRE(ev.clients.size() == 3);
    double f1 = 0.0;
    double acc = 0.0;
    for (const auto& m : ev.clients) {
        f1 += m.f1;
        acc += m.accuracy;
    }
    CHECK(ev.f1 == doctest::Approx(f1 / 3.0));
    CHECK(ev.accuracy == doctest::Approx(acc / 3.0));
    const auto csv = metrics_csv(ev);
    CHECK(csv.find("Precision") != std::string::npos);
    CHECK(csv.find("macro") != std::string::npos);
}
