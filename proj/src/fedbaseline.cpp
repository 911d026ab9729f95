// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/fedbaseline.hpp"
#include "sgrecon/numfmt.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sgrecon {

std::vector<std::array<ClientDataset, 3>> build_client_datasets(const std::array<std::vector<Table>, 3>& tables,
                                                                const Topology& topology,
                                                                const Standardizer& standardizer)
{
    std::vector<std::array<ClientDataset, 3>> clients;
    for (const auto& node : topology.nodes()) {
        if (node.tech == Tech::Fiber) {
            continue;
        }
        std::array<ClientDataset, 3> per_split;
        for (Split split : kAllSplits) {
            const auto& table = tables[index(split)].at(static_cast<std::size_t>(node.id));
            ClientDataset& data = per_split[index(split)];
            data.node_id = node.id;
            data.split = split;
            std::vector<std::vector<double>> columns;
            for (auto name : kBaselineFeatures) {
                std::vector<double> raw;
                if (name == "C_db") {
                    const auto& c = table.column("C");
                    raw.resize(c.size());
                    std::transform(c.begin(), c.end(), raw.begin(), [](double v) { return 20.0 * std::log10(v); });
                } else {
                    raw = table.column(name);
                }
                columns.push_back(standardizer.apply(node.id, std::string(name), raw));
            }
            const auto& tx = table.column("tx_count");
            const auto& label = table.column("attack_label");
            for (std::size_t r = 0; r < tx.size(); ++r) {
                if (tx[r] <= 0.0) {
                    continue;
                }
                for (const auto& col : columns) {
                    data.x.push_back(col[r]);
                }
                data.y.push_back(label[r] > 0.5 ? 1 : 0);
            }
        }
        clients.push_back(std::move(per_split));
    }
    return clients;
}

double sigmoid(double z) noexcept
{
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

ClassWeights class_balanced_weights(std::span<const std::uint8_t> y) noexcept
{
    const auto n = static_cast<double>(y.size());
    const auto pos = static_cast<double>(std::count(y.begin(), y.end(), std::uint8_t{1}));
    const double neg = n - pos;
    return ClassWeights{neg > 0.0 ? n / (2.0 * neg) : 0.0, pos > 0.0 ? n / (2.0 * pos) : 0.0};
}

namespace {

double margin(const LogisticModel& model, std::span<const double> x) noexcept
{
    double z = model.b;
    for (std::size_t k = 0; k < x.size(); ++k) {
        z += model.w[k] * x[k];
    }
    return z;
}

std::vector<std::size_t> all_rows(const ClientDataset& data)
{
    std::vector<std::size_t> rows(data.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

} // namespace

double logistic_loss(const LogisticModel& model, const ClientDataset& data, ClassWeights weights,
                     std::span<const std::size_t> rows)
{
    std::vector<std::size_t> storage;
    if (rows.empty()) {
        storage = all_rows(data);
        rows = storage;
    }
    if (rows.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (std::size_t r : rows) {
        const double z = margin(model, data.row(r));
        // log(1 + e^{-z}) for y = 1 and log(1 + e^{z}) for y = 0, stably.
        const double s = data.y[r] ? -z : z;
        const double l = s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
        total += (data.y[r] ? weights.positive : weights.negative) * l;
    }
    return total / static_cast<double>(rows.size());
}

void logistic_gradient(const LogisticModel& model, const ClientDataset& data, ClassWeights weights,
                       std::span<const std::size_t> rows, std::vector<double>& grad_w, double& grad_b)
{
    grad_w.assign(data.dim, 0.0);
    grad_b = 0.0;
    if (rows.empty()) {
        return;
    }
    for (std::size_t r : rows) {
        const auto x = data.row(r);
        const double p = sigmoid(margin(model, x));
        const double c = (data.y[r] ? weights.positive : weights.negative) * (p - static_cast<double>(data.y[r]));
        for (std::size_t k = 0; k < x.size(); ++k) {
            grad_w[k] += c * x[k];
        }
        grad_b += c;
    }
    const double inv = 1.0 / static_cast<double>(rows.size());
    for (double& g : grad_w) {
        g *= inv;
    }
    grad_b *= inv;
}

LogisticModel fedavg_train(std::span<const ClientDataset> clients, const BaselineParams& params,
                           std::uint64_t train_seed, std::vector<double>* loss_history)
{
    if (clients.empty()) {
        throw std::invalid_argument("fedavg_train: no clients");
    }
    const std::size_t dim = clients.front().dim;
    std::size_t positives = 0;
    std::size_t total_rows = 0;
    for (const auto& c : clients) {
        if (c.dim != dim) {
            throw std::invalid_argument("fedavg_train: clients disagree on feature dimension");
        }
        positives += static_cast<std::size_t>(std::count(c.y.begin(), c.y.end(), std::uint8_t{1}));
        total_rows += c.rows();
    }
    if (positives == 0 || positives == total_rows) {
        throw std::invalid_argument("fedavg_train: training labels hold a single class");
    }

    std::vector<ClassWeights> weights;
    std::vector<RandomStream> streams;
    for (const auto& c : clients) {
        weights.push_back(params.class_balanced ? class_balanced_weights(c.y) : ClassWeights{});
        streams.emplace_back(train_seed, static_cast<std::uint64_t>(c.node_id), Process::Baseline);
    }

    LogisticModel global{std::vector<double>(dim, 0.0), 0.0};
    std::vector<double> grad_w;
    double grad_b = 0.0;
    for (int round = 0; round < params.rounds; ++round) {
        LogisticModel sum{std::vector<double>(dim, 0.0), 0.0};
        double weight_total = 0.0;
        for (std::size_t ci = 0; ci < clients.size(); ++ci) {
            const auto& data = clients[ci];
            if (data.rows() == 0) {
                continue;
            }
            LogisticModel local = global;
            auto order = all_rows(data);
            for (int epoch = 0; epoch < params.local_epochs; ++epoch) {
                for (std::size_t k = order.size(); k > 1; --k) {
                    const auto j = static_cast<std::size_t>(streams[ci].uniform_int(0, static_cast<std::int64_t>(k) - 1));
                    std::swap(order[k - 1], order[j]);
                }
                for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(params.batch_size)) {
                    const auto end = std::min(order.size(), start + static_cast<std::size_t>(params.batch_size));
                    const std::span<const std::size_t> batch(order.data() + start, end - start);
                    logistic_gradient(local, data, weights[ci], batch, grad_w, grad_b);
                    for (std::size_t k = 0; k < dim; ++k) {
                        local.w[k] -= params.learning_rate * grad_w[k];
                    }
                    local.b -= params.learning_rate * grad_b;
                }
            }
            const auto n = static_cast<double>(data.rows());
            for (std::size_t k = 0; k < dim; ++k) {
                sum.w[k] += n * local.w[k];
            }
            sum.b += n * local.b;
            weight_total += n;
        }
        for (std::size_t k = 0; k < dim; ++k) {
            global.w[k] = sum.w[k] / weight_total;
        }
        global.b = sum.b / weight_total;
        if (loss_history != nullptr) {
            double loss = 0.0;
            for (std::size_t ci = 0; ci < clients.size(); ++ci) {
                loss += static_cast<double>(clients[ci].rows()) * logistic_loss(global, clients[ci], weights[ci]);
            }
            loss_history->push_back(loss / weight_total);
        }
    }
    return global;
}

ClientMetrics metrics_from_confusion(int node_id, std::int64_t tp, std::int64_t fp, std::int64_t tn, std::int64_t fn)
{
    ClientMetrics m;
    m.node_id = node_id;
    m.tp = tp;
    m.fp = fp;
    m.tn = tn;
    m.fn = fn;
    m.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.no_positives = tp + fn == 0;
    m.recall = m.no_positives ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    const auto n = tp + fp + tn + fn;
    m.accuracy = n > 0 ? static_cast<double>(tp + tn) / static_cast<double>(n) : 0.0;
    return m;
}

Evaluation evaluate_clients(const LogisticModel& model, std::span<const ClientDataset> clients, double threshold)
{
    Evaluation ev;
    for (const auto& data : clients) {
        std::int64_t tp = 0;
        std::int64_t fp = 0;
        std::int64_t tn = 0;
        std::int64_t fn = 0;
        for (std::size_t r = 0; r < data.rows(); ++r) {
            const bool predicted = sigmoid(margin(model, data.row(r))) >= threshold;
            const bool actual = data.y[r] != 0;
            tp += predicted && actual;
            fp += predicted && !actual;
            tn += !predicted && !actual;
            fn += !predicted && actual;
        }
        ev.clients.push_back(metrics_from_confusion(data.node_id, tp, fp, tn, fn));
    }
    if (!ev.clients.empty()) {
        const auto n = static_cast<double>(ev.clients.size());
        for (const auto& m : ev.clients) {
            ev.precision += m.precision / n;
            ev.recall += m.recall / n;
            ev.f1 += m.f1 / n;
            ev.accuracy += m.accuracy / n;
        }
    }
    return ev;
}

std::uint64_t default_train_seed(std::uint64_t seed_base) noexcept
{
    return mix64(seed_base ^ 0x7EA1'5EED'0000'0000ULL);
}

std::string metrics_csv(const Evaluation& ev)
{
    std::string out = "client,node_id,tp,fp,tn,fn,Precision,Recall,F1,Accuracy,no_positives\n";
    for (const auto& m : ev.clients) {
        out += "node" + std::to_string(m.node_id) + "," + std::to_string(m.node_id);
        for (auto v : {m.tp, m.fp, m.tn, m.fn}) {
            out += "," + std::to_string(v);
        }
        for (double v : {m.precision, m.recall, m.f1, m.accuracy}) {
            out += "," + format_double(v);
        }
        out += m.no_positives ? ",1\n" : ",0\n";
    }
    out += "macro,,,,,";
    for (double v : {ev.precision, ev.recall, ev.f1, ev.accuracy}) {
        out += "," + format_double(v);
    }
    out += ",\n";
    return out;
}

BaselineRun run_baseline(const std::array<std::vector<Table>, 3>& tables, const Topology& topology,
                         const Standardizer& standardizer, const BaselineParams& params, std::uint64_t train_seed)
{
    const auto clients = build_client_datasets(tables, topology, standardizer);
    std::array<std::vector<ClientDataset>, 3> by_split;
    for (const auto& c : clients) {
        for (Split split : kAllSplits) {
            by_split[index(split)].push_back(c[index(split)]);
        }
    }
    BaselineRun run;
    run.train_seed = train_seed;
    for (const auto& c : by_split[index(Split::Train)]) {
        run.train_rows += c.rows();
    }
    run.model = fedavg_train(by_split[index(Split::Train)], params, train_seed, &run.loss_history);
    run.validation = evaluate_clients(run.model, by_split[index(Split::Val)], params.threshold);
    run.test = evaluate_clients(run.model, by_split[index(Split::Test)], params.threshold);
    return run;
}

std::string baseline_json(const BaselineRun& run, const BaselineParams& params)
{
    using json = nlohmann::ordered_json;
    const auto eval_json = [](const Evaluation& ev) {
        json clients = json::array();
        for (const auto& m : ev.clients) {
            clients.push_back(json{{"node", m.node_id}, {"tp", m.tp}, {"fp", m.fp}, {"tn", m.tn}, {"fn", m.fn},
                                   {"Precision", m.precision}, {"Recall", m.recall}, {"F1", m.f1},
                                   {"Accuracy", m.accuracy}, {"no_positives", m.no_positives}});
        }
        return json{{"macro", {{"Precision", ev.precision}, {"Recall", ev.recall}, {"F1", ev.f1}, {"Accuracy", ev.accuracy}}},
                    {"clients", clients}};
    };
    json features = json::array();
    for (auto f : kBaselineFeatures) {
        features.push_back(std::string(f));
    }
    json doc{{"model", "Fed-LR"},
             {"train_seed", run.train_seed},
             {"hyperparameters", {{"rounds", params.rounds}, {"local_epochs", params.local_epochs},
                                  {"batch_size", params.batch_size}, {"learning_rate", params.learning_rate},
                                  {"threshold", params.threshold}, {"class_balanced", params.class_balanced}}},
             {"features", features},
             {"train_rows", run.train_rows},
             {"weights", run.model.w},
             {"bias", run.model.b},
             {"train_loss", run.loss_history},
             {"validation", eval_json(run.validation)},
             {"test", eval_json(run.test)}};
    return doc.dump(2) + "\n";
}

} // namespace sgrecon
