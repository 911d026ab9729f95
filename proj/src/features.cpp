// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/features.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgrecon {

const std::vector<double>& RollingFeatures::column(std::size_t k) const
{
    switch (k) {
    case 0: return mean;
    case 1: return std;
    case 2: return skew;
    case 3: return kurt;
    case 4: return entropy;
    case 5: return drift;
    case 6: return delta;
    default: throw std::out_of_range("rolling feature index");
    }
}

RollingFeatures rolling_features(std::span<const double> x, int window, int bins, double std_floor)
{
    if (window < 2 || bins < 2) {
        throw std::invalid_argument("rolling_features: window and bins must be >= 2");
    }
    if (x.empty()) {
        throw std::invalid_argument("rolling_features: empty sequence");
    }
    const std::size_t n = x.size();
    RollingFeatures f;
    for (auto* v : {&f.mean, &f.std, &f.skew, &f.kurt, &f.entropy, &f.drift, &f.delta}) {
        v->resize(n);
    }
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins));
    const double log_bins = std::log(static_cast<double>(bins));
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t start = t + 1 >= static_cast<std::size_t>(window) ? t + 1 - static_cast<std::size_t>(window) : 0;
        const auto w = x.subspan(start, t - start + 1);
        const auto m = static_cast<double>(w.size());

        double sum = 0.0;
        for (double v : w) {
            sum += v;
        }
        const double mean = sum / m;
        double m2 = 0.0;
        double m3 = 0.0;
        double m4 = 0.0;
        double sxy = 0.0;
        double sxx = 0.0;
        const double idx_mean = (m - 1.0) / 2.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double d = w[k] - mean;
            const double d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
            const double di = static_cast<double>(k) - idx_mean;
            sxy += di * d;
            sxx += di * di;
        }
        m2 /= m;
        m3 /= m;
        m4 /= m;
        const double sd = std::sqrt(m2);
        f.mean[t] = mean;
        f.std[t] = sd;
        if (sd < std_floor) {
            f.skew[t] = 0.0;
            f.kurt[t] = 0.0;
        } else {
            f.skew[t] = m3 / (sd * sd * sd);
            f.kurt[t] = m4 / (m2 * m2) - 3.0;
        }
        f.drift[t] = sxx > 0.0 ? sxy / sxx : 0.0;
        f.delta[t] = t == 0 ? 0.0 : x[t] - x[t - 1];

        const auto [lo_it, hi_it] = std::minmax_element(w.begin(), w.end());
        const double lo = *lo_it;
        const double range = *hi_it - lo;
        if (range > 0.0) {
            std::fill(counts.begin(), counts.end(), 0);
            for (double v : w) {
                const auto b = static_cast<std::size_t>((v - lo) / range * static_cast<double>(bins));
                ++counts[std::min(b, counts.size() - 1)];
            }
            double h = 0.0;
            for (std::size_t c : counts) {
                if (c > 0) {
                    const double p = static_cast<double>(c) / m;
                    h -= p * std::log(p);
                }
            }
            f.entropy[t] = h / log_bins;
        } else {
            f.entropy[t] = 0.0;
        }
    }
    return f;
}

std::vector<double> rolling_mean(std::span<const double> x, int window)
{
    if (window < 1) {
        throw std::invalid_argument("rolling_mean: window must be >= 1");
    }
    std::vector<double> out(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        const std::size_t start = t + 1 >= static_cast<std::size_t>(window) ? t + 1 - static_cast<std::size_t>(window) : 0;
        double sum = 0.0;
        for (std::size_t k = start; k <= t; ++k) {
            sum += x[k];
        }
        out[t] = sum / static_cast<double>(t - start + 1);
    }
    return out;
}

NeighborFeatures neighbor_features(const SquareMatrix& mixing, const std::vector<std::vector<double>>& x)
{
    const std::size_t n = mixing.size();
    if (x.size() != n) {
        throw std::invalid_argument("neighbor_features: node count does not match the mixing matrix");
    }
    const std::size_t len = n == 0 ? 0 : x[0].size();
    for (const auto& row : x) {
        if (row.size() != len) {
            throw std::invalid_argument("neighbor_features: ragged node series");
        }
    }
    NeighborFeatures out;
    out.avg.assign(n, std::vector<double>(len));
    out.dev.assign(n, std::vector<double>(len));
    for (std::size_t i = 0; i < n; ++i) {
        const auto w = mixing.row(i);
        for (std::size_t t = 0; t < len; ++t) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                acc += w[j] * x[j][t];
            }
            out.avg[i][t] = acc;
            out.dev[i][t] = std::abs(x[i][t] - acc);
        }
    }
    return out;
}

ColumnStats column_stats(std::span<const double> values, double std_floor)
{
    if (values.empty()) {
        throw std::invalid_argument("column_stats: empty column");
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const double mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return {mean, std::max(std::sqrt(ss / static_cast<double>(values.size())), std_floor)};
}

bool is_standardization_excluded(std::string_view column) noexcept
{
    return column == "t" || column == "tx_count" || column == "attack_label" || column == "shadow_db" ||
           column == "interf_db";
}

void Standardizer::fit_node(int node_id, const std::vector<std::string>& names,
                            const std::vector<std::vector<double>>& columns)
{
    if (names.size() != columns.size()) {
        throw std::invalid_argument("fit_node: name/column count mismatch");
    }
    auto& node = params_[node_id];
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (is_standardization_excluded(names[k])) {
            continue;
        }
        if (columns[k].empty()) {
            throw std::invalid_argument("fit_node: node " + std::to_string(node_id) + " has an empty train table");
        }
        node[names[k]] = column_stats(columns[k], std_floor_);
    }
}

bool Standardizer::has(int node_id, const std::string& column) const
{
    const auto it = params_.find(node_id);
    return it != params_.end() && it->second.count(column) > 0;
}

const ColumnStats& Standardizer::stats(int node_id, const std::string& column) const
{
    const auto it = params_.find(node_id);
    if (it == params_.end()) {
        throw std::out_of_range("standardizer has no node " + std::to_string(node_id));
    }
    const auto col = it->second.find(column);
    if (col == it->second.end()) {
        throw std::out_of_range("standardizer has no column '" + column + "' for node " + std::to_string(node_id));
    }
    return col->second;
}

std::vector<double> Standardizer::apply(int node_id, const std::string& column, std::span<const double> values) const
{
    const auto& s = stats(node_id, column);
    std::vector<double> out(values.size());
    for (std::size_t t = 0; t < values.size(); ++t) {
        out[t] = (values[t] - s.mean) / s.std;
    }
    return out;
}

std::string Standardizer::to_json() const
{
    using json = nlohmann::ordered_json;
    json doc;
    doc["fit_split"] = "train";
    doc["std_floor"] = std_floor_;
    json nodes = json::object();
    for (const auto& [node, cols] : params_) {
        json entry = json::object();
        for (const auto& [name, s] : cols) {
            entry[name] = json{{"mean", s.mean}, {"std", s.std}};
        }
        nodes[std::to_string(node)] = entry;
    }
    doc["nodes"] = nodes;
    return doc.dump(2) + "\n";
}

Standardizer Standardizer::from_json(std::string_view document)
{
    using json = nlohmann::json;
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("normalization document is not valid JSON: ") + e.what());
    }
    try {
        Standardizer out(doc.at("std_floor").get<double>());
        for (const auto& [node, cols] : doc.at("nodes").items()) {
            const int id = std::stoi(node);
            for (const auto& [name, s] : cols.items()) {
                out.set(id, name, ColumnStats{s.at("mean").get<double>(), s.at("std").get<double>()});
            }
        }
        return out;
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("malformed normalization document: ") + e.what());
    }
}

} // namespace sgrecon
