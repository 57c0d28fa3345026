/* Copyright 2026 The QNNSim Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef QNNSIM_BASELINE_HPP_
#define QNNSIM_BASELINE_HPP_

#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnnsim/data.hpp"
#include "qnnsim/train.hpp"

namespace qnnsim::mlp {

/// Two-layer perceptron: n_inputs -> n_hidden (ReLU) -> 1 (sigmoid). The
/// 16-2-1 shape carries 37 parameters.
struct MlpModel {
    int n_inputs = 16;
    int n_hidden = 2;
    std::vector<double> w1; // n_hidden x n_inputs, row-major
    std::vector<double> b1; // n_hidden
    std::vector<double> w2; // n_hidden
    double b2 = 0.0;

    int n_params() const { return n_hidden * n_inputs + n_hidden + n_hidden + 1; }

    std::vector<double> flat() const {
        std::vector<double> v;
        v.reserve(n_params());
        v.insert(v.end(), w1.begin(), w1.end());
        v.insert(v.end(), b1.begin(), b1.end());
        v.insert(v.end(), w2.begin(), w2.end());
        v.push_back(b2);
        return v;
    }

    void unflatten(const std::vector<double> &v) {
        std::size_t at = 0;
        for (auto &x : w1) x = v[at++];
        for (auto &x : b1) x = v[at++];
        for (auto &x : w2) x = v[at++];
        b2 = v[at];
    }
};

/// Fan-in-scaled uniform init for the weights, zero biases.
inline MlpModel make_mlp(int n_inputs, int n_hidden, std::uint64_t seed) {
    MlpModel m;
    m.n_inputs = n_inputs;
    m.n_hidden = n_hidden;
    m.w1.resize(static_cast<std::size_t>(n_hidden) * n_inputs);
    m.b1.assign(n_hidden, 0.0);
    m.w2.resize(n_hidden);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double s1 = std::sqrt(6.0 / n_inputs), s2 = std::sqrt(6.0 / n_hidden);
    for (auto &w : m.w1) w = s1 * unif(rng);
    for (auto &w : m.w2) w = s2 * unif(rng);
    return m;
}

/// Probability that the pattern belongs to the +1 class, strictly in (0, 1).
inline double mlp_forward(const MlpModel &m, const data::BinaryPattern &pattern) {
    if (static_cast<int>(pattern.size()) != m.n_inputs)
        throw std::invalid_argument("mlp_forward: pattern width mismatch");
    double z = m.b2;
    for (int h = 0; h < m.n_hidden; ++h) {
        double a = m.b1[h];
        for (int i = 0; i < m.n_inputs; ++i)
            a += m.w1[static_cast<std::size_t>(h) * m.n_inputs + i] * pattern[i];
        if (a > 0.0) z += m.w2[h] * a;
    }
    return 1.0 / (1.0 + std::exp(-z));
}

inline int mlp_predict(const MlpModel &m, const data::BinaryPattern &pattern) {
    return mlp_forward(m, pattern) >= 0.5 ? 1 : -1;
}

/// Mean binary cross-entropy over a batch, labels in {-1, +1} mapped to
/// {0, 1}.
inline double mlp_loss(const MlpModel &m, const std::vector<data::BinaryPattern> &xs,
                       const std::vector<int> &ys) {
    double loss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double q = mlp_forward(m, xs[i]);
        const double y01 = ys[i] == 1 ? 1.0 : 0.0;
        loss += -(y01 * std::log(q) + (1.0 - y01) * std::log(1.0 - q));
    }
    return loss / static_cast<double>(xs.size());
}

/// Analytic backprop gradient of the mean BCE, flattened in the same order
/// as MlpModel::flat().
inline std::vector<double> mlp_gradients(const MlpModel &m,
                                         const std::vector<data::BinaryPattern> &xs,
                                         const std::vector<int> &ys) {
    if (xs.empty() || xs.size() != ys.size())
        throw std::invalid_argument("mlp_gradients: batch must be non-empty and aligned");
    std::vector<double> gw1(m.w1.size(), 0.0), gb1(m.b1.size(), 0.0);
    std::vector<double> gw2(m.w2.size(), 0.0);
    double gb2 = 0.0;
    std::vector<double> hidden(m.n_hidden);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto &x = xs[i];
        double z = m.b2;
        for (int h = 0; h < m.n_hidden; ++h) {
            double a = m.b1[h];
            for (int c = 0; c < m.n_inputs; ++c)
                a += m.w1[static_cast<std::size_t>(h) * m.n_inputs + c] * x[c];
            hidden[h] = a > 0.0 ? a : 0.0;
            z += m.w2[h] * hidden[h];
        }
        const double q = 1.0 / (1.0 + std::exp(-z));
        const double dz = q - (ys[i] == 1 ? 1.0 : 0.0); // dBCE/dz through sigmoid
        gb2 += dz;
        for (int h = 0; h < m.n_hidden; ++h) {
            gw2[h] += dz * hidden[h];
            if (hidden[h] > 0.0) {
                const double dh = dz * m.w2[h];
                gb1[h] += dh;
                for (int c = 0; c < m.n_inputs; ++c)
                    gw1[static_cast<std::size_t>(h) * m.n_inputs + c] += dh * x[c];
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(xs.size());
    std::vector<double> flat;
    flat.reserve(m.n_params());
    for (double g : gw1) flat.push_back(g * inv);
    for (double g : gb1) flat.push_back(g * inv);
    for (double g : gw2) flat.push_back(g * inv);
    flat.push_back(gb2 * inv);
    return flat;
}

inline double mlp_evaluate(const MlpModel &m, const data::LabeledDataset &ds) {
    if (ds.size() == 0) throw std::invalid_argument("mlp_evaluate: dataset is empty");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ds.size(); ++i)
        hits += mlp_predict(m, ds.patterns[i]) == ds.labels[i];
    return static_cast<double>(hits) / static_cast<double>(ds.size());
}

struct MlpTrainResult {
    MlpModel model;
    std::vector<train::EpochMetrics> metrics;
};

/// Mini-batch Adam on BCE with the same loop semantics as the circuit
/// trainer: seeded shuffles, last partial batch kept, per-epoch metrics,
/// optional early stopping on test accuracy.
inline MlpTrainResult mlp_fit(MlpModel model, const data::LabeledDataset &train_set,
                              const data::LabeledDataset *test_set,
                              const train::TrainConfig &config) {
    config.validate();
    train_set.validate();
    if (train_set.size() == 0)
        throw std::invalid_argument("mlp_fit: training set is empty");
    if (train_set.width() != model.n_inputs)
        throw std::invalid_argument("mlp_fit: dataset width must match the input layer");

    data::LabeledDataset test_negated;
    if (test_set) test_negated = data::negate_dataset(*test_set);

    auto values = model.flat();
    train::AdamState adam(values.size());
    std::mt19937_64 shuffle_rng(config.seed);
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    MlpTrainResult result;
    double best_test = -1.0;
    int stale = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t at = 0; at < order.size(); at += config.batch_size) {
            const std::size_t stop = std::min(order.size(), at + config.batch_size);
            std::vector<data::BinaryPattern> bx;
            std::vector<int> by;
            for (std::size_t i = at; i < stop; ++i) {
                bx.push_back(train_set.patterns[order[i]]);
                by.push_back(train_set.labels[order[i]]);
            }
            loss_sum += mlp_loss(model, bx, by);
            auto grads = mlp_gradients(model, bx, by);
            train::adam_step(values, grads, adam, config);
            model.unflatten(values);
            ++batches;
        }
        train::EpochMetrics em;
        em.epoch = epoch;
        em.train_loss = batches ? loss_sum / static_cast<double>(batches) : 0.0;
        em.train_acc = mlp_evaluate(model, train_set);
        if (test_set) {
            em.test_acc = mlp_evaluate(model, *test_set);
            em.test_acc_negated = mlp_evaluate(model, test_negated);
        }
        result.metrics.push_back(em);
        if (test_set && config.early_stop_patience > 0) {
            if (em.test_acc > best_test) {
                best_test = em.test_acc;
                stale = 0;
            } else if (++stale >= config.early_stop_patience) {
                break;
            }
        }
    }
    result.model = std::move(model);
    return result;
}

/// Checkpoint in the shared format, tagged model_kind "mlp".
inline void save_mlp_checkpoint(const std::string &path, const MlpModel &model,
                                const train::TrainConfig &config,
                                const std::vector<train::EpochMetrics> &metrics) {
    nlohmann::json j;
    j["model_kind"] = "mlp";
    j["n_inputs"] = model.n_inputs;
    j["n_hidden"] = model.n_hidden;
    j["w1"] = model.w1;
    j["b1"] = model.b1;
    j["w2"] = model.w2;
    j["b2"] = model.b2;
    j["config"] = train::config_to_json(config);
    j["seed"] = config.seed;
    j["epoch"] = metrics.empty() ? -1 : metrics.back().epoch;
    if (!metrics.empty()) {
        const auto &m = metrics.back();
        j["metrics"] = {{"train_loss", m.train_loss},
                        {"train_acc", m.train_acc},
                        {"test_acc", m.test_acc},
                        {"test_acc_negated", m.test_acc_negated}};
    }
    std::ofstream f(path);
    if (!f) throw data::DataError("cannot write " + path);
    f << j.dump(2) << '\n';
}

inline MlpModel load_mlp_checkpoint(const std::string &path,
                                    train::TrainConfig *config_out = nullptr) {
    std::ifstream f(path);
    if (!f) throw data::DataError("cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(f);
    if (j.value("model_kind", "") != "mlp")
        throw data::FormatError(path + ": not an mlp checkpoint");
    MlpModel m;
    m.n_inputs = j.at("n_inputs").get<int>();
    m.n_hidden = j.at("n_hidden").get<int>();
    m.w1 = j.at("w1").get<std::vector<double>>();
    m.b1 = j.at("b1").get<std::vector<double>>();
    m.w2 = j.at("w2").get<std::vector<double>>();
    m.b2 = j.at("b2").get<double>();
    if (config_out && j.contains("config"))
        *config_out = train::config_from_json(j["config"]);
    return m;
}

} // namespace qnnsim::mlp

#endif // QNNSIM_BASELINE_HPP_
