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
#ifndef QNNSIM_TRAIN_HPP_
#define QNNSIM_TRAIN_HPP_

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnnsim/data.hpp"
#include "qnnsim/parallel.hpp"
#include "qnnsim/qnn.hpp"

namespace qnnsim::train {

/// Optimiser and loop settings. The optimiser defaults mirror the reference
/// experimental setup (Adam beta1 0.9, beta2 0.999, eps 1e-7, batch 32,
/// learning rate 1e-4).
struct TrainConfig {
    int batch_size = 32;
    double learning_rate = 1e-4;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-7;
    int epochs = 30;
    std::uint64_t seed = 0;
    std::uint64_t shots = 0;     // 0 = exact expectations
    int early_stop_patience = 5; // 0 disables early stopping
    double init_range = 0.1;     // theta ~ Uniform(-init_range, init_range)

    void validate() const {
        if (batch_size < 1 || epochs < 0 || learning_rate <= 0 || adam_beta1 <= 0 ||
            adam_beta1 >= 1 || adam_beta2 <= 0 || adam_beta2 >= 1 || adam_eps <= 0)
            throw std::invalid_argument("TrainConfig: invalid optimiser settings");
    }
};

struct AdamState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    std::uint64_t step = 0;

    explicit AdamState(std::size_t n_params = 0)
        : first_moment(n_params, 0.0), second_moment(n_params, 0.0) {}
};

/// Hinge loss max(0, 1 - y * logit).
inline double hinge_loss(double logit, int label) {
    if (label != -1 && label != 1)
        throw std::invalid_argument("hinge_loss: label must be -1 or +1");
    return std::max(0.0, 1.0 - static_cast<double>(label) * logit);
}

/// Numerical gradient of the loss in one parameter by the +-pi/2 shift rule:
/// [L(f at theta + pi/2) - L(f at theta - pi/2)] / 2. Leaves theta unchanged.
inline double param_shift_grad(const QnnModel &model,
                               const data::BinaryPattern &pattern, int label,
                               int layer, int qubit) {
    if (layer < 0 || layer >= model.arch.n_layers() || qubit < 0 ||
        qubit >= model.arch.n_data_qubits)
        throw std::invalid_argument("param_shift_grad: parameter index out of range");
    QnnModel shifted = model;
    shifted.params.at(layer, qubit) = model.params.at(layer, qubit) + M_PI / 2.0;
    const double up = hinge_loss(forward(shifted, pattern), label);
    shifted.params.at(layer, qubit) = model.params.at(layer, qubit) - M_PI / 2.0;
    const double down = hinge_loss(forward(shifted, pattern), label);
    return (up - down) / 2.0;
}

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a + 0x9e3779b97f4a7c15ull + (b << 6) + (b >> 2);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

// Per-thread workspace for shift-rule gradients. States after the readout H
// and after each full layer are cached once per example; a shifted
// evaluation then restarts from the cached layer boundary. Gates inside a
// layer share commuting generators, so the theta(j,k) +- pi/2 circuit equals
// the unshifted layer followed by one extra parity gate at angle +-pi/2,
// applied out of place from the cached boundary state. ZZ-layer phase
// tables depend only on theta and are built once per example.
struct GradEngine {
    std::vector<StateVector> layer_states; // [0] = after H, [j+1] = after layer j
    StateVector work;
    CircuitScratch scratch;
    std::vector<std::vector<cdouble>> zz_tables;

    void apply_layer_cached(StateVector &sv, const QnnModel &model, int layer) {
        if (model.coupling == CouplingMode::entangling &&
            model.arch.layers[layer] == LayerKind::ZZ)
            qnnsim::detail::apply_zz_layer_table(sv, zz_tables[layer]);
        else
            apply_layer(sv, model, layer, scratch);
    }

    double eval_from(const QnnModel &model, int next_layer, std::uint64_t shots,
                     std::uint64_t shot_seed) {
        for (int l = next_layer; l < model.arch.n_layers(); ++l)
            apply_layer_cached(work, model, l);
        if (shots == 0) return readout_logit_through_h(work, model.measurement);
        apply_1q(work, gates::hadamard(), 0);
        return sample_shots(work, {model.measurement, {0}}, shots, shot_seed);
    }

    // Gradient of the hinge loss for one example; returns the base-point
    // loss. `grad` must hold n_params doubles.
    double example_grad(const QnnModel &model, const data::BinaryPattern &pattern,
                        int label, double *grad, std::uint64_t shots,
                        std::uint64_t shot_seed) {
        const int L = model.arch.n_layers(), N = model.arch.n_data_qubits;
        zz_tables.resize(L);
        if (model.coupling == CouplingMode::entangling)
            for (int j = 0; j < L; ++j)
                if (model.arch.layers[j] == LayerKind::ZZ)
                    qnnsim::detail::build_zz_phase_table(
                        N, model.params.values.data() + static_cast<std::size_t>(j) * N,
                        zz_tables[j]);
        layer_states.resize(L + 1);
        layer_states[0] = build_input(pattern);
        apply_1q(layer_states[0], gates::hadamard(), 0);
        for (int j = 0; j < L; ++j) {
            layer_states[j + 1] = layer_states[j];
            apply_layer_cached(layer_states[j + 1], model, j);
        }
        double f_base;
        if (shots == 0) {
            f_base = readout_logit_through_h(layer_states[L], model.measurement);
        } else {
            work = layer_states[L];
            f_base = eval_from(model, L, shots, mix_seed(shot_seed, 0));
        }

        for (int j = 0; j < L; ++j)
            for (int k = 0; k < N; ++k) {
                double shifted[2];
                for (int s = 0; s < 2; ++s) {
                    const double angle = s == 0 ? M_PI / 2.0 : -M_PI / 2.0;
                    apply_parity_gate_oop(work, layer_states[j + 1], model, j, k, angle);
                    shifted[s] = eval_from(model, j + 1, shots,
                                           mix_seed(shot_seed, 2 * (j * N + k) + s + 1));
                }
                grad[j * N + k] =
                    (hinge_loss(shifted[0], label) - hinge_loss(shifted[1], label)) / 2.0;
            }
        return hinge_loss(f_base, label);
    }
};

} // namespace detail

/// Mini-batch gradient: mean over the batch of per-example shift-rule
/// gradients (2 * n_params circuit evaluations per example). Reduction runs
/// in example order, so results do not depend on the worker count.
/// Optionally reports the mean base-point hinge loss through `loss_out`.
inline std::vector<double> grad_full(const QnnModel &model,
                                     const std::vector<data::BinaryPattern> &patterns,
                                     const std::vector<int> &labels,
                                     std::uint64_t shots = 0,
                                     std::uint64_t shot_seed = 0,
                                     double *loss_out = nullptr) {
    model.validate();
    if (patterns.empty() || patterns.size() != labels.size())
        throw std::invalid_argument("grad_full: batch must be non-empty and aligned");
    const std::size_t m = patterns.size();
    const std::size_t np = static_cast<std::size_t>(model.arch.n_params());

    std::vector<double> per_example(m * np);
    std::vector<double> losses(m);
    parallel_chunks(m, [&](int, std::size_t begin, std::size_t end) {
        detail::GradEngine engine;
        for (std::size_t i = begin; i < end; ++i)
            losses[i] = engine.example_grad(model, patterns[i], labels[i],
                                            per_example.data() + i * np, shots,
                                            detail::mix_seed(shot_seed, i));
    });

    std::vector<double> mean(np, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < np; ++p) mean[p] += per_example[i * np + p];
    for (auto &g : mean) g /= static_cast<double>(m);
    if (loss_out)
        *loss_out = std::accumulate(losses.begin(), losses.end(), 0.0) /
                    static_cast<double>(m);
    return mean;
}

/// One Adam update with bias-corrected moments over a flat value vector.
inline void adam_step(std::vector<double> &values, const std::vector<double> &grads,
                      AdamState &state, const TrainConfig &config) {
    if (grads.size() != values.size() || state.first_moment.size() != values.size())
        throw std::invalid_argument("adam_step: shape mismatch");
    state.step += 1;
    const double b1 = config.adam_beta1, b2 = config.adam_beta2;
    const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < grads.size(); ++i) {
        state.first_moment[i] = b1 * state.first_moment[i] + (1.0 - b1) * grads[i];
        state.second_moment[i] =
            b2 * state.second_moment[i] + (1.0 - b2) * grads[i] * grads[i];
        const double mhat = state.first_moment[i] / corr1;
        const double vhat = state.second_moment[i] / corr2;
        values[i] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.adam_eps);
    }
}

inline void adam_step(ParameterSet &params, const std::vector<double> &grads,
                      AdamState &state, const TrainConfig &config) {
    adam_step(params.values, grads, state, config);
}

/// Fraction of examples where predict() matches the label.
inline double evaluate(const QnnModel &model, const data::LabeledDataset &ds) {
    if (ds.size() == 0) throw std::invalid_argument("evaluate: dataset is empty");
    std::vector<int> hits(ds.size());
    parallel_chunks(ds.size(), [&](int, std::size_t begin, std::size_t end) {
        StateVector sv;
        CircuitScratch scratch;
        for (std::size_t i = begin; i < end; ++i) {
            const double f = forward(model, ds.patterns[i], sv, scratch);
            hits[i] = (f >= 0.0 ? 1 : -1) == ds.labels[i];
        }
    });
    return std::accumulate(hits.begin(), hits.end(), 0.0) /
           static_cast<double>(ds.size());
}

struct EpochMetrics {
    int epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double test_acc = std::numeric_limits<double>::quiet_NaN();
    double test_acc_negated = std::numeric_limits<double>::quiet_NaN();
};

struct TrainResult {
    QnnModel model;
    std::vector<EpochMetrics> metrics;
};

/// Mini-batch training: per-epoch shuffle seeded from config.seed, shift-rule
/// gradients, Adam updates, metrics after every epoch. The parameter matrix
/// is (re)initialised from config.seed; epochs == 0 returns the initialised
/// model. Early stopping fires after `early_stop_patience` epochs without
/// test-accuracy improvement when a test set is given.
inline TrainResult fit(QnnModel model, const data::LabeledDataset &train_set,
                       const data::LabeledDataset *test_set, const TrainConfig &config) {
    config.validate();
    train_set.validate();
    if (train_set.size() == 0) throw std::invalid_argument("fit: training set is empty");
    if (train_set.width() != model.arch.n_data_qubits)
        throw std::invalid_argument("fit: dataset width must equal N");

    model.params = random_parameters(model.arch, -config.init_range, config.init_range,
                                     config.seed);

    data::LabeledDataset test_negated;
    if (test_set) {
        test_set->validate();
        test_negated = data::negate_dataset(*test_set);
    }

    AdamState adam(model.params.values.size());
    std::mt19937_64 shuffle_rng(config.seed);
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainResult result;
    double best_test = -1.0;
    int stale = 0;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t at = 0; at < order.size(); at += config.batch_size) {
            const std::size_t stop = std::min(order.size(), at + config.batch_size);
            std::vector<data::BinaryPattern> bp;
            std::vector<int> bl;
            bp.reserve(stop - at);
            for (std::size_t i = at; i < stop; ++i) {
                bp.push_back(train_set.patterns[order[i]]);
                bl.push_back(train_set.labels[order[i]]);
            }
            double batch_loss = 0.0;
            const std::uint64_t shot_seed =
                detail::mix_seed(config.seed, (std::uint64_t(epoch) << 32) | batches);
            auto grads = grad_full(model, bp, bl, config.shots, shot_seed, &batch_loss);
            adam_step(model.params, grads, adam, config);
            loss_sum += batch_loss;
            ++batches;
        }

        EpochMetrics em;
        em.epoch = epoch;
        em.train_loss = batches ? loss_sum / static_cast<double>(batches) : 0.0;
        em.train_acc = evaluate(model, train_set);
        if (test_set) {
            em.test_acc = evaluate(model, *test_set);
            em.test_acc_negated = evaluate(model, test_negated);
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

// ---------------------------------------------------------------------------
// Checkpoint and metrics files

inline nlohmann::json config_to_json(const TrainConfig &c) {
    return {{"batch_size", c.batch_size},
            {"learning_rate", c.learning_rate},
            {"adam_beta1", c.adam_beta1},
            {"adam_beta2", c.adam_beta2},
            {"adam_eps", c.adam_eps},
            {"epochs", c.epochs},
            {"seed", c.seed},
            {"shots", c.shots},
            {"early_stop_patience", c.early_stop_patience},
            {"init_range", c.init_range}};
}

inline TrainConfig config_from_json(const nlohmann::json &j) {
    TrainConfig c;
    c.batch_size = j.value("batch_size", c.batch_size);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.adam_beta1 = j.value("adam_beta1", c.adam_beta1);
    c.adam_beta2 = j.value("adam_beta2", c.adam_beta2);
    c.adam_eps = j.value("adam_eps", c.adam_eps);
    c.epochs = j.value("epochs", c.epochs);
    c.seed = j.value("seed", c.seed);
    c.shots = j.value("shots", c.shots);
    c.early_stop_patience = j.value("early_stop_patience", c.early_stop_patience);
    c.init_range = j.value("init_range", c.init_range);
    return c;
}

/// Serialise a trained model plus its provenance. Theta round-trips
/// bit-exactly (shortest round-trip decimal representation).
inline void save_checkpoint(const std::string &path, const QnnModel &model,
                            const TrainConfig &config,
                            const std::vector<EpochMetrics> &metrics) {
    nlohmann::json j;
    j["model_kind"] = "qnn";
    j["arch"] = model.arch.to_string();
    j["n_data_qubits"] = model.arch.n_data_qubits;
    j["measurement"] = std::string(1, pauli_name(model.measurement));
    j["coupling"] = model.coupling == CouplingMode::entangling ? "entangling" : "local";
    nlohmann::json theta = nlohmann::json::array();
    for (int l = 0; l < model.arch.n_layers(); ++l) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < model.arch.n_data_qubits; ++k) row.push_back(model.params.at(l, k));
        theta.push_back(row);
    }
    j["theta"] = theta;
    j["config"] = config_to_json(config);
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

inline QnnModel load_checkpoint(const std::string &path, TrainConfig *config_out = nullptr) {
    std::ifstream f(path);
    if (!f) throw data::DataError("cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(f);
    if (j.value("model_kind", "qnn") != "qnn")
        throw data::FormatError(path + ": not a qnn checkpoint");
    QnnModel model = make_model(j.at("arch").get<std::string>(),
                                j.at("n_data_qubits").get<int>(),
                                parse_pauli(j.at("measurement").get<std::string>()));
    if (j.value("coupling", "entangling") == "local") model.coupling = CouplingMode::local;
    const auto &theta = j.at("theta");
    for (int l = 0; l < model.arch.n_layers(); ++l)
        for (int k = 0; k < model.arch.n_data_qubits; ++k)
            model.params.at(l, k) = theta.at(l).at(k).get<double>();
    if (config_out && j.contains("config")) *config_out = config_from_json(j["config"]);
    return model;
}

inline void save_metrics_csv(const std::string &path,
                             const std::vector<EpochMetrics> &metrics) {
    std::ofstream f(path);
    if (!f) throw data::DataError("cannot write " + path);
    f << "epoch,train_loss,train_acc,test_acc,test_acc_negated\n";
    f << std::setprecision(12);
    for (const auto &m : metrics)
        f << m.epoch << ',' << m.train_loss << ',' << m.train_acc << ',' << m.test_acc
          << ',' << m.test_acc_negated << '\n';
}

} // namespace qnnsim::train

#endif // QNNSIM_TRAIN_HPP_
