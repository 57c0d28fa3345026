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
#ifndef QNNSIM_QNN_HPP_
#define QNNSIM_QNN_HPP_

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "qnnsim/statevec.hpp"

namespace qnnsim {

enum class LayerKind { XX, ZZ };

/// Ordered parity layers plus the data-register width. The canonical string
/// form is "XX-ZZ", "ZZ-XX-ZZ", ... (case-insensitive on input).
struct ArchitectureSpec {
    std::vector<LayerKind> layers;
    int n_data_qubits = 0;

    int n_layers() const { return static_cast<int>(layers.size()); }
    int n_params() const { return n_layers() * n_data_qubits; }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < layers.size(); ++i) {
            if (i) s += '-';
            s += layers[i] == LayerKind::XX ? "XX" : "ZZ";
        }
        return s;
    }
};

inline ArchitectureSpec parse_architecture(const std::string &text, int n_data_qubits) {
    if (n_data_qubits < 1)
        throw std::invalid_argument("architecture: need at least one data qubit");
    ArchitectureSpec spec;
    spec.n_data_qubits = n_data_qubits;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, '-')) {
        std::string up;
        for (char c : tok) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (up == "XX") spec.layers.push_back(LayerKind::XX);
        else if (up == "ZZ") spec.layers.push_back(LayerKind::ZZ);
        else throw std::invalid_argument("architecture: unknown layer '" + tok + "'");
    }
    if (spec.layers.empty())
        throw std::invalid_argument("architecture: need at least one layer");
    return spec;
}

/// Trainable angles, row-major [layer][data qubit], radians.
struct ParameterSet {
    int n_layers = 0;
    int n_data_qubits = 0;
    std::vector<double> values;

    ParameterSet() = default;
    ParameterSet(int layers, int data_qubits)
        : n_layers(layers), n_data_qubits(data_qubits),
          values(static_cast<std::size_t>(layers) * data_qubits, 0.0) {}

    double &at(int layer, int qubit) {
        return values[static_cast<std::size_t>(layer) * n_data_qubits + qubit];
    }
    double at(int layer, int qubit) const {
        return values[static_cast<std::size_t>(layer) * n_data_qubits + qubit];
    }
};

inline ParameterSet random_parameters(const ArchitectureSpec &arch, double lo, double hi,
                                      std::uint64_t seed) {
    ParameterSet p(arch.n_layers(), arch.n_data_qubits);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(lo, hi);
    for (auto &v : p.values) v = unif(rng);
    return p;
}

/// Couple readout and data with the Ising parity gates, or with the
/// per-qubit rotation pairs Rs(theta) x Rs(theta) (the non-entangling
/// control of the parity gate with the same generator sum).
enum class CouplingMode { entangling, local };

struct QnnModel {
    ArchitectureSpec arch;
    ParameterSet params;
    Pauli measurement = Pauli::Z;
    CouplingMode coupling = CouplingMode::entangling;

    void validate() const {
        if (params.n_layers != arch.n_layers() ||
            params.n_data_qubits != arch.n_data_qubits)
            throw std::invalid_argument("model: parameter shape does not match architecture");
    }
};

inline QnnModel make_model(const std::string &arch_text, int n_data_qubits,
                           Pauli measurement = Pauli::Z) {
    QnnModel m;
    m.arch = parse_architecture(arch_text, n_data_qubits);
    m.params = ParameterSet(m.arch.n_layers(), n_data_qubits);
    m.measurement = measurement;
    return m;
}

/// Input-register encoding |1, x>: readout prepared as |1>, data qubits as
/// the pattern bits.
inline StateVector build_input(const std::vector<std::uint8_t> &pattern) {
    std::vector<std::uint8_t> bits;
    bits.reserve(pattern.size() + 1);
    bits.push_back(1);
    bits.insert(bits.end(), pattern.begin(), pattern.end());
    return basis_state(static_cast<int>(bits.size()), bits);
}

namespace detail {

// Per-data-pattern phase table of a whole ZZ parity layer (readout bit 0).
// The layer is diagonal, so the phase is the product of per-gate phases;
// the table is filled by flipping one bit at a time. Data qubit k sits at
// index bit N-k. Agreement with the per-gate path is within accumulated
// rounding (~1e-14).
inline void build_zz_phase_table(int n_data_qubits, const double *thetas,
                                 std::vector<cdouble> &table) {
    const std::uint64_t half = std::uint64_t{1} << n_data_qubits;
    table.resize(half);
    cdouble all0 = 1.0;
    for (int k = 0; k < n_data_qubits; ++k) all0 *= std::polar(1.0, -thetas[k] / 2.0);
    table[0] = all0;
    std::array<cdouble, 24> flip{};
    for (int k = 0; k < n_data_qubits; ++k)
        flip[n_data_qubits - 1 - k] = std::polar(1.0, thetas[k]);
    for (std::uint64_t x = 1; x < half; ++x) {
        const int p = std::countr_zero(x);
        table[x] = table[x & (x - 1)] * flip[p];
    }
}

inline void apply_zz_layer_table(StateVector &sv, const std::vector<cdouble> &table) {
    const std::uint64_t half = table.size();
    auto *d = reinterpret_cast<double *>(sv.amplitudes.data());
    const auto *t = reinterpret_cast<const double *>(table.data());
    for (std::uint64_t i = 0; i < half; ++i) { // readout bit 0
        const double ar = d[2 * i], ai = d[2 * i + 1];
        d[2 * i] = ar * t[2 * i] - ai * t[2 * i + 1];
        d[2 * i + 1] = ar * t[2 * i + 1] + ai * t[2 * i];
    }
    double *e = d + 2 * half;
    for (std::uint64_t i = 0; i < half; ++i) { // readout bit 1: conjugate phase
        const double ar = e[2 * i], ai = e[2 * i + 1];
        e[2 * i] = ar * t[2 * i] + ai * t[2 * i + 1];
        e[2 * i + 1] = -ar * t[2 * i + 1] + ai * t[2 * i];
    }
}

inline void apply_zz_layer_fused(StateVector &sv, const double *thetas,
                                 std::vector<cdouble> &table) {
    build_zz_phase_table(sv.n_qubits - 1, thetas, table);
    apply_zz_layer_table(sv, table);
}

} // namespace detail

/// Reusable buffers for repeated circuit evaluation.
struct CircuitScratch {
    std::vector<cdouble> phase_table;
    std::vector<cdouble> meas_scratch;
};

/// Apply layer j of the model to `state` (all N parity gates, data qubits in
/// ascending order).
inline void apply_layer(StateVector &state, const QnnModel &model, int layer,
                        CircuitScratch &scratch) {
    const int N = model.arch.n_data_qubits;
    const double *th = model.params.values.data() +
                       static_cast<std::size_t>(layer) * N;
    const LayerKind kind = model.arch.layers[layer];
    if (model.coupling == CouplingMode::local) {
        for (int k = 0; k < N; ++k) {
            const Gate1Q rot = kind == LayerKind::XX ? gates::rx(th[k]) : gates::rz(th[k]);
            apply_1q(state, rot, 0);
            apply_1q(state, rot, k + 1);
        }
        return;
    }
    if (kind == LayerKind::XX) {
        for (int k = 0; k < N; ++k) apply_2q(state, gates::xx(th[k]), 0, k + 1);
    } else {
        detail::apply_zz_layer_fused(state, th, scratch.phase_table);
    }
}

/// Single parity gate of (layer, qubit) kind at an arbitrary angle; used by
/// the parameter-shift engine to inject the +-pi/2 shift.
inline void apply_parity_gate(StateVector &state, const QnnModel &model, int layer,
                              int qubit, double angle) {
    const LayerKind kind = model.arch.layers[layer];
    if (model.coupling == CouplingMode::local) {
        const Gate1Q rot = kind == LayerKind::XX ? gates::rx(angle) : gates::rz(angle);
        apply_1q(state, rot, 0);
        apply_1q(state, rot, qubit + 1);
        return;
    }
    apply_2q(state, kind == LayerKind::XX ? gates::xx(angle) : gates::zz(angle), 0,
             qubit + 1);
}

/// Out-of-place variant writing gate * src into dst (dst is resized).
inline void apply_parity_gate_oop(StateVector &dst, const StateVector &src,
                                  const QnnModel &model, int layer, int qubit,
                                  double angle) {
    dst.n_qubits = src.n_qubits;
    const LayerKind kind = model.arch.layers[layer];
    if (model.coupling == CouplingMode::local) {
        dst.amplitudes = src.amplitudes;
        const Gate1Q rot = kind == LayerKind::XX ? gates::rx(angle) : gates::rz(angle);
        apply_1q(dst, rot, 0);
        apply_1q(dst, rot, qubit + 1);
        return;
    }
    const std::uint64_t ma = src.mask(0), mb = src.mask(qubit + 1);
    if (kind == LayerKind::XX) {
        const auto g = gates::xx(angle);
        detail::kernel_2q_cross_oop(dst.amplitudes, src.amplitudes, ma, mb, g.m[0],
                                    g.m[3]);
    } else {
        detail::kernel_2q_diag_oop(dst.amplitudes, src.amplitudes, ma, mb,
                                   gates::zz(angle).m);
    }
}

/// Readout expectation of `measurement` as seen after the trailing H, read
/// directly off the pre-H state via H P H conjugation: H Z H = X,
/// H X H = Z, H Y H = -Y.
inline double readout_logit_through_h(const StateVector &pre_h, Pauli measurement) {
    const std::uint64_t mask = pre_h.mask(0);
    switch (measurement) {
    case Pauli::Z: return detail::pair_product_sum(pre_h.amplitudes, mask, false);
    case Pauli::X: return detail::signed_z_sum(pre_h.amplitudes, mask);
    default: return -detail::pair_product_sum(pre_h.amplitudes, mask, true);
    }
}

/// The full circuit: H on the readout, the parity layers in listed order,
/// H on the readout again. Mutates `state` in place.
inline void apply_circuit(StateVector &state, const QnnModel &model,
                          CircuitScratch &scratch) {
    model.validate();
    if (state.n_qubits != model.arch.n_data_qubits + 1)
        throw std::invalid_argument("apply_circuit: state must have N+1 qubits");
    apply_1q(state, gates::hadamard(), 0);
    for (int j = 0; j < model.arch.n_layers(); ++j) apply_layer(state, model, j, scratch);
    apply_1q(state, gates::hadamard(), 0);
}

inline StateVector apply_circuit(const StateVector &state, const QnnModel &model) {
    StateVector out = state;
    CircuitScratch scratch;
    apply_circuit(out, model, scratch);
    return out;
}

/// Exact logit with caller-owned buffers; the readout expectation is taken
/// through the trailing H algebraically, so no basis-change pass is needed.
inline double forward(const QnnModel &model, const std::vector<std::uint8_t> &pattern,
                      StateVector &sv, CircuitScratch &scratch) {
    model.validate();
    const int n = model.arch.n_data_qubits + 1;
    if (n > 24) throw std::invalid_argument("forward: register too large to simulate");
    if (static_cast<int>(pattern.size()) != model.arch.n_data_qubits)
        throw std::invalid_argument("forward: pattern width must equal N");
    sv.n_qubits = n;
    sv.amplitudes.assign(std::size_t{1} << n, cdouble{0.0, 0.0});
    std::uint64_t idx = sv.mask(0);
    for (int k = 0; k < model.arch.n_data_qubits; ++k)
        if (pattern[k]) idx |= sv.mask(k + 1);
    sv.amplitudes[idx] = 1.0;
    apply_1q(sv, gates::hadamard(), 0);
    for (int j = 0; j < model.arch.n_layers(); ++j) apply_layer(sv, model, j, scratch);
    return readout_logit_through_h(sv, model.measurement);
}

/// Exact logit: expectation of the model's measurement on the readout qubit.
inline double forward(const QnnModel &model, const std::vector<std::uint8_t> &pattern) {
    StateVector sv;
    CircuitScratch scratch;
    return forward(model, pattern, sv, scratch);
}

/// Finite-shot estimate of the logit; converges to forward() as shots grow.
inline double forward_sampled(const QnnModel &model, const std::vector<std::uint8_t> &pattern,
                              std::uint64_t shots, std::uint64_t seed) {
    if (static_cast<int>(pattern.size()) != model.arch.n_data_qubits)
        throw std::invalid_argument("forward_sampled: pattern width must equal N");
    StateVector sv = build_input(pattern);
    CircuitScratch scratch;
    apply_circuit(sv, model, scratch);
    return sample_shots(sv, {model.measurement, {0}}, shots, seed);
}

/// Learned representation: per-data-qubit expectations of the measurement.
inline std::vector<double> features(const QnnModel &model,
                                    const std::vector<std::uint8_t> &pattern) {
    if (static_cast<int>(pattern.size()) != model.arch.n_data_qubits)
        throw std::invalid_argument("features: pattern width must equal N");
    StateVector sv = build_input(pattern);
    CircuitScratch scratch;
    apply_circuit(sv, model, scratch);
    std::vector<int> targets(model.arch.n_data_qubits);
    for (int k = 0; k < model.arch.n_data_qubits; ++k) targets[k] = k + 1;
    return expectation_vector(sv, model.measurement, targets);
}

/// Threshold at 0: logits >= 0 map to +1, otherwise -1.
inline int predict(const QnnModel &model, const std::vector<std::uint8_t> &pattern) {
    return forward(model, pattern) >= 0.0 ? 1 : -1;
}

} // namespace qnnsim

#endif // QNNSIM_QNN_HPP_
