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
#ifndef QNNSIM_SYMMETRY_HPP_
#define QNNSIM_SYMMETRY_HPP_

#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnnsim/data.hpp"
#include "qnnsim/qnn.hpp"

namespace qnnsim::sym {

/// What a grid cell asserts about f(x) versus f of the negated pattern.
enum class Claim { equal, antisymmetric, constant, zero };

inline std::string claim_name(Claim c) {
    switch (c) {
    case Claim::equal: return "equal";
    case Claim::antisymmetric: return "antisymmetric";
    case Claim::constant: return "constant";
    default: return "zero";
    }
}

struct SymmetryReport {
    std::string architecture;
    Pauli measurement = Pauli::Z;
    Claim claim = Claim::equal;
    double constant_value = 0.0; // set when claim == constant
    int trials = 0;
    double tolerance = 0.0;
    double max_deviation = 0.0;
    bool pass = false;
};

struct PairStats {
    double mean_diff = 0.0;
    double std_diff = 0.0;
    double mean_pearson = 0.0;
    double mean_cosine = 0.0;
    double max_pair_norm = 0.0;
    std::size_t n_pairs = 0;
    std::size_t skipped_pairs = 0; // zero-norm or zero-variance feature pairs
};

namespace detail {

inline bool has_zz(const ArchitectureSpec &arch) {
    for (auto l : arch.layers)
        if (l == LayerKind::ZZ) return true;
    return false;
}

// Table row for the readout measurement: what the (architecture, Pauli)
// cell claims about the logit pair.
inline SymmetryReport logit_cell(const std::string &arch_text, int n, Pauli meas) {
    SymmetryReport r;
    r.architecture = arch_text;
    r.measurement = meas;
    const bool zz = has_zz(parse_architecture(arch_text, n));
    switch (meas) {
    case Pauli::Z:
        if (zz) {
            r.claim = Claim::equal;
        } else {
            r.claim = Claim::constant;
            r.constant_value = -1.0;
        }
        break;
    case Pauli::X:
        r.claim = Claim::constant;
        r.constant_value = 0.0;
        break;
    case Pauli::Y:
        if (zz) {
            r.claim = Claim::antisymmetric;
        } else {
            r.claim = Claim::constant;
            r.constant_value = 0.0;
        }
        break;
    }
    return r;
}

inline data::BinaryPattern random_pattern(int n, std::mt19937_64 &rng) {
    data::BinaryPattern p(n);
    for (auto &b : p) b = rng() & 1;
    return p;
}

} // namespace detail

/// Verify a logit claim over fresh random (theta, pattern) draws,
/// theta ~ U(-pi, pi) per parameter. Architectures without a ZZ layer get
/// their constant-cell claim instead of plain equality.
inline SymmetryReport check_theorem1(const std::string &arch_text, int n_data_qubits,
                                     int trials, std::uint64_t seed, double tol,
                                     Pauli measurement = Pauli::Z) {
    if (trials < 1) throw std::invalid_argument("check_theorem1: trials must be >= 1");
    SymmetryReport r = detail::logit_cell(arch_text, n_data_qubits, measurement);
    r.trials = trials;
    r.tolerance = tol;
    auto model = make_model(arch_text, n_data_qubits, measurement);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    for (int t = 0; t < trials; ++t) {
        for (auto &v : model.params.values) v = ang(rng);
        const auto x = detail::random_pattern(n_data_qubits, rng);
        const double fx = forward(model, x);
        const double fn = forward(model, data::negate(x));
        double dev = 0.0;
        switch (r.claim) {
        case Claim::equal: dev = std::abs(fx - fn); break;
        case Claim::antisymmetric: dev = std::abs(fx + fn); break;
        case Claim::constant:
            dev = std::max(std::abs(fx - r.constant_value),
                           std::abs(fn - r.constant_value));
            break;
        case Claim::zero: dev = std::max(std::abs(fx), std::abs(fn)); break;
        }
        r.max_deviation = std::max(r.max_deviation, dev);
    }
    r.pass = r.max_deviation <= tol;
    return r;
}

/// Verify a representation claim: Z and Y features antisymmetric, X features
/// identically zero.
inline SymmetryReport check_theorem2(const std::string &arch_text, int n_data_qubits,
                                     int trials, std::uint64_t seed, double tol,
                                     Pauli measurement = Pauli::Z) {
    if (trials < 1) throw std::invalid_argument("check_theorem2: trials must be >= 1");
    SymmetryReport r;
    r.architecture = arch_text;
    r.measurement = measurement;
    r.claim = measurement == Pauli::X ? Claim::zero : Claim::antisymmetric;
    r.trials = trials;
    r.tolerance = tol;
    auto model = make_model(arch_text, n_data_qubits, measurement);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    for (int t = 0; t < trials; ++t) {
        for (auto &v : model.params.values) v = ang(rng);
        const auto x = detail::random_pattern(n_data_qubits, rng);
        const auto gx = features(model, x);
        const auto gn = features(model, data::negate(x));
        double dev = 0.0;
        for (int k = 0; k < n_data_qubits; ++k) {
            if (r.claim == Claim::zero)
                dev = std::max({dev, std::abs(gx[k]), std::abs(gn[k])});
            else
                dev = std::max(dev, std::abs(gx[k] + gn[k]));
        }
        r.max_deviation = std::max(r.max_deviation, dev);
    }
    r.pass = r.max_deviation <= tol;
    return r;
}

/// The 12-cell readout grid: architectures {XX, ZZ, XX-ZZ, ZZ-XX} crossed
/// with measurements {Z, X, Y}.
inline std::vector<SymmetryReport> check_table1_grid(int n_data_qubits, int trials,
                                                     std::uint64_t seed,
                                                     double tol = 1e-9) {
    std::vector<SymmetryReport> out;
    std::uint64_t cell = 0;
    for (const char *arch : {"XX", "ZZ", "XX-ZZ", "ZZ-XX"})
        for (Pauli m : {Pauli::Z, Pauli::X, Pauli::Y})
            out.push_back(
                check_theorem1(arch, n_data_qubits, trials, seed + cell++, tol, m));
    return out;
}

/// The 3-row representation grid over measurements {Z, X, Y}, evaluated on
/// the two-layer XX-ZZ architecture.
inline std::vector<SymmetryReport> check_table2_grid(int n_data_qubits, int trials,
                                                     std::uint64_t seed,
                                                     double tol = 1e-9) {
    std::vector<SymmetryReport> out;
    std::uint64_t cell = 100;
    for (Pauli m : {Pauli::Z, Pauli::X, Pauli::Y})
        out.push_back(
            check_theorem2("XX-ZZ", n_data_qubits, trials, seed + cell++, tol, m));
    return out;
}

/// Statistics of forward(x) - forward(negate(x)) over a dataset. Cosine,
/// Pearson and pair-norm fields belong to the feature variant and are NaN.
inline PairStats logit_pair_stats(const QnnModel &model, const data::LabeledDataset &ds) {
    if (ds.size() == 0) throw std::invalid_argument("logit_pair_stats: dataset is empty");
    PairStats s;
    s.n_pairs = ds.size();
    std::vector<double> diffs(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double fx = forward(model, ds.patterns[i]);
        const double fn = forward(model, data::negate(ds.patterns[i]));
        diffs[i] = fx - fn;
        s.mean_diff += diffs[i];
    }
    s.mean_diff /= static_cast<double>(ds.size());
    double var = 0.0;
    for (double d : diffs) var += (d - s.mean_diff) * (d - s.mean_diff);
    s.std_diff = std::sqrt(var / static_cast<double>(ds.size()));
    s.mean_pearson = std::numeric_limits<double>::quiet_NaN();
    s.mean_cosine = std::numeric_limits<double>::quiet_NaN();
    s.max_pair_norm = std::numeric_limits<double>::quiet_NaN();
    return s;
}

/// Pairwise feature statistics between g(x) and g(negate(x)): the largest
/// 2-norm of the pair sum, plus mean cosine similarity and mean Pearson
/// correlation across the feature components. Pairs whose cosine or Pearson
/// value is undefined (zero norm or zero variance) are counted as skipped.
inline PairStats feature_pair_stats(const QnnModel &model,
                                    const data::LabeledDataset &ds) {
    if (ds.size() == 0)
        throw std::invalid_argument("feature_pair_stats: dataset is empty");
    const int N = model.arch.n_data_qubits;
    PairStats s;
    s.n_pairs = ds.size();
    s.mean_diff = std::numeric_limits<double>::quiet_NaN();
    s.std_diff = std::numeric_limits<double>::quiet_NaN();
    double cos_sum = 0.0, pear_sum = 0.0;
    std::size_t cos_n = 0, pear_n = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto gx = features(model, ds.patterns[i]);
        const auto gn = features(model, data::negate(ds.patterns[i]));
        double dot = 0.0, nx = 0.0, nn = 0.0, norm2 = 0.0;
        double mx = 0.0, mn = 0.0;
        for (int k = 0; k < N; ++k) {
            dot += gx[k] * gn[k];
            nx += gx[k] * gx[k];
            nn += gn[k] * gn[k];
            const double su = gx[k] + gn[k];
            norm2 += su * su;
            mx += gx[k];
            mn += gn[k];
        }
        s.max_pair_norm = std::max(s.max_pair_norm, std::sqrt(norm2));
        bool skipped = false;
        if (nx > 0.0 && nn > 0.0) {
            cos_sum += dot / std::sqrt(nx * nn);
            ++cos_n;
        } else {
            skipped = true;
        }
        mx /= N;
        mn /= N;
        double cov = 0.0, vx = 0.0, vn = 0.0;
        for (int k = 0; k < N; ++k) {
            cov += (gx[k] - mx) * (gn[k] - mn);
            vx += (gx[k] - mx) * (gx[k] - mx);
            vn += (gn[k] - mn) * (gn[k] - mn);
        }
        if (vx > 0.0 && vn > 0.0) {
            pear_sum += cov / std::sqrt(vx * vn);
            ++pear_n;
        } else {
            skipped = true;
        }
        if (skipped) ++s.skipped_pairs;
    }
    s.mean_cosine = cos_n ? cos_sum / static_cast<double>(cos_n)
                          : std::numeric_limits<double>::quiet_NaN();
    s.mean_pearson = pear_n ? pear_sum / static_cast<double>(pear_n)
                            : std::numeric_limits<double>::quiet_NaN();
    return s;
}

enum class BellBasis { computational, fourier };

/// Joint outcome probabilities of the two-qubit state CNOT (H x I) |00> in
/// the chosen basis, ordered (00, 01, 10, 11) / (++, +-, -+, --).
inline std::array<double, 4> bell_probabilities(BellBasis basis) {
    auto sv = basis_state(2, {0, 0});
    apply_1q(sv, gates::hadamard(), 0);
    apply_2q(sv, gates::cnot(), 0, 1);
    if (basis == BellBasis::fourier) {
        apply_1q(sv, gates::hadamard(), 0);
        apply_1q(sv, gates::hadamard(), 1);
    }
    std::array<double, 4> p{};
    for (int i = 0; i < 4; ++i) p[i] = std::norm(sv.amplitudes[i]);
    return p;
}

// ---------------------------------------------------------------------------
// Report output

inline nlohmann::json report_to_json(const SymmetryReport &r) {
    nlohmann::json j{{"architecture", r.architecture},
                     {"measurement", std::string(1, pauli_name(r.measurement))},
                     {"claim", claim_name(r.claim)},
                     {"trials", r.trials},
                     {"tolerance", r.tolerance},
                     {"max_deviation", r.max_deviation},
                     {"pass", r.pass}};
    if (r.claim == Claim::constant) j["constant"] = r.constant_value;
    return j;
}

inline nlohmann::json reports_to_json(const std::vector<SymmetryReport> &rs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &r : rs) arr.push_back(report_to_json(r));
    return arr;
}

inline void print_reports(std::ostream &os, const std::vector<SymmetryReport> &rs) {
    os << std::left << std::setw(14) << "architecture" << std::setw(5) << "M"
       << std::setw(16) << "claim" << std::setw(9) << "trials" << std::setw(14)
       << "max_dev" << "result\n";
    for (const auto &r : rs) {
        std::string claim = claim_name(r.claim);
        if (r.claim == Claim::constant) {
            std::ostringstream c;
            c << claim << "(" << r.constant_value << ")";
            claim = c.str();
        }
        os << std::left << std::setw(14) << ("(" + r.architecture + ")") << std::setw(5)
           << pauli_name(r.measurement) << std::setw(16) << claim << std::setw(9)
           << r.trials << std::setw(14) << std::scientific << std::setprecision(2)
           << r.max_deviation << (r.pass ? "pass" : "FAIL") << '\n';
        os.unsetf(std::ios::scientific);
    }
}

} // namespace qnnsim::sym

#endif // QNNSIM_SYMMETRY_HPP_
