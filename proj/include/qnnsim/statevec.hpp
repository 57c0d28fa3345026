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
#ifndef QNNSIM_STATEVEC_HPP_
#define QNNSIM_STATEVEC_HPP_

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnnsim {

using cdouble = std::complex<double>;

enum class Pauli { X, Y, Z };

inline char pauli_name(Pauli p) {
    switch (p) {
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    default: return 'Z';
    }
}

inline Pauli parse_pauli(const std::string &s) {
    if (s == "X" || s == "x") return Pauli::X;
    if (s == "Y" || s == "y") return Pauli::Y;
    if (s == "Z" || s == "z") return Pauli::Z;
    throw std::invalid_argument("unknown Pauli measurement: " + s);
}

/**
 * @brief Dense statevector over n qubits.
 *
 * Amplitude layout: basis index bit k corresponds to qubit k with qubit 0
 * as the most significant bit, i.e. |b0 b1 ... b_{n-1}> sits at index
 * sum_k b_k * 2^{n-1-k}. Gates mutate the amplitudes in place.
 */
struct StateVector {
    int n_qubits = 0;
    std::vector<cdouble> amplitudes;

    StateVector() = default;
    explicit StateVector(int n)
        : n_qubits(n), amplitudes(std::size_t{1} << n, cdouble{0.0, 0.0}) {
        if (n < 1 || n > 24) throw std::invalid_argument("qubit count out of range");
        amplitudes[0] = 1.0;
    }

    std::size_t size() const { return amplitudes.size(); }

    // index mask of qubit q (qubit 0 is the most significant bit)
    std::uint64_t mask(int q) const { return std::uint64_t{1} << (n_qubits - 1 - q); }

    double norm() const {
        double s = 0.0;
        for (const auto &a : amplitudes) s += std::norm(a);
        return std::sqrt(s);
    }
};

/// Computational basis state |bits[0] bits[1] ... bits[n-1]>.
inline StateVector basis_state(int n_qubits, const std::vector<std::uint8_t> &bits) {
    if (static_cast<int>(bits.size()) != n_qubits)
        throw std::invalid_argument("basis_state: bit string length must equal qubit count");
    StateVector sv(n_qubits);
    std::uint64_t idx = 0;
    for (int k = 0; k < n_qubits; ++k) {
        if (bits[k] > 1) throw std::invalid_argument("basis_state: bits must be 0 or 1");
        if (bits[k]) idx |= sv.mask(k);
    }
    sv.amplitudes[0] = 0.0;
    sv.amplitudes[idx] = 1.0;
    return sv;
}

/// Single-qubit gate: row-major 2x2 unitary.
struct Gate1Q {
    std::array<cdouble, 4> m;
    std::string name;
};

/// Two-qubit gate: row-major 4x4 unitary over basis (00, 01, 10, 11) of
/// (first qubit, second qubit).
struct Gate2Q {
    std::array<cdouble, 16> m;
    std::string name;
};

namespace gates {

inline Gate1Q identity() { return {{1, 0, 0, 1}, "I"}; }
inline Gate1Q pauli_x() { return {{0, 1, 1, 0}, "X"}; }
inline Gate1Q pauli_y() { return {{0, cdouble{0, -1}, cdouble{0, 1}, 0}, "Y"}; }
inline Gate1Q pauli_z() { return {{1, 0, 0, -1}, "Z"}; }

inline Gate1Q hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    return {{s, s, s, -s}, "H"};
}

inline Gate1Q s_gate() { return {{1, 0, 0, cdouble{0, 1}}, "S"}; }
inline Gate1Q s_dagger() { return {{1, 0, 0, cdouble{0, -1}}, "Sdg"}; }

inline Gate1Q rx(double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    return {{c, cdouble{0, -s}, cdouble{0, -s}, c}, "Rx"};
}

inline Gate1Q ry(double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    return {{c, -s, s, c}, "Ry"};
}

inline Gate1Q rz(double theta) {
    return {{std::polar(1.0, -theta / 2.0), 0, 0, std::polar(1.0, theta / 2.0)}, "Rz"};
}

/// Ising coupling exp(-i theta/2 X(x)X): cos(theta/2) I - i sin(theta/2) X(x)X.
inline Gate2Q xx(double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const cdouble is{0, -s};
    return {{c, 0, 0, is,
             0, c, is, 0,
             0, is, c, 0,
             is, 0, 0, c},
            "XX"};
}

/// Ising coupling exp(-i theta/2 Z(x)Z): diagonal phases by bit parity.
inline Gate2Q zz(double theta) {
    const cdouble e = std::polar(1.0, -theta / 2.0);
    const cdouble ec = std::conj(e);
    return {{e, 0, 0, 0,
             0, ec, 0, 0,
             0, 0, ec, 0,
             0, 0, 0, e},
            "ZZ"};
}

/// CNOT with the first qubit as control.
inline Gate2Q cnot() {
    return {{1, 0, 0, 0,
             0, 1, 0, 0,
             0, 0, 0, 1,
             0, 0, 1, 0},
            "CNOT"};
}

} // namespace gates

/// Pauli observable acting on one or more target qubits.
struct Observable {
    Pauli pauli = Pauli::Z;
    std::vector<int> targets;
};

namespace detail {

inline void check_target(const StateVector &sv, int q) {
    if (q < 0 || q >= sv.n_qubits)
        throw std::invalid_argument("qubit index out of range");
}

// In-place 2x2 update over all (i, i+mask) pairs. Written in explicit real
// arithmetic so the loop vectorizes without -ffast-math.
inline void kernel_1q(std::vector<cdouble> &amp, std::uint64_t mask,
                      const std::array<cdouble, 4> &u) {
    const std::uint64_t n = amp.size();
    const double u00r = u[0].real(), u00i = u[0].imag();
    const double u01r = u[1].real(), u01i = u[1].imag();
    const double u10r = u[2].real(), u10i = u[2].imag();
    const double u11r = u[3].real(), u11i = u[3].imag();
    auto *d = reinterpret_cast<double *>(amp.data());
    for (std::uint64_t base = 0; base < n; base += 2 * mask) {
        for (std::uint64_t i = base; i < base + mask; ++i) {
            const std::uint64_t j = i + mask;
            const double ar = d[2 * i], ai = d[2 * i + 1];
            const double br = d[2 * j], bi = d[2 * j + 1];
            d[2 * i] = u00r * ar - u00i * ai + u01r * br - u01i * bi;
            d[2 * i + 1] = u00r * ai + u00i * ar + u01r * bi + u01i * br;
            d[2 * j] = u10r * ar - u10i * ai + u11r * br - u11i * bi;
            d[2 * j + 1] = u10r * ai + u10i * ar + u11r * bi + u11i * br;
        }
    }
}

// Hadamard specialisation: (a+b)/sqrt2, (a-b)/sqrt2.
inline void kernel_h(std::vector<cdouble> &amp, std::uint64_t mask) {
    const std::uint64_t n = amp.size();
    const double s = 1.0 / std::sqrt(2.0);
    auto *d = reinterpret_cast<double *>(amp.data());
    for (std::uint64_t base = 0; base < n; base += 2 * mask) {
        for (std::uint64_t i = base; i < base + mask; ++i) {
            const std::uint64_t j = i + mask;
            const double ar = d[2 * i], ai = d[2 * i + 1];
            const double br = d[2 * j], bi = d[2 * j + 1];
            d[2 * i] = s * (ar + br);
            d[2 * i + 1] = s * (ai + bi);
            d[2 * j] = s * (ar - br);
            d[2 * j + 1] = s * (ai - bi);
        }
    }
}

// Walks every 4-amplitude group of a qubit pair exactly once. The body sees
// the group's 00 index; mask_hi > mask_lo are the pair's index masks.
template <typename Body>
inline void for_each_2q_group(std::uint64_t n, std::uint64_t mask_hi,
                              std::uint64_t mask_lo, Body &&body) {
    for (std::uint64_t b0 = 0; b0 < n; b0 += 2 * mask_hi)
        for (std::uint64_t b1 = b0; b1 < b0 + mask_hi; b1 += 2 * mask_lo)
            for (std::uint64_t i = b1; i < b1 + mask_lo; ++i) body(i);
}

// Generic dense 4x4 update. The matrix is given in (q_a, q_b) bit order;
// the walk uses (hi, lo) masks, so rows/columns are permuted when q_b is
// the more significant qubit.
inline void kernel_2q_dense(std::vector<cdouble> &amp, std::uint64_t mask_a,
                            std::uint64_t mask_b, const std::array<cdouble, 16> &u) {
    const std::uint64_t hi = std::max(mask_a, mask_b), lo = std::min(mask_a, mask_b);
    std::array<cdouble, 16> m = u;
    if (mask_b > mask_a) { // reorder to (hi, lo) = swap middle rows/columns
        auto swap_rc = [&](int r1, int r2) {
            for (int c = 0; c < 4; ++c) std::swap(m[4 * r1 + c], m[4 * r2 + c]);
            for (int r = 0; r < 4; ++r) std::swap(m[4 * r + r1], m[4 * r + r2]);
        };
        swap_rc(1, 2);
    }
    for_each_2q_group(amp.size(), hi, lo, [&](std::uint64_t i) {
        const std::uint64_t i01 = i | lo, i10 = i | hi, i11 = i | hi | lo;
        const cdouble a0 = amp[i], a1 = amp[i01], a2 = amp[i10], a3 = amp[i11];
        amp[i] = m[0] * a0 + m[1] * a1 + m[2] * a2 + m[3] * a3;
        amp[i01] = m[4] * a0 + m[5] * a1 + m[6] * a2 + m[7] * a3;
        amp[i10] = m[8] * a0 + m[9] * a1 + m[10] * a2 + m[11] * a3;
        amp[i11] = m[12] * a0 + m[13] * a1 + m[14] * a2 + m[15] * a3;
    });
}

// Diagonal 4x4 fast path: per-amplitude phase, hoisted per sub-block so the
// inner loops vectorize.
inline void kernel_2q_diag(std::vector<cdouble> &amp, std::uint64_t mask_a,
                           std::uint64_t mask_b, const std::array<cdouble, 16> &u) {
    const std::uint64_t n = amp.size();
    const std::uint64_t hi = std::max(mask_a, mask_b), lo = std::min(mask_a, mask_b);
    // phases indexed by (bit_a, bit_b); remap to (hi, lo) walk order
    cdouble p00 = u[0], p01 = u[5], p10 = u[10], p11 = u[15];
    if (mask_b > mask_a) std::swap(p01, p10);
    auto *d = reinterpret_cast<double *>(amp.data());
    auto scale_run = [&](std::uint64_t begin, std::uint64_t len, cdouble ph) {
        const double pr = ph.real(), pi = ph.imag();
        double *q = d + 2 * begin;
        for (std::uint64_t k = 0; k < len; ++k) {
            const double ar = q[2 * k], ai = q[2 * k + 1];
            q[2 * k] = ar * pr - ai * pi;
            q[2 * k + 1] = ar * pi + ai * pr;
        }
    };
    for (std::uint64_t b0 = 0; b0 < n; b0 += 2 * hi)
        for (std::uint64_t b1 = b0; b1 < b0 + hi; b1 += 2 * lo) {
            scale_run(b1, lo, p00);
            scale_run(b1 + lo, lo, p01);
            scale_run(b1 + hi, lo, p10);
            scale_run(b1 + hi + lo, lo, p11);
        }
}

// XX-form fast path: diagonal c plus anti-diagonal v, i.e. the two
// independent mixes 00<->11 and 01<->10. Symmetric in the qubit order.
inline void kernel_2q_cross(std::vector<cdouble> &amp, std::uint64_t mask_a,
                            std::uint64_t mask_b, cdouble c, cdouble v) {
    const std::uint64_t n = amp.size();
    const std::uint64_t hi = std::max(mask_a, mask_b), lo = std::min(mask_a, mask_b);
    const double cr = c.real(), ci = c.imag(), vr = v.real(), vi = v.imag();
    auto *d = reinterpret_cast<double *>(amp.data());
    auto mix_runs = [&](std::uint64_t ia, std::uint64_t ib, std::uint64_t len) {
        double *x = d + 2 * ia;
        double *y = d + 2 * ib;
        for (std::uint64_t k = 0; k < len; ++k) {
            const double xr = x[2 * k], xi = x[2 * k + 1];
            const double yr = y[2 * k], yi = y[2 * k + 1];
            x[2 * k] = cr * xr - ci * xi + vr * yr - vi * yi;
            x[2 * k + 1] = cr * xi + ci * xr + vr * yi + vi * yr;
            y[2 * k] = cr * yr - ci * yi + vr * xr - vi * xi;
            y[2 * k + 1] = cr * yi + ci * yr + vr * xi + vi * xr;
        }
    };
    for (std::uint64_t b0 = 0; b0 < n; b0 += 2 * hi)
        for (std::uint64_t b1 = b0; b1 < b0 + hi; b1 += 2 * lo) {
            mix_runs(b1, b1 + hi + lo, lo);     // 00 <-> 11
            mix_runs(b1 + lo, b1 + hi, lo);     // 01 <-> 10
        }
}

// Out-of-place cross mix: dst = gate applied to src, each element written
// once from two source reads.
inline void kernel_2q_cross_oop(std::vector<cdouble> &dst,
                                const std::vector<cdouble> &src, std::uint64_t mask_a,
                                std::uint64_t mask_b, cdouble c, cdouble v) {
    const std::uint64_t n = src.size();
    dst.resize(n);
    const std::uint64_t both = mask_a | mask_b;
    const double cr = c.real(), ci = c.imag(), vr = v.real(), vi = v.imag();
    const auto *s = reinterpret_cast<const double *>(src.data());
    auto *d = reinterpret_cast<double *>(dst.data());
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t j = i ^ both;
        const double ar = s[2 * i], ai = s[2 * i + 1];
        const double br = s[2 * j], bi = s[2 * j + 1];
        d[2 * i] = cr * ar - ci * ai + vr * br - vi * bi;
        d[2 * i + 1] = cr * ai + ci * ar + vr * bi + vi * br;
    }
}

// Out-of-place diagonal phase multiply for a (readout, data) parity gate
// with the readout at the top index bit: phase p0 when the pair bits agree
// on 0, conjugate pattern on the readout-1 half.
inline void kernel_2q_diag_oop(std::vector<cdouble> &dst,
                               const std::vector<cdouble> &src, std::uint64_t mask_a,
                               std::uint64_t mask_b, const std::array<cdouble, 16> &u) {
    const std::uint64_t n = src.size();
    dst.resize(n);
    const cdouble p[4] = {u[0], u[5], u[10], u[15]};
    const auto *s = reinterpret_cast<const double *>(src.data());
    auto *d = reinterpret_cast<double *>(dst.data());
    for (std::uint64_t i = 0; i < n; ++i) {
        const int sel = (((i & mask_a) != 0) << 1) | ((i & mask_b) != 0);
        const double pr = p[sel].real(), pi = p[sel].imag();
        const double ar = s[2 * i], ai = s[2 * i + 1];
        d[2 * i] = ar * pr - ai * pi;
        d[2 * i + 1] = ar * pi + ai * pr;
    }
}

// Pauli expectations read directly off amplitude pairs: <X> = 2 Re(conj(lo)
// hi), <Y> = 2 Im(conj(lo) hi) over the target's pair decomposition.
inline double pair_product_sum(const std::vector<cdouble> &amp, std::uint64_t mask,
                               bool imag_part) {
    const std::uint64_t n = amp.size();
    const auto *d = reinterpret_cast<const double *>(amp.data());
    double acc = 0.0;
    for (std::uint64_t base = 0; base < n; base += 2 * mask) {
        for (std::uint64_t i = base; i < base + mask; ++i) {
            const std::uint64_t j = i + mask;
            if (imag_part)
                acc += d[2 * i] * d[2 * j + 1] - d[2 * i + 1] * d[2 * j];
            else
                acc += d[2 * i] * d[2 * j] + d[2 * i + 1] * d[2 * j + 1];
        }
    }
    return 2.0 * acc;
}

inline bool is_diagonal_4x4(const std::array<cdouble, 16> &u) {
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            if (r != c && std::abs(u[4 * r + c]) != 0.0) return false;
    return true;
}

inline bool is_cross_4x4(const std::array<cdouble, 16> &u) {
    // nonzeros only on diagonal and anti-diagonal, with equal couplings
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            if (r != c && r + c != 3 && std::abs(u[4 * r + c]) != 0.0) return false;
    return u[0] == u[5] && u[5] == u[10] && u[10] == u[15] &&
           u[3] == u[6] && u[6] == u[9] && u[9] == u[12];
}

// Signed |a|^2 sum: +1 when the target bit is 0, -1 when it is 1.
inline double signed_z_sum(const std::vector<cdouble> &amp, std::uint64_t mask) {
    const std::uint64_t n = amp.size();
    double pos = 0.0, neg = 0.0;
    const auto *d = reinterpret_cast<const double *>(amp.data());
    for (std::uint64_t base = 0; base < n; base += 2 * mask) {
        for (std::uint64_t i = base; i < base + mask; ++i) {
            pos += d[2 * i] * d[2 * i] + d[2 * i + 1] * d[2 * i + 1];
            const std::uint64_t j = i + mask;
            neg += d[2 * j] * d[2 * j] + d[2 * j + 1] * d[2 * j + 1];
        }
    }
    return pos - neg;
}

} // namespace detail

/// Apply a single-qubit unitary to `target`, in place.
inline void apply_1q(StateVector &state, const Gate1Q &gate, int target) {
    detail::check_target(state, target);
    const std::uint64_t mask = state.mask(target);
    if (gate.name == "H") {
        detail::kernel_h(state.amplitudes, mask);
    } else {
        detail::kernel_1q(state.amplitudes, mask, gate.m);
    }
}

/// Apply a two-qubit unitary to the (q_a, q_b) subspace, in place. The gate
/// matrix is read in the (q_a, q_b) bit order. Diagonal and XX-form gates
/// take phase-only / cross fast paths that agree with the dense path to
/// better than 1e-12.
inline void apply_2q(StateVector &state, const Gate2Q &gate, int q_a, int q_b) {
    detail::check_target(state, q_a);
    detail::check_target(state, q_b);
    if (q_a == q_b) throw std::invalid_argument("apply_2q: qubit indices must differ");
    const std::uint64_t ma = state.mask(q_a), mb = state.mask(q_b);
    if (detail::is_diagonal_4x4(gate.m)) {
        detail::kernel_2q_diag(state.amplitudes, ma, mb, gate.m);
    } else if (detail::is_cross_4x4(gate.m)) {
        detail::kernel_2q_cross(state.amplitudes, ma, mb, gate.m[0], gate.m[3]);
    } else {
        detail::kernel_2q_dense(state.amplitudes, ma, mb, gate.m);
    }
}

namespace detail {

// X and Y expectations reduce to the Z path after a basis change applied to
// a scratch copy (H for X; Sdg then H for Y).
inline double pauli_expectation(const StateVector &state, Pauli p, int target,
                                std::vector<cdouble> &scratch) {
    const std::uint64_t mask = state.mask(target);
    if (p == Pauli::Z) return signed_z_sum(state.amplitudes, mask);
    scratch = state.amplitudes;
    if (p == Pauli::Y) kernel_1q(scratch, mask, gates::s_dagger().m);
    kernel_h(scratch, mask);
    return signed_z_sum(scratch, mask);
}

} // namespace detail

/// Exact expectation value of a single-target Pauli observable, in [-1, 1].
inline double expectation(const StateVector &state, const Observable &obs) {
    if (obs.targets.size() != 1)
        throw std::invalid_argument("expectation: exactly one target required "
                                    "(use expectation_vector for several)");
    detail::check_target(state, obs.targets[0]);
    std::vector<cdouble> scratch;
    return detail::pauli_expectation(state, obs.pauli, obs.targets[0], scratch);
}

/// Per-qubit expectations of `pauli` on each target, in target order.
inline std::vector<double> expectation_vector(const StateVector &state, Pauli pauli,
                                              const std::vector<int> &targets) {
    if (targets.empty())
        throw std::invalid_argument("expectation_vector: targets must be non-empty");
    std::vector<cdouble> scratch;
    std::vector<double> out;
    out.reserve(targets.size());
    for (int t : targets) {
        detail::check_target(state, t);
        out.push_back(detail::pauli_expectation(state, pauli, t, scratch));
    }
    return out;
}

/// Mean of `shots` i.i.d. +-1 outcomes drawn from the Born distribution of a
/// single-target Pauli measurement. Reproducible per seed.
inline double sample_shots(const StateVector &state, const Observable &obs,
                           std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("sample_shots: shots must be >= 1");
    const double exact = expectation(state, obs);
    const double p_plus = std::min(1.0, std::max(0.0, 0.5 * (1.0 + exact)));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::int64_t sum = 0;
    for (std::uint64_t s = 0; s < shots; ++s)
        sum += unif(rng) < p_plus ? 1 : -1;
    return static_cast<double>(sum) / static_cast<double>(shots);
}

} // namespace qnnsim

#endif // QNNSIM_STATEVEC_HPP_
