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
// Test-only brute-force reference implementations. Everything here builds
// explicit 2^n x 2^n matrices and stays deliberately independent of the
// sparse kernels under test.
#ifndef QNNSIM_TESTS_ORACLE_HPP_
#define QNNSIM_TESTS_ORACLE_HPP_

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

using cdouble = std::complex<double>;
using Matrix = std::vector<std::vector<cdouble>>;

inline Matrix zeros(std::size_t n) { return Matrix(n, std::vector<cdouble>(n, 0.0)); }

inline Matrix matmul(const Matrix &a, const Matrix &b) {
    const std::size_t n = a.size();
    Matrix c = zeros(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const cdouble aik = a[i][k];
            if (aik == cdouble{}) continue;
            for (std::size_t j = 0; j < n; ++j) c[i][j] += aik * b[k][j];
        }
    return c;
}

inline std::vector<cdouble> matvec(const Matrix &a, const std::vector<cdouble> &v) {
    const std::size_t n = a.size();
    std::vector<cdouble> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i] += a[i][j] * v[j];
    return out;
}

inline Matrix kron(const Matrix &a, const Matrix &b) {
    const std::size_t na = a.size(), nb = b.size();
    Matrix c = zeros(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l)
                    c[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
    return c;
}

// Embed a 2x2 gate on `target` of an n-qubit register, qubit 0 most
// significant: kron(I, ..., U, ..., I) with U in slot `target`.
inline Matrix embed_1q(const std::array<cdouble, 4> &u, int n, int target) {
    Matrix eye = {{1.0, 0.0}, {0.0, 1.0}};
    Matrix um = {{u[0], u[1]}, {u[2], u[3]}};
    Matrix full = (target == 0) ? um : eye;
    for (int q = 1; q < n; ++q) full = kron(full, q == target ? um : eye);
    return full;
}

// Embed a 4x4 gate on qubits (qa, qb), matrix basis ordered by the
// (bit of qa, bit of qb) pair. Built entrywise so it stays valid for any
// qubit positions and either ordering.
inline Matrix embed_2q(const std::array<cdouble, 16> &u, int n, int qa, int qb) {
    const std::size_t dim = std::size_t{1} << n;
    const std::uint64_t ma = std::uint64_t{1} << (n - 1 - qa);
    const std::uint64_t mb = std::uint64_t{1} << (n - 1 - qb);
    const std::uint64_t rest = (dim - 1) & ~(ma | mb);
    Matrix full = zeros(dim);
    for (std::uint64_t i = 0; i < dim; ++i)
        for (std::uint64_t j = 0; j < dim; ++j) {
            if ((i & rest) != (j & rest)) continue;
            const int ri = (((i & ma) != 0) << 1) | ((i & mb) != 0);
            const int cj = (((j & ma) != 0) << 1) | ((j & mb) != 0);
            full[i][j] = u[4 * ri + cj];
        }
    return full;
}

// Taylor-series matrix exponential; plenty accurate for the unit-norm
// generators used in tests.
inline Matrix expm(const Matrix &a, int terms = 48) {
    const std::size_t n = a.size();
    Matrix result = zeros(n), term = zeros(n);
    for (std::size_t i = 0; i < n; ++i) result[i][i] = term[i][i] = 1.0;
    for (int k = 1; k <= terms; ++k) {
        term = matmul(term, a);
        for (auto &row : term)
            for (auto &x : row) x /= static_cast<double>(k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) result[i][j] += term[i][j];
    }
    return result;
}

inline Matrix scaled(const Matrix &a, cdouble f) {
    Matrix out = a;
    for (auto &row : out)
        for (auto &x : row) x *= f;
    return out;
}

inline const Matrix &pauli_x_mat() {
    static Matrix m = {{0.0, 1.0}, {1.0, 0.0}};
    return m;
}
inline const Matrix &pauli_y_mat() {
    static Matrix m = {{0.0, cdouble{0, -1}}, {cdouble{0, 1}, 0.0}};
    return m;
}
inline const Matrix &pauli_z_mat() {
    static Matrix m = {{1.0, 0.0}, {0.0, -1.0}};
    return m;
}

} // namespace oracle

#endif // QNNSIM_TESTS_ORACLE_HPP_
