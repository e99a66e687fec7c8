// Copyright 2026 The gptlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GPTLAB_QUANTUM_H
#define GPTLAB_QUANTUM_H

// Real transfer representation of qubit systems. A density matrix rho on n
// qubits is represented by r_P = Tr(P rho) over the 4^n Pauli strings
// (I, X, Y, Z per qubit, first qubit most significant), so r_I = 1 for a
// normalised state. Effects carry e_P = Tr(P E) / d, making (e|r) = Tr(E rho).

#include <complex>
#include <vector>

#include "gptlab/scalar.h"

namespace gpt {

/// Complex matrix over a real scalar type, stored as real and imaginary parts.
template <class S>
struct CMat {
    Mat<S> re;
    Mat<S> im;

    static CMat zero(Eigen::Index n) {
        return {Mat<S>::Zero(n, n), Mat<S>::Zero(n, n)};
    }
    static CMat identity(Eigen::Index n) {
        return {Mat<S>::Identity(n, n), Mat<S>::Zero(n, n)};
    }
    static CMat real(Mat<S> m) {
        Mat<S> z = Mat<S>::Zero(m.rows(), m.cols());
        return {std::move(m), std::move(z)};
    }
    Eigen::Index rows() const {
        return re.rows();
    }
    CMat operator*(const CMat &o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    CMat operator+(const CMat &o) const {
        return {re + o.re, im + o.im};
    }
    CMat operator-(const CMat &o) const {
        return {re - o.re, im - o.im};
    }
    CMat scaled(const S &k) const {
        return {re * k, im * k};
    }
    CMat adjoint() const {
        return {re.transpose(), -im.transpose()};
    }
    template <class T>
    CMat<T> cast() const {
        return {re.template cast<T>(), im.template cast<T>()};
    }
    /// Real part of the trace of this * o.
    S trace_product_re(const CMat &o) const {
        S t(0);
        for (Eigen::Index i = 0; i < re.rows(); ++i) {
            for (Eigen::Index j = 0; j < re.cols(); ++j) {
                t += re(i, j) * o.re(j, i) - im(i, j) * o.im(j, i);
            }
        }
        return t;
    }
    Eigen::MatrixXcd to_complex() const {
        Eigen::MatrixXcd out(re.rows(), re.cols());
        for (Eigen::Index i = 0; i < re.rows(); ++i) {
            for (Eigen::Index j = 0; j < re.cols(); ++j) {
                out(i, j) = {to_double(re(i, j)), to_double(im(i, j))};
            }
        }
        return out;
    }
};

template <class S>
CMat<S> kron(const CMat<S> &a, const CMat<S> &b) {
    auto k = [](const Mat<S> &x, const Mat<S> &y) { return Mat<S>(Eigen::kroneckerProduct(x, y).eval()); };
    return {k(a.re, b.re) - k(a.im, b.im), k(a.re, b.im) + k(a.im, b.re)};
}

/// The single-qubit Pauli matrix with index 0..3 = I, X, Y, Z.
template <class S>
CMat<S> pauli(int which) {
    CMat<S> p = CMat<S>::zero(2);
    switch (which) {
        case 0:
            p.re(0, 0) = 1;
            p.re(1, 1) = 1;
            break;
        case 1:
            p.re(0, 1) = 1;
            p.re(1, 0) = 1;
            break;
        case 2:
            p.im(0, 1) = -1;
            p.im(1, 0) = 1;
            break;
        default:
            p.re(0, 0) = 1;
            p.re(1, 1) = -1;
            break;
    }
    return p;
}

/// Pauli string with the given base-4 index on n qubits.
template <class S>
CMat<S> pauli_string(int n_qubits, int index) {
    CMat<S> out = CMat<S>::identity(1);
    for (int q = n_qubits - 1; q >= 0; --q) {
        int digit = (index >> (2 * q)) & 3;
        out = kron(out, pauli<S>(digit));
    }
    return out;
}

template <class S>
std::vector<CMat<S>> pauli_basis(int n_qubits) {
    std::vector<CMat<S>> out;
    int count = 1 << (2 * n_qubits);
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        out.push_back(pauli_string<S>(n_qubits, i));
    }
    return out;
}

inline int qubits_for_dim(Eigen::Index d) {
    int n = 0;
    while ((Eigen::Index{1} << n) < d) {
        ++n;
    }
    return n;
}

/// Pauli coordinates r_P = Re Tr(P rho).
template <class S>
Vec<S> embed_density(const CMat<S> &rho) {
    int n = qubits_for_dim(rho.rows());
    auto basis = pauli_basis<S>(n);
    Vec<S> r(basis.size());
    for (size_t i = 0; i < basis.size(); ++i) {
        r(i) = basis[i].trace_product_re(rho);
    }
    return r;
}

/// rho = (1/d) sum_P r_P P.
template <class S>
CMat<S> extract_density(const Vec<S> &coords) {
    int n = qubits_for_dim(static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(coords.size())))));
    Eigen::Index d = Eigen::Index{1} << n;
    auto basis = pauli_basis<S>(n);
    CMat<S> rho = CMat<S>::zero(d);
    for (size_t i = 0; i < basis.size(); ++i) {
        if (!is_zero<S>(coords(i), 0.0)) {
            rho = rho + basis[i].scaled(coords(i));
        }
    }
    return rho.scaled(S(1) / S(static_cast<int>(d)));
}

/// e_P = Re Tr(P E) / d.
template <class S>
RowVec<S> embed_effect(const CMat<S> &e) {
    Vec<S> r = embed_density(e);
    return (r / S(static_cast<int>(e.rows()))).transpose();
}

template <class S>
CMat<S> extract_effect(const RowVec<S> &coords) {
    Vec<S> r = coords.transpose();
    Eigen::Index d = Eigen::Index{1} << qubits_for_dim(static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(coords.size())))));
    return extract_density<S>(r).scaled(S(static_cast<int>(d)));
}

/// Transfer matrix of rho -> U rho U^dagger for U = m / sqrt(scale).
/// T_PQ = Tr(P U Q U^dagger) / d.
template <class S>
Mat<S> transfer_matrix(const CMat<S> &m, const S &scale) {
    int n = qubits_for_dim(m.rows());
    const int d = 1 << n;
    auto basis = pauli_basis<S>(n);
    const auto count = static_cast<Eigen::Index>(basis.size());
    Mat<S> t(count, count);
    CMat<S> madj = m.adjoint();
    for (Eigen::Index q = 0; q < count; ++q) {
        CMat<S> conj = m * basis[q] * madj;
        for (Eigen::Index p = 0; p < count; ++p) {
            t(p, q) = basis[p].trace_product_re(conj) / (scale * S(d));
        }
    }
    return t;
}

/// Eigenvalues (ascending) of the Hermitian matrix with the given coordinates.
template <class S>
Eigen::VectorXd density_eigenvalues(const Vec<S> &coords) {
    Eigen::MatrixXcd rho = extract_density<S>(coords).to_complex();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

}  // namespace gpt

#endif
