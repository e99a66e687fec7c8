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

#ifndef GPTLAB_SCALAR_H
#define GPTLAB_SCALAR_H

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>

namespace gpt {

/// Arbitrary-precision rational. Expression templates are disabled so the
/// type composes with Eigen expressions.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using RowVec = Eigen::Matrix<S, 1, Eigen::Dynamic>;
template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

enum class ScalarMode { Exact, Approx };

/// Default comparison tolerance for binary64 runs.
inline constexpr double kTolerance = 1e-9;

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

template <class S>
S scalar_from(const Rational &q) {
    if constexpr (is_exact_v<S>) {
        return q;
    } else {
        return static_cast<S>(q);
    }
}

template <class S>
double to_double(const S &x) {
    return static_cast<double>(x);
}

template <class S>
bool is_zero(const S &x, double tol = kTolerance) {
    if constexpr (is_exact_v<S>) {
        return x == 0;
    } else {
        return std::abs(x) <= tol;
    }
}

template <class S>
bool nearly_equal(const S &a, const S &b, double tol = kTolerance) {
    return is_zero<S>(a - b, tol);
}

/// Exact: a >= b. Approx: a >= b - tol.
template <class S>
bool geq(const S &a, const S &b, double tol = kTolerance) {
    if constexpr (is_exact_v<S>) {
        return a >= b;
    } else {
        return a >= b - tol;
    }
}

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational &q);

/// Accepts "p", "-p", "p/q". Throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);

/// Rational with the exact value of a finite double.
Rational rational_from_double(double x);

template <class S>
bool all_zero(const Mat<S> &m, double tol = kTolerance) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        if (!is_zero<S>(m.data()[i], tol)) {
            return false;
        }
    }
    return true;
}

}  // namespace gpt

#endif
