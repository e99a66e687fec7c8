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

#include "gptlab/scalar.h"

#include <cctype>
#include <stdexcept>

namespace gpt {

std::string to_string(const Rational &q) {
    if (denominator(q) == 1) {
        return numerator(q).str();
    }
    return q.str();
}

namespace {

bool is_integer_literal(std::string_view s) {
    size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        ++i;
    }
    if (i == s.size()) {
        return false;
    }
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            return false;
        }
    }
    return true;
}

/// Decimal digits to an Integer; leading zeros would otherwise read as octal.
Integer decimal_integer(std::string_view s) {
    bool neg = !s.empty() && s[0] == '-';
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        s.remove_prefix(1);
    }
    while (s.size() > 1 && s[0] == '0') {
        s.remove_prefix(1);
    }
    Integer v{std::string(s)};
    return neg ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    if (!is_integer_literal(num)) {
        throw std::invalid_argument("not a rational literal: '" + std::string(text) + "'");
    }
    Integer n = decimal_integer(num);
    if (slash == std::string_view::npos) {
        return Rational(n);
    }
    std::string_view den = text.substr(slash + 1);
    if (!is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
        throw std::invalid_argument("not a rational literal: '" + std::string(text) + "'");
    }
    Integer d = decimal_integer(den);
    if (d == 0) {
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(n) / Rational(d);
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("non-finite value has no rational form");
    }
    int exp = 0;
    double mant = std::frexp(x, &exp);
    // 53 mantissa bits fit in a long long after scaling.
    auto scaled = static_cast<long long>(std::ldexp(mant, 53));
    Rational r(scaled);
    exp -= 53;
    Rational two(2);
    Rational p(1);
    for (int i = 0; i < std::abs(exp); ++i) {
        p *= two;
    }
    return exp >= 0 ? r * p : r / p;
}

}  // namespace gpt
