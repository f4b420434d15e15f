// Copyright 2026 The tslot Authors
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

#pragma once

// Exact rational time values. All slot arithmetic in this library is done on
// these; nothing is ever rounded through a double.

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tslot {

using Rational = boost::rational<std::int64_t>;

/// Smallest integer >= q.
inline std::int64_t ceil(const Rational &q) {
    std::int64_t n = q.numerator();
    std::int64_t d = q.denominator();  // always > 0 after normalization
    std::int64_t f = n / d;
    if (n % d != 0 && n > 0) {
        f += 1;
    }
    return f;
}

/// Largest integer <= q.
inline std::int64_t floor(const Rational &q) {
    std::int64_t n = q.numerator();
    std::int64_t d = q.denominator();
    std::int64_t f = n / d;
    if (n % d != 0 && n < 0) {
        f -= 1;
    }
    return f;
}

/// Integers print bare ("5"), everything else as "p/q" in lowest terms.
inline std::string to_string(const Rational &q) {
    if (q.denominator() == 1) {
        return std::to_string(q.numerator());
    }
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

namespace detail {

inline std::int64_t parse_int(std::string_view text, std::string_view whole) {
    if (text.empty()) {
        throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    }
    std::size_t i = 0;
    bool negative = false;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        i = 1;
    }
    if (i == text.size()) {
        throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    }
    std::int64_t value = 0;
    for (; i < text.size(); i++) {
        char c = text[i];
        if (c < '0' || c > '9') {
            throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
        }
        if (value > (INT64_MAX - (c - '0')) / 10) {
            throw std::out_of_range("rational component overflows: '" + std::string(whole) + "'");
        }
        value = value * 10 + (c - '0');
    }
    return negative ? -value : value;
}

}  // namespace detail

/// Parses "p", "p/q" (q != 0). No whitespace, no decimal points.
inline Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(detail::parse_int(text, text));
    }
    std::int64_t num = detail::parse_int(text.substr(0, slash), text);
    std::int64_t den = detail::parse_int(text.substr(slash + 1), text);
    if (den == 0) {
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(num, den);
}

}  // namespace tslot
