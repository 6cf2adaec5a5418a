// Copyright 2026 The relcollapse Authors
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

// Exact predicates on double coordinates. Every finite double is a dyadic
// rational m * 2^e; a handful of them are rescaled to a common exponent and
// compared as arbitrary-precision integers, so collinearity and speed checks
// carry no rounding at all.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>

#include <boost/multiprecision/cpp_int.hpp>

#include "relcollapse/error.hpp"
#include "relcollapse/spacetime.hpp"

namespace relcollapse::exact {

using Integer = boost::multiprecision::cpp_int;

namespace detail {

struct Dyadic {
    std::int64_t mantissa = 0;
    int exponent = 0;
};

inline Dyadic decompose(double v) {
    if (!std::isfinite(v)) {
        throw ValidationError("coordinate is not finite");
    }
    if (v == 0.0) return {0, 0};
    int e = 0;
    const double frac = std::frexp(v, &e);
    auto m = static_cast<std::int64_t>(std::ldexp(frac, 53));
    e -= 53;
    while ((m & 1) == 0) {
        m /= 2;
        ++e;
    }
    return {m, e};
}

}  // namespace detail

/// Rescales `values` to integers sharing one power-of-two unit.
template <std::size_t N>
std::array<Integer, N> common_scale(const std::array<double, N> &values) {
    std::array<detail::Dyadic, N> parts{};
    int min_exp = 0;
    bool any = false;
    for (std::size_t i = 0; i < N; ++i) {
        parts[i] = detail::decompose(values[i]);
        if (parts[i].mantissa != 0) {
            min_exp = any ? std::min(min_exp, parts[i].exponent) : parts[i].exponent;
            any = true;
        }
    }
    std::array<Integer, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        if (parts[i].mantissa == 0) continue;
        out[i] = Integer(parts[i].mantissa) << static_cast<unsigned>(parts[i].exponent - min_exp);
    }
    return out;
}

/// |dx| <= dt between consecutive world-line vertices, exactly.
inline bool within_light_speed(const Event &a, const Event &b) {
    const auto v = common_scale<4>({a.t, a.x, b.t, b.x});
    const Integer dt = v[2] - v[0];
    const Integer dx = abs(v[3] - v[1]);
    return dx <= dt;
}

/// True iff p lies on the closed segment [a, b] (a.t < b.t), exactly.
inline bool on_segment(const Event &a, const Event &b, const Event &p) {
    const auto v = common_scale<6>({a.t, a.x, b.t, b.x, p.t, p.x});
    const Integer &at = v[0], &ax = v[1], &bt = v[2], &bx = v[3], &pt = v[4], &px = v[5];
    if (pt < at || pt > bt) return false;
    return (bt - at) * (px - ax) == (bx - ax) * (pt - at);
}

/// True iff p lies on the polyline through `vertices`.
inline bool on_polyline(std::span<const Event> vertices, const Event &p) {
    if (vertices.size() == 1) return vertices.front() == p;
    for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
        if (on_segment(vertices[k], vertices[k + 1], p)) return true;
    }
    return false;
}

}  // namespace relcollapse::exact
