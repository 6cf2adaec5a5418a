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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "relcollapse/error.hpp"

namespace relcollapse {

/// A point of 1+1 Minkowski spacetime in the lab frame (c = 1).
struct Event {
    double t = 0.0;
    double x = 0.0;

    friend bool operator==(const Event &, const Event &) = default;
};

inline std::ostream &operator<<(std::ostream &os, const Event &e) {
    return os << "(" << e.t << "," << e.x << ")";
}

/// Relation of the second event as seen from the first.
enum class CausalRelation {
    TimelikePast,
    LightlikePast,
    Spacelike,
    LightlikeFuture,
    TimelikeFuture,
    Coincident,
};

inline const char *to_string(CausalRelation r) {
    switch (r) {
        case CausalRelation::TimelikePast: return "TimelikePast";
        case CausalRelation::LightlikePast: return "LightlikePast";
        case CausalRelation::Spacelike: return "Spacelike";
        case CausalRelation::LightlikeFuture: return "LightlikeFuture";
        case CausalRelation::TimelikeFuture: return "TimelikeFuture";
        case CausalRelation::Coincident: return "Coincident";
    }
    return "?";
}

/// (dt)^2 - (dx)^2.
inline double interval(const Event &e1, const Event &e2) {
    const double dt = e2.t - e1.t;
    const double dx = e2.x - e1.x;
    return dt * dt - dx * dx;
}

/// Classification uses |dt| vs |dx| directly so that exactly-representable
/// inputs never go through a rounded square.
inline CausalRelation causal_relation(const Event &from, const Event &to) {
    if (from == to) {
        return CausalRelation::Coincident;
    }
    const double dt = to.t - from.t;
    const double adx = std::abs(to.x - from.x);
    const double adt = std::abs(dt);
    if (adt < adx) {
        return CausalRelation::Spacelike;
    }
    if (adt == adx) {
        return dt > 0 ? CausalRelation::LightlikeFuture : CausalRelation::LightlikePast;
    }
    return dt > 0 ? CausalRelation::TimelikeFuture : CausalRelation::TimelikePast;
}

inline bool is_causal_past(CausalRelation r) {
    return r == CausalRelation::TimelikePast || r == CausalRelation::LightlikePast;
}

inline bool is_causal_future(CausalRelation r) {
    return r == CausalRelation::TimelikeFuture || r == CausalRelation::LightlikeFuture;
}

/// True iff `a` lies in the causal past (timelike or lightlike) of `b`.
inline bool causally_precedes(const Event &a, const Event &b) {
    return is_causal_past(causal_relation(b, a));
}

/// Coordinates of `e` in the frame moving with rapidity `rapidity`.
inline Event boost(const Event &e, double rapidity) {
    const double ch = std::cosh(rapidity);
    const double sh = std::sinh(rapidity);
    return {e.t * ch - e.x * sh, e.x * ch - e.t * sh};
}

/// Time coordinate of `e` in the frame of rapidity `rapidity`.
inline double frame_time(const Event &e, double rapidity) {
    if (rapidity == 0.0) {
        return e.t;
    }
    return e.t * std::cosh(rapidity) - e.x * std::sinh(rapidity);
}

// ---------------------------------------------------------------------------
// Surfaces
// ---------------------------------------------------------------------------

/// Constant-time hypersurface t' = t0 in the frame of the given rapidity.
struct FlatSurface {
    double t0 = 0.0;
    double rapidity = 0.0;
    friend bool operator==(const FlatSurface &, const FlatSurface &) = default;
};

/// sigma(P): the backward light cone with vertex P.
struct BackwardCone {
    Event vertex;
    friend bool operator==(const BackwardCone &, const BackwardCone &) = default;
};

/// eta(P): the forward light cone with vertex P.
struct ForwardCone {
    Event vertex;
    friend bool operator==(const ForwardCone &, const ForwardCone &) = default;
};

/// sigma(P1, ..., Pn): the surface lying just after the union of the
/// backward cones of all vertices.
class UnionBackwardCones {
  public:
    explicit UnionBackwardCones(std::vector<Event> vertices) {
        if (vertices.empty()) {
            throw ValidationError("union of backward cones needs at least one vertex");
        }
        for (const auto &v : vertices) {
            if (std::find(vertices_.begin(), vertices_.end(), v) == vertices_.end()) {
                vertices_.push_back(v);
            }
        }
    }

    const std::vector<Event> &vertices() const { return vertices_; }

    friend bool operator==(const UnionBackwardCones &, const UnionBackwardCones &) = default;

  private:
    std::vector<Event> vertices_;
};

using CausalSurface = std::variant<FlatSurface, BackwardCone, ForwardCone, UnionBackwardCones>;

enum class SurfaceSide { Before, After, On };

inline const char *to_string(SurfaceSide s) {
    switch (s) {
        case SurfaceSide::Before: return "Before";
        case SurfaceSide::After: return "After";
        case SurfaceSide::On: return "On";
    }
    return "?";
}

inline CausalSurface flat(double t0, double rapidity = 0.0) {
    if (!std::isfinite(rapidity) || !std::isfinite(t0)) {
        throw ValidationError("flat surface parameters must be finite");
    }
    return FlatSurface{t0, rapidity};
}
inline CausalSurface sigma(const Event &p) { return BackwardCone{p}; }
inline CausalSurface eta(const Event &p) { return ForwardCone{p}; }
inline CausalSurface sigma(std::vector<Event> ps) { return UnionBackwardCones(std::move(ps)); }

inline SurfaceSide side_of_surface(const Event &e, const FlatSurface &s) {
    const double te = frame_time(e, s.rapidity);
    if (te < s.t0) return SurfaceSide::Before;
    if (te > s.t0) return SurfaceSide::After;
    return SurfaceSide::On;
}

// Lightlike past of the vertex counts as Before.
inline SurfaceSide side_of_surface(const Event &e, const BackwardCone &s) {
    const auto rel = causal_relation(s.vertex, e);
    if (rel == CausalRelation::Coincident) return SurfaceSide::On;
    return is_causal_past(rel) ? SurfaceSide::Before : SurfaceSide::After;
}

// Lightlike future of the vertex counts as After.
inline SurfaceSide side_of_surface(const Event &e, const ForwardCone &s) {
    const auto rel = causal_relation(s.vertex, e);
    if (rel == CausalRelation::Coincident) return SurfaceSide::On;
    return is_causal_future(rel) ? SurfaceSide::After : SurfaceSide::Before;
}

inline SurfaceSide side_of_surface(const Event &e, const UnionBackwardCones &s) {
    bool on = false;
    for (const auto &v : s.vertices()) {
        const auto side = side_of_surface(e, BackwardCone{v});
        if (side == SurfaceSide::Before) return SurfaceSide::Before;
        on = on || side == SurfaceSide::On;
    }
    return on ? SurfaceSide::On : SurfaceSide::After;
}

inline SurfaceSide side_of_surface(const Event &e, const CausalSurface &s) {
    return std::visit([&](const auto &surf) { return side_of_surface(e, surf); }, s);
}

inline std::ostream &operator<<(std::ostream &os, const CausalSurface &s) {
    std::visit(
        [&](const auto &surf) {
            using T = std::decay_t<decltype(surf)>;
            if constexpr (std::is_same_v<T, FlatSurface>) {
                os << "flat(" << surf.t0 << "," << surf.rapidity << ")";
            } else if constexpr (std::is_same_v<T, BackwardCone>) {
                os << "sigma(" << surf.vertex << ")";
            } else if constexpr (std::is_same_v<T, ForwardCone>) {
                os << "eta(" << surf.vertex << ")";
            } else {
                os << "sigma(";
                for (std::size_t i = 0; i < surf.vertices().size(); ++i) {
                    os << (i ? "," : "") << surf.vertices()[i];
                }
                os << ")";
            }
        },
        s);
    return os;
}

// ---------------------------------------------------------------------------
// Causal order and its linearizations
// ---------------------------------------------------------------------------

/// A strict partial order on indices 0..size-1, stored as a dense relation.
class PartialOrder {
  public:
    PartialOrder() = default;
    explicit PartialOrder(std::size_t n) : n_(n), rel_(n * n, false) {}

    /// Builds the relation from explicit pairs (i before j). No acyclicity
    /// check here; `linearizations` reports cycles.
    static PartialOrder from_pairs(std::size_t n, const std::set<std::pair<std::size_t, std::size_t>> &pairs) {
        PartialOrder order(n);
        for (auto [i, j] : pairs) {
            if (i >= n || j >= n) {
                throw ValidationError("order pair index out of range");
            }
            order.rel_[i * n + j] = true;
        }
        return order;
    }

    std::size_t size() const { return n_; }
    bool precedes(std::size_t i, std::size_t j) const { return rel_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j) { rel_[i * n_ + j] = true; }

    std::set<std::pair<std::size_t, std::size_t>> pairs() const {
        std::set<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (precedes(i, j)) out.emplace(i, j);
            }
        }
        return out;
    }

    /// True iff `seq` is a permutation of 0..size-1 consistent with the order.
    bool is_linearization(std::span<const std::size_t> seq) const {
        if (seq.size() != n_) return false;
        std::vector<std::size_t> pos(n_, n_);
        for (std::size_t k = 0; k < seq.size(); ++k) {
            if (seq[k] >= n_ || pos[seq[k]] != n_) return false;
            pos[seq[k]] = k;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (precedes(i, j) && pos[i] > pos[j]) return false;
            }
        }
        return true;
    }

  private:
    std::size_t n_ = 0;
    std::vector<bool> rel_;
};

/// Pair (i, j) is present iff events[i] lies in the causal past of events[j].
inline PartialOrder causal_partial_order(std::span<const Event> events) {
    PartialOrder order(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        for (std::size_t j = 0; j < events.size(); ++j) {
            if (i == j) continue;
            if (events[i] == events[j]) {
                throw ValidationError("duplicate events in causal order");
            }
            if (causally_precedes(events[i], events[j])) {
                order.set(i, j);
            }
        }
    }
    return order;
}

namespace detail {

inline std::vector<std::uint64_t> predecessor_masks(const PartialOrder &order) {
    const std::size_t n = order.size();
    std::vector<std::uint64_t> pred(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (order.precedes(i, j)) pred[j] |= std::uint64_t{1} << i;
        }
    }
    return pred;
}

inline void require_acyclic(const PartialOrder &order) {
    const std::size_t n = order.size();
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (order.precedes(i, j)) ++indegree[j];
        }
    }
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.push_back(i);
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
        const std::size_t i = ready.back();
        ready.pop_back();
        ++seen;
        for (std::size_t j = 0; j < n; ++j) {
            if (order.precedes(i, j) && --indegree[j] == 0) ready.push_back(j);
        }
    }
    if (seen != n) {
        throw ValidationError("order contains a cycle");
    }
}

}  // namespace detail

/// Number of linearizations, by dynamic programming over downsets.
/// Saturates at `limit`.
inline std::uint64_t count_linearizations(const PartialOrder &order,
                                          std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()) {
    detail::require_acyclic(order);
    const std::size_t n = order.size();
    if (n > 24) {
        throw ValidationError("count_linearizations supports at most 24 elements");
    }
    const auto pred = detail::predecessor_masks(order);
    std::vector<std::uint64_t> ways(std::size_t{1} << n, 0);
    ways[0] = 1;
    for (std::uint64_t mask = 0; mask < ways.size(); ++mask) {
        if (ways[mask] == 0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t bit = std::uint64_t{1} << i;
            if ((mask & bit) || (pred[i] & ~mask)) continue;
            auto &w = ways[mask | bit];
            w = (w > limit - ways[mask]) ? limit : w + ways[mask];
        }
    }
    return ways.back();
}

/// Topological sorts of `order`. When there are at most `cap` of them all are
/// returned in lexicographic order; otherwise `cap` distinct ones are drawn
/// deterministically (seeded), starting with the lexicographically first.
inline std::vector<std::vector<std::size_t>> linearizations(const PartialOrder &order, std::size_t cap = 1024,
                                                            std::uint64_t seed = 0x5eed) {
    detail::require_acyclic(order);
    const std::size_t n = order.size();
    if (n > 63) {
        throw ValidationError("linearizations supports at most 63 elements");
    }
    const auto pred = detail::predecessor_masks(order);
    std::vector<std::vector<std::size_t>> out;
    if (cap == 0) return out;

    const bool exhaustive = n <= 24 ? count_linearizations(order, cap + 1) <= cap : false;
    if (exhaustive) {
        std::vector<std::size_t> current;
        auto recurse = [&](auto &self, std::uint64_t placed) -> void {
            if (current.size() == n) {
                out.push_back(current);
                return;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint64_t bit = std::uint64_t{1} << i;
                if ((placed & bit) || (pred[i] & ~placed)) continue;
                current.push_back(i);
                self(self, placed | bit);
                current.pop_back();
            }
        };
        recurse(recurse, 0);
        return out;
    }

    std::mt19937_64 rng(seed);
    std::set<std::vector<std::size_t>> seen;
    auto draw = [&](bool first) {
        std::vector<std::size_t> seq;
        std::uint64_t placed = 0;
        while (seq.size() < n) {
            std::vector<std::size_t> ready;
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint64_t bit = std::uint64_t{1} << i;
                if (!(placed & bit) && !(pred[i] & ~placed)) ready.push_back(i);
            }
            const std::size_t pick = first ? ready.front() : ready[rng() % ready.size()];
            seq.push_back(pick);
            placed |= std::uint64_t{1} << pick;
        }
        return seq;
    };
    auto first = draw(true);
    seen.insert(first);
    out.push_back(std::move(first));
    std::size_t attempts = 0;
    while (out.size() < cap && attempts < cap * 64) {
        ++attempts;
        auto seq = draw(false);
        if (seen.insert(seq).second) out.push_back(std::move(seq));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Light-cone crossings along a piecewise-linear causal curve
// ---------------------------------------------------------------------------

namespace detail {

/// Segment of a world-line, parametrised by lab time: x(t) = x0 + v (t - t0)
/// for t in [t_begin, t_end] (either end may be infinite).
struct LineSegment {
    double t_begin;
    double t_end;
    double t0;
    double x0;
    double v;
};

/// Pieces of the world-line through `vertices`, extended at rest to the past
/// of its first vertex and to the future of its last.
inline std::vector<LineSegment> extended_segments(std::span<const Event> vertices) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<LineSegment> segs;
    if (vertices.empty()) return segs;
    segs.push_back({-inf, vertices.front().t, vertices.front().t, vertices.front().x, 0.0});
    for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
        const auto &a = vertices[k];
        const auto &b = vertices[k + 1];
        segs.push_back({a.t, b.t, a.t, a.x, (b.x - a.x) / (b.t - a.t)});
    }
    segs.push_back({vertices.back().t, inf, vertices.back().t, vertices.back().x, 0.0});
    return segs;
}

}  // namespace detail

/// Lab time at which the world-line leaves the causal past J^-(e); points up
/// to and including it lie in J^-(e). Requires speed <= 1 on every segment.
inline double past_cone_exit_time(std::span<const Event> vertices, const Event &e) {
    // On a segment, Q(t) in J^-(e) iff t(1 - v) <= e.t - e.x + x0 - v t0
    //                            and t(1 + v) <= e.t + e.x - x0 + v t0.
    double exit = -std::numeric_limits<double>::infinity();
    for (const auto &s : detail::extended_segments(vertices)) {
        double bound = std::numeric_limits<double>::infinity();
        const double c1 = e.t - e.x + s.x0 - s.v * s.t0;
        const double c2 = e.t + e.x - s.x0 + s.v * s.t0;
        if (1 - s.v > 0) bound = std::min(bound, c1 / (1 - s.v));
        else if (c1 < 0) bound = -std::numeric_limits<double>::infinity();
        if (1 + s.v > 0) bound = std::min(bound, c2 / (1 + s.v));
        else if (c2 < 0) bound = -std::numeric_limits<double>::infinity();
        if (bound < s.t_begin) break;
        exit = std::min(bound, s.t_end);
        if (bound < s.t_end) break;
    }
    return exit;
}

/// Lab time at which the world-line enters the causal future J^+(e); points
/// from it onward lie in J^+(e).
inline double future_cone_entry_time(std::span<const Event> vertices, const Event &e) {
    // Q(t) in J^+(e) iff t(1 - v) >= e.t - e.x + x0 - v t0
    //                and t(1 + v) >= e.t + e.x - x0 + v t0.
    double entry = std::numeric_limits<double>::infinity();
    const auto segs = detail::extended_segments(vertices);
    for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
        const auto &s = *it;
        double bound = -std::numeric_limits<double>::infinity();
        const double c1 = e.t - e.x + s.x0 - s.v * s.t0;
        const double c2 = e.t + e.x - s.x0 + s.v * s.t0;
        if (1 - s.v > 0) bound = std::max(bound, c1 / (1 - s.v));
        else if (c1 > 0) bound = std::numeric_limits<double>::infinity();
        if (1 + s.v > 0) bound = std::max(bound, c2 / (1 + s.v));
        else if (c2 > 0) bound = std::numeric_limits<double>::infinity();
        if (bound > s.t_end) break;
        entry = std::max(bound, s.t_begin);
        if (bound > s.t_begin) break;
    }
    return entry;
}

/// Lab time at which the world-line crosses the simultaneity line of `e` in
/// the frame of the given rapidity. Points strictly later have e Before
/// their flat surface.
inline double simultaneity_crossing_time(std::span<const Event> vertices, const Event &e, double rapidity) {
    const double target = frame_time(e, rapidity);
    const double th = std::tanh(rapidity);
    for (const auto &s : detail::extended_segments(vertices)) {
        // frame time along the segment is proportional to t - x tanh(phi).
        const double slope = 1 - s.v * th;
        const double t = (target / std::cosh(rapidity) + (s.x0 - s.v * s.t0) * th) / slope;
        if (t <= s.t_end) {
            return std::max(t, s.t_begin);
        }
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace relcollapse
