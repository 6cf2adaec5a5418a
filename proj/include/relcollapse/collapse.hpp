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
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "relcollapse/hilbert.hpp"
#include "relcollapse/scenario.hpp"
#include "relcollapse/spacetime.hpp"

namespace relcollapse {

/// Collapse along backward light cones: the state at P has the collapse of
/// every measurement not in P's causal future.
struct HKPrescription {};
/// Collapse along forward light cones: the state at P has the collapse of
/// every measurement in P's causal past.
struct ForwardConePrescription {};
/// Collapse on constant-time slices of one inertial frame. Not one of the
/// light-cone prescriptions; kept as a frame-dependent baseline.
struct FlatFramePrescription {
    double rapidity = 0.0;
};
/// A fixed surface, independent of the point.
struct ExplicitSurfacePrescription {
    CausalSurface surface;
};

using Prescription =
    std::variant<HKPrescription, ForwardConePrescription, FlatFramePrescription, ExplicitSurfacePrescription>;

inline std::string to_string(const Prescription &p) {
    return std::visit(
        [](const auto &v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, HKPrescription>) return "hk";
            else if constexpr (std::is_same_v<T, ForwardConePrescription>) return "forward";
            else if constexpr (std::is_same_v<T, FlatFramePrescription>) {
                std::ostringstream os;
                os << "flat(" << v.rapidity << ")";
                return os.str();
            } else {
                std::ostringstream os;
                os << "surface " << v.surface;
                return os.str();
            }
        },
        p);
}

struct SurfaceState {
    StateVector state;  ///< normalized, unless `impossible`
    double weight = 0.0;  ///< joint probability of the conditioning outcomes
    CausalSurface surface;
    OutcomeAssignment outcomes;
    std::vector<std::string> applied;  ///< ids of the events taken into account, in application order
    bool impossible = false;
};

/// Applies the events with the given indices, in that order, to the initial
/// state: interactions as unitaries, measurements as the projector of the
/// assigned outcome. No renormalization.
inline Vector apply_events(const Scenario &s, const std::vector<std::size_t> &order, const OutcomeAssignment &oa) {
    Vector amps = s.initial.amplitudes();
    for (auto i : order) {
        const auto &e = s.events[i];
        if (e.is_measurement()) {
            auto it = oa.find(e.id);
            if (it == oa.end()) throw ValidationError("no outcome assigned to measurement '" + e.id + "'");
            const auto *o = e.measurement().find(it->second);
            if (!o) throw ValidationError("measurement '" + e.id + "' has no outcome '" + it->second + "'");
            amps = apply_local(o->projector, s.space, amps);
        } else {
            amps = apply_local(e.interaction().unitary, s.space, amps);
        }
    }
    return amps;
}

/// The state a surface carries: every event Before it applied, in a
/// linearization of the causal order, then normalized once.
inline SurfaceState surface_state(const Scenario &s, const CausalSurface &surf, const OutcomeAssignment &oa) {
    check_assignment(s, oa);
    const auto order = events_before(s, surf);
    StateVector raw(s.space, apply_events(s, order, oa));
    SurfaceState out;
    out.surface = surf;
    out.outcomes = oa;
    for (auto i : order) out.applied.push_back(s.events[i].id);
    out.weight = raw.norm_squared();
    if (out.weight < kZeroNorm) {
        out.impossible = true;
        out.state = std::move(raw);
    } else {
        out.state = normalize(raw);
    }
    return out;
}

/// The surface a prescription assigns to the point P.
inline CausalSurface surface_for(const Event &p, const Prescription &presc) {
    return std::visit(
        [&](const auto &v) -> CausalSurface {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, HKPrescription>) return eta(p);
            else if constexpr (std::is_same_v<T, ForwardConePrescription>) return sigma(p);
            else if constexpr (std::is_same_v<T, FlatFramePrescription>) return flat(frame_time(p, v.rapidity), v.rapidity);
            else return v.surface;
        },
        presc);
}

inline SurfaceState point_state(const Scenario &s, const Event &p, const Prescription &presc,
                                const OutcomeAssignment &oa) {
    return surface_state(s, surface_for(p, presc), oa);
}

// ---------------------------------------------------------------------------
// World-line traces
// ---------------------------------------------------------------------------

/// Lab time along `vertices` (extended at rest beyond its ends) after which
/// the event's collapse is included under `presc`. ForwardCone includes it
/// at the crossing itself; the others only strictly after.
inline double crossing_time(std::span<const Event> vertices, const Event &e, const Prescription &presc) {
    return std::visit(
        [&](const auto &v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, HKPrescription>) return past_cone_exit_time(vertices, e);
            else if constexpr (std::is_same_v<T, ForwardConePrescription>) return future_cone_entry_time(vertices, e);
            else if constexpr (std::is_same_v<T, FlatFramePrescription>)
                return simultaneity_crossing_time(vertices, e, v.rapidity);
            else return std::numeric_limits<double>::quiet_NaN();
        },
        presc);
}

/// Point of the polyline at lab time t (clamped to its ends).
inline Event worldline_point(std::span<const Event> vertices, double t) {
    if (t <= vertices.front().t) return {t, vertices.front().x};
    for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
        const auto &a = vertices[k];
        const auto &b = vertices[k + 1];
        if (t <= b.t) return {t, a.x + (b.x - a.x) * (t - a.t) / (b.t - a.t)};
    }
    return {t, vertices.back().x};
}

struct TraceSegment {
    double t_begin = 0.0;
    double t_end = 0.0;
    Event sample;  ///< interior point the state was evaluated at
    SurfaceState state;
    std::vector<std::string> crossings;  ///< events whose cones cross the world-line at t_begin
};

/// Splits the world-line at every lab time where an event's cone (per the
/// prescription) crosses it. Each segment carries the point state valid in
/// its interior.
inline std::vector<TraceSegment> worldline_trace(const Scenario &s, const WorldLine &wl, const Prescription &presc,
                                                 const OutcomeAssignment &oa) {
    if (wl.vertices.size() < 2) throw ValidationError("world-line of '" + wl.subsystem + "' needs two points to trace");
    const double t0 = wl.vertices.front().t;
    const double t1 = wl.vertices.back().t;

    std::vector<std::pair<double, std::string>> cuts;
    if (!std::holds_alternative<ExplicitSurfacePrescription>(presc)) {
        for (const auto &e : s.events) {
            const double c = crossing_time(wl.vertices, e.at, presc);
            if (c >= t0 && c < t1) cuts.emplace_back(c, e.id);
        }
    }
    std::sort(cuts.begin(), cuts.end());

    std::vector<double> bounds = {t0};
    std::vector<std::vector<std::string>> names = {{}};
    for (const auto &[c, id] : cuts) {
        if (c == bounds.back()) {
            names.back().push_back(id);
        } else {
            bounds.push_back(c);
            names.push_back({id});
        }
    }
    bounds.push_back(t1);

    std::vector<TraceSegment> out;
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        TraceSegment seg;
        seg.t_begin = bounds[k];
        seg.t_end = bounds[k + 1];
        seg.sample = worldline_point(wl.vertices, 0.5 * (seg.t_begin + seg.t_end));
        seg.state = point_state(s, seg.sample, presc, oa);
        seg.crossings = names[k];
        out.push_back(std::move(seg));
    }
    return out;
}

inline std::vector<TraceSegment> worldline_trace(const Scenario &s, const std::string &subsystem,
                                                 const Prescription &presc, const OutcomeAssignment &oa) {
    const auto *wl = s.worldline(subsystem);
    if (!wl) throw ValidationError("no world-line for '" + subsystem + "'");
    return worldline_trace(s, *wl, presc, oa);
}

/// Order in which a prescription incorporates the events as seen along one
/// world-line: by crossing time, ties broken by the causal order and then by
/// scenario index. Always a linearization of the causal order.
inline std::vector<std::size_t> prescription_order(const Scenario &s, std::span<const Event> reference,
                                                   const Prescription &presc) {
    const auto order = s.causal_order();
    std::vector<double> key(s.events.size());
    for (std::size_t i = 0; i < s.events.size(); ++i) {
        key[i] = std::holds_alternative<ExplicitSurfacePrescription>(presc)
                     ? 0.0
                     : crossing_time(reference, s.events[i].at, presc);
    }
    std::vector<std::size_t> out;
    std::vector<bool> placed(s.events.size(), false);
    while (out.size() < s.events.size()) {
        std::size_t best = s.events.size();
        for (std::size_t i = 0; i < s.events.size(); ++i) {
            if (placed[i]) continue;
            bool ready = true;
            for (std::size_t j = 0; j < s.events.size(); ++j) {
                if (!placed[j] && order.precedes(j, i)) {
                    ready = false;
                    break;
                }
            }
            if (ready && (best == s.events.size() || key[i] < key[best])) best = i;
        }
        placed[best] = true;
        out.push_back(best);
    }
    return out;
}

}  // namespace relcollapse
