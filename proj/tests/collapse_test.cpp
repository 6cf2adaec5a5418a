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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "relcollapse/collapse.hpp"
#include "relcollapse/gadgets.hpp"
#include "relcollapse/oracle.hpp"

namespace rc = relcollapse;
namespace g = relcollapse::gadgets;
using rc::Event;

namespace {

constexpr double kTol = 1e-12;

double dist(const rc::Vector &a, const rc::Vector &b) { return (a - b).norm(); }

// The likeliest full outcome assignment of a scenario.
rc::OutcomeAssignment likeliest(const rc::Scenario &s) {
    const auto d = rc::enumerate(s);
    const auto it = std::max_element(d.branches.begin(), d.branches.end(),
                                     [](const auto &a, const auto &b) { return a.probability < b.probability; });
    return it->outcomes;
}

std::set<std::string> as_set(const std::vector<std::string> &v) { return {v.begin(), v.end()}; }

// Events not in the causal future of p: the ones a backward-cone state at p holds.
std::set<std::string> not_in_future(const rc::Scenario &s, const Event &p) {
    std::set<std::string> out;
    for (const auto &e : s.events) {
        if (e.at != p && !rc::causally_precedes(p, e.at)) out.insert(e.id);
    }
    return out;
}

std::set<std::string> in_past(const rc::Scenario &s, const Event &p) {
    std::set<std::string> out;
    for (const auto &e : s.events) {
        if (rc::causally_precedes(e.at, p)) out.insert(e.id);
    }
    return out;
}

}  // namespace

TEST(SurfaceState, MesonCones) {
    const auto s = g::fig3();
    const auto ms = g::meson_states();
    const Event p = *s.lookup_point("P");
    const Event pp = *s.lookup_point("Pp");

    const auto at_p = rc::surface_state(s, rc::sigma(p), {});
    EXPECT_FALSE(at_p.impossible);
    EXPECT_NEAR(at_p.weight, 1.0, kTol);
    EXPECT_TRUE(at_p.applied.empty());
    EXPECT_LT(dist(at_p.state.amplitudes(), ms.superposed), kTol);

    const auto joint = rc::surface_state(s, rc::sigma(std::vector<Event>{p, pp}), {{"M", "pi"}});
    EXPECT_NEAR(joint.weight, 0.5, kTol);
    EXPECT_EQ(joint.applied, std::vector<std::string>{"M"});
    EXPECT_LT(dist(joint.state.amplitudes(), ms.pipi_i2), kTol);

    const auto kaon = rc::surface_state(s, rc::sigma(pp), {{"M", "K"}});
    EXPECT_NEAR(kaon.weight, 0.5, kTol);
    EXPECT_LT(dist(kaon.state.amplitudes(), ms.kkbar_i0), kTol);
}

TEST(SurfaceState, ErrorsAndImpossible) {
    const auto s = g::fig3(g::meson_states().pipi_i2);
    const Event pp = *s.lookup_point("Pp");
    EXPECT_THROW(rc::surface_state(s, rc::sigma(pp), {}), rc::ValidationError);
    EXPECT_THROW(rc::surface_state(s, rc::sigma(pp), {{"M", "eta"}}), rc::ValidationError);
    const auto st = rc::surface_state(s, rc::sigma(pp), {{"M", "K"}});
    EXPECT_TRUE(st.impossible);
    EXPECT_LT(st.weight, 1e-20);
    // An unassigned measurement that is not Before the surface is fine.
    EXPECT_NO_THROW(rc::surface_state(s, rc::sigma(*s.lookup_point("P")), {}));
}

TEST(SurfaceState, PointStateMatchesSurface) {
    const auto s = g::fig1();
    const auto oa = likeliest(s);
    for (const Event p : {Event{3, -2.25}, Event{5, 3.75}, Event{7, -5.25}}) {
        const auto fc = rc::point_state(s, p, rc::ForwardConePrescription{}, oa);
        const auto hk = rc::point_state(s, p, rc::HKPrescription{}, oa);
        const auto fl = rc::point_state(s, p, rc::FlatFramePrescription{0.5}, oa);
        EXPECT_LT(rc::distance(fc.state, rc::surface_state(s, rc::sigma(p), oa).state), kTol);
        EXPECT_LT(rc::distance(hk.state, rc::surface_state(s, rc::eta(p), oa).state), kTol);
        EXPECT_LT(rc::distance(fl.state, rc::surface_state(s, rc::flat(rc::frame_time(p, 0.5), 0.5), oa).state), kTol);
        EXPECT_EQ(as_set(fc.applied), in_past(s, p));
        EXPECT_EQ(as_set(hk.applied), not_in_future(s, p));
    }
}

TEST(SurfaceState, LinearizationInvariant) {
    const auto s = g::fig1();
    const auto oa = likeliest(s);
    const auto surf = rc::eta(Event{6.5, -4.875});
    const auto st = rc::surface_state(s, surf, oa);
    const rc::Vector raw = st.state.amplitudes() * std::sqrt(st.weight);
    std::set<std::size_t> before;
    for (const auto &id : st.applied) before.insert(*s.event_index(id));
    for (const auto &lin : rc::linearizations(s.causal_order(), 64, 7)) {
        std::vector<std::size_t> sub;
        for (auto i : lin) {
            if (before.count(i)) sub.push_back(i);
        }
        EXPECT_LT(dist(rc::apply_events(s, sub, oa), raw), 1e-10);
    }
}

TEST(Trace, SegmentsMatchConeMembership) {
    const auto s = g::fig1();
    const auto oa = likeliest(s);
    for (const auto *sub : {"A", "B"}) {
        for (const rc::Prescription presc : {rc::Prescription{rc::HKPrescription{}},
                                             rc::Prescription{rc::ForwardConePrescription{}}}) {
            const auto trace = rc::worldline_trace(s, sub, presc, oa);
            ASSERT_FALSE(trace.empty());
            const auto &wl = *s.worldline(sub);
            EXPECT_EQ(trace.front().t_begin, wl.vertices.front().t);
            EXPECT_EQ(trace.back().t_end, wl.vertices.back().t);
            double prev_weight = 1.0;
            for (std::size_t k = 0; k < trace.size(); ++k) {
                const auto &seg = trace[k];
                if (k) EXPECT_EQ(seg.t_begin, trace[k - 1].t_end);
                EXPECT_LT(seg.t_begin, seg.t_end);
                const bool hk = std::holds_alternative<rc::HKPrescription>(presc);
                const auto expect = hk ? not_in_future(s, seg.sample) : in_past(s, seg.sample);
                EXPECT_EQ(as_set(seg.state.applied), expect) << sub << " " << rc::to_string(presc) << " " << k;
                EXPECT_LE(seg.state.weight, prev_weight + kTol);
                prev_weight = seg.state.weight;
                if (k) {
                    const auto earlier = as_set(trace[k - 1].state.applied);
                    const auto now = as_set(seg.state.applied);
                    for (const auto &c : seg.crossings) {
                        EXPECT_TRUE(now.count(c) && !earlier.count(c)) << c;
                    }
                }
            }
        }
    }
}

TEST(Trace, FinalWeightIsBranchProbability) {
    const auto s = g::fig1();
    const auto d = rc::enumerate(s);
    const auto oa = likeliest(s);
    const auto trace = rc::worldline_trace(s, "A", rc::HKPrescription{}, oa);
    ASSERT_EQ(trace.back().state.applied.size(), s.events.size());
    EXPECT_NEAR(trace.back().state.weight, d.probability([&](const auto &b) { return b == oa; }), kTol);
}

TEST(Trace, KnownCrossings) {
    const auto s = g::fig1();
    const auto oa = likeliest(s);
    const auto hk = rc::worldline_trace(s, "A", rc::HKPrescription{}, oa);
    const auto fc = rc::worldline_trace(s, "A", rc::ForwardConePrescription{}, oa);
    auto cut_at = [](const auto &trace, const std::string &id) {
        for (const auto &seg : trace) {
            if (std::find(seg.crossings.begin(), seg.crossings.end(), id) != seg.crossings.end()) return seg.t_begin;
        }
        return -1.0;
    };
    // Events on A's world-line cross it at their own time under both cones.
    EXPECT_DOUBLE_EQ(cut_at(hk, "L1"), 2.0);
    EXPECT_DOUBLE_EQ(cut_at(fc, "L1"), 2.0);
    EXPECT_DOUBLE_EQ(cut_at(fc, "M"), 6.0);
    // R1 at (2,1.5) leaves the future of (t,-0.75t) once 2-t = 1.5+0.75t.
    EXPECT_NEAR(cut_at(hk, "R1"), 0.5 / 1.75, 1e-12);
    // Its past cone reaches A only after A comes to rest at (8,-6).
    EXPECT_EQ(cut_at(fc, "R1"), -1.0);
    EXPECT_EQ(rc::crossing_time(s.worldline("A")->vertices, Event{2, 1.5}, rc::ForwardConePrescription{}), 9.5);
}

TEST(Trace, NoEvents) {
    rc::ScenarioBuilder b("free");
    b.subsystem("A", 2, {{0, 0}, {3, 1}});
    b.initial_factor({"A"}, g::builtin_state("builtin.up"));
    const auto s = b.build();
    const auto trace = rc::worldline_trace(s, "A", rc::HKPrescription{}, {});
    ASSERT_EQ(trace.size(), 1u);
    EXPECT_NEAR(trace[0].state.weight, 1.0, kTol);
    EXPECT_EQ(trace[0].sample, (Event{1.5, 0.5}));
    EXPECT_THROW(rc::worldline_trace(s, "B", rc::HKPrescription{}, {}), rc::ValidationError);
}

TEST(PrescriptionOrder, AlwaysLinearizations) {
    for (const auto &s : g::builtin_scenarios()) {
        const auto order = s.causal_order();
        for (const auto &p : rc::standard_prescriptions()) {
            for (const auto &wl : s.worldlines) {
                EXPECT_TRUE(order.is_linearization(rc::prescription_order(s, wl.vertices, p)));
            }
        }
    }
}

TEST(PrescriptionOrder, Names) {
    EXPECT_EQ(rc::to_string(rc::Prescription{rc::HKPrescription{}}), "hk");
    EXPECT_EQ(rc::to_string(rc::Prescription{rc::ForwardConePrescription{}}), "forward");
    EXPECT_EQ(rc::to_string(rc::Prescription{rc::FlatFramePrescription{0.5}}), "flat(0.5)");
    EXPECT_EQ(rc::worldline_point(std::vector<Event>{{0, 0}, {2, 1}, {4, -1}}, 3), (Event{3, 0}));
    EXPECT_EQ(rc::worldline_point(std::vector<Event>{{0, 0}, {2, 1}}, 5), (Event{5, 1}));
}
