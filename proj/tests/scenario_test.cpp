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
#include <set>
#include <string>
#include <vector>

#include "relcollapse/gadgets.hpp"
#include "relcollapse/scenario.hpp"

namespace rc = relcollapse;
namespace g = relcollapse::gadgets;
using rc::Event;

namespace {

std::set<std::string> ids(const rc::Scenario &s, const std::vector<std::size_t> &idx) {
    std::set<std::string> out;
    for (auto i : idx) out.insert(s.events[i].id);
    return out;
}

bool mentions(const std::vector<std::string> &v, const std::string &needle) {
    return std::any_of(v.begin(), v.end(), [&](const auto &s) { return s.find(needle) != std::string::npos; });
}

// Two qubits on diverging world-lines with one I_z measurement of A at `m`.
rc::ScenarioBuilder pair_with_measurement(Event m) {
    rc::ScenarioBuilder b("pair");
    b.subsystem("A", 2, {{0, 0}, {4, -2}});
    b.subsystem("B", 2, {{0, 0}, {4, 2}});
    b.initial_factor({"A", "B"}, g::coupled_states().singlet);
    b.event({"M", m, g::builtin_measurement("builtin.iz_A_measurement", {"A"})});
    return b;
}

}  // namespace

TEST(Validate, BuiltinsAreValid) {
    for (const auto &s : g::builtin_scenarios()) EXPECT_TRUE(rc::validate(s).empty()) << s.name;
}

TEST(Validate, Locality) {
    const auto s = pair_with_measurement({2, 1}).build_unchecked();
    EXPECT_TRUE(mentions(rc::validate(s), "locality"));
    EXPECT_TRUE(rc::validate(pair_with_measurement({2, -1}).build_unchecked()).empty());
}

TEST(Validate, Superluminal) {
    auto b = pair_with_measurement({2, -1});
    b.worldline("B", {{0, 0}, {1, 2}});
    EXPECT_TRUE(mentions(rc::validate(b.build_unchecked()), "superluminal"));
    b.worldline("B", {{0, 0}, {2, 2}});
    EXPECT_TRUE(rc::validate(b.build_unchecked()).empty());
    b.worldline("B", {{0, 0}, {0, 0.5}});
    EXPECT_TRUE(mentions(rc::validate(b.build_unchecked()), "strictly increasing"));
}

TEST(Validate, EventsAndInitialState) {
    auto b = pair_with_measurement({2, -1});
    b.event({"M2", {2, -1}, g::builtin_measurement("builtin.iz_A_measurement", {"A"})});
    EXPECT_TRUE(mentions(rc::validate(b.build_unchecked()), "coincident"));

    auto early = pair_with_measurement({0, 0});
    EXPECT_TRUE(mentions(rc::validate(early.build_unchecked()), "not after the initial surface"));

    rc::ScenarioBuilder un("unnormalized");
    un.subsystem("A", 2, {{0, 0}, {1, 0}});
    un.initial_factor({"A"}, rc::Vector::Ones(2));
    EXPECT_TRUE(mentions(rc::validate(un.build_unchecked()), "not normalized"));
}

TEST(Validate, IncompleteMeasurement) {
    auto b = pair_with_measurement({2, -1});
    rc::Measurement half;
    half.outcomes.push_back({"up", g::builtin_operator("builtin.iz_up", {"A"})});
    b.event({"H", {3, -1.5}, half});
    EXPECT_TRUE(mentions(rc::validate(b.build_unchecked()), "do not sum to the identity"));
}

TEST(Validate, EventOnDeclaredSurface) {
    auto b = pair_with_measurement({2, -1});
    b.point("P", {3, 0});
    b.query({{{"kind", "surface-state"}, {"surface", "flat(2)"}}});
    EXPECT_FALSE(rc::validate(b.build_unchecked()).empty());
}

TEST(Validate, BuildThrows) {
    EXPECT_THROW(pair_with_measurement({2, 1}).build(), rc::ValidationError);
}

TEST(EventsBefore, ConeExamples) {
    const auto s3 = g::fig3();
    const Event p = *s3.lookup_point("P");
    const Event pp = *s3.lookup_point("Pp");
    EXPECT_TRUE(rc::events_before(s3, rc::sigma(p)).empty());
    EXPECT_EQ(ids(s3, rc::events_before(s3, rc::sigma(std::vector<Event>{p, pp}))), std::set<std::string>{"M"});

    const auto s1 = g::fig1();
    const Event just_after_m{6.5, -4.875};
    const auto before = ids(s1, rc::events_before(s1, rc::eta(just_after_m)));
    for (const auto *id : {"L1", "R1", "L2", "R2", "M"}) EXPECT_TRUE(before.count(id)) << id;
    EXPECT_THROW(rc::events_before(s1, rc::eta(s1.event("M").at)), rc::ValidationError);
}

TEST(EventsBefore, FlatAndNested) {
    for (const auto &s : g::builtin_scenarios()) {
        EXPECT_EQ(rc::events_before(s, rc::flat(100)).size(), s.events.size());
        EXPECT_TRUE(rc::events_before(s, rc::flat(0.01)).empty());
        std::set<std::string> prev;
        for (double t = 0.125; t < 20; t += 0.3) {
            const auto now = ids(s, rc::events_before(s, rc::flat(t)));
            EXPECT_TRUE(std::includes(now.begin(), now.end(), prev.begin(), prev.end()));
            prev = now;
        }
        const auto lin = rc::events_before(s, rc::flat(100));
        EXPECT_TRUE(s.causal_order().is_linearization(lin));
    }
}

TEST(Parse, SurfacesAndOutcomes) {
    const auto s = g::fig3();
    EXPECT_EQ(rc::parse_surface("sigma(P)", s), rc::sigma(*s.lookup_point("P")));
    EXPECT_EQ(rc::parse_surface("eta((1,2))", s), rc::eta(Event{1, 2}));
    EXPECT_EQ(rc::parse_surface("flat(2, 0.5)", s), rc::flat(2, 0.5));
    EXPECT_EQ(rc::parse_surface("sigma(P,Pp)", s),
              rc::sigma(std::vector<Event>{*s.lookup_point("P"), *s.lookup_point("Pp")}));
    EXPECT_THROW(rc::parse_surface("cone(P)", s), rc::ValidationError);
    EXPECT_THROW(rc::parse_surface("sigma(Q)", s), rc::ValidationError);
    const auto oa = rc::parse_outcomes("M=pi");
    EXPECT_EQ(oa.at("M"), "pi");
    EXPECT_TRUE(rc::parse_outcomes("").empty());
    EXPECT_THROW(rc::check_assignment(s, {{"M", "eta"}}), rc::ValidationError);
    EXPECT_THROW(rc::check_assignment(s, {{"X", "pi"}}), rc::ValidationError);
}

TEST(Builder, InitialFactorsReordered) {
    rc::ScenarioBuilder b("order");
    b.subsystem("A", 2, {{0, 0}, {1, 0}});
    b.subsystem("B", 3, {{0, 0}, {1, 1}});
    rc::Vector bb = rc::Vector::Zero(3);
    bb(2) = 1;
    b.initial_factor({"B"}, bb);
    b.initial_factor({"A"}, g::builtin_state("builtin.down"));
    const auto s = b.build();
    EXPECT_EQ(s.initial.amplitude(1 * 3 + 2), rc::cplx(1.0));
    rc::ScenarioBuilder missing("missing");
    missing.subsystem("A", 2, {{0, 0}, {1, 0}});
    EXPECT_THROW(missing.build_unchecked(), rc::ValidationError);
}
