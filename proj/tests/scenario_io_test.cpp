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

#include <string>

#include "relcollapse/gadgets.hpp"
#include "relcollapse/scenario_io.hpp"

namespace rc = relcollapse;
namespace g = relcollapse::gadgets;

namespace {

std::string source(const std::string &rel) { return std::string(RELCOLLAPSE_SOURCE_DIR) + "/" + rel; }

void expect_same(const rc::Scenario &a, const rc::Scenario &b) {
    EXPECT_EQ(a.name, b.name);
    EXPECT_EQ(a.space, b.space);
    EXPECT_EQ(a.worldlines, b.worldlines);
    EXPECT_EQ(a.initial.amplitudes(), b.initial.amplitudes());
    ASSERT_EQ(a.events.size(), b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        EXPECT_EQ(a.events[i].id, b.events[i].id);
        EXPECT_EQ(a.events[i].at, b.events[i].at);
        EXPECT_EQ(a.events[i].targets(), b.events[i].targets());
    }
    EXPECT_EQ(a.points, b.points);
    EXPECT_EQ(a.predicates, b.predicates);
    EXPECT_EQ(a.queries, b.queries);
}

}  // namespace

TEST(ScenarioFiles, MatchBuiltins) {
    for (const auto *name : {"fig1", "fig2", "fig3"}) {
        const auto s = rc::load(source(std::string("scenarios/") + name + ".scn"));
        expect_same(s, g::builtin_scenario(name));
    }
    EXPECT_EQ(rc::load(source("scenarios/fig3.scn")).events.size(), 1u);
    EXPECT_EQ(rc::load(source("scenarios/fig3.scn")).space.total_dim(), 25u);
}

TEST(ScenarioFiles, RoundTrip) {
    for (const auto &s : g::builtin_scenarios()) {
        const auto text = rc::emit(s);
        const auto back = rc::parse_scenario(text);
        expect_same(back, s);
        EXPECT_EQ(rc::emit(back), text);
    }
}

TEST(ScenarioFiles, LiteralOperatorsRoundTrip) {
    const std::string text =
        "[scenario] name=lit\n"
        "[subsystem] name=q dim=2\n"
        "[worldline] subsystem=q points=(0,0);(2,0.5)\n"
        "[initial] targets=q expr=0.6,0+0.8i\n"
        "[event] id=U at=(1,0.25) kind=interaction targets=q unitary=[0,1,1,0]\n"
        "[event] id=Z at=(1.5,0.375) kind=measurement targets=q outcomes=0:[1,0,0,0],1:[0,0,0,1]\n";
    const auto s = rc::parse_scenario(text);
    EXPECT_EQ(s.initial.amplitude(1), rc::cplx(0, 0.8));
    EXPECT_EQ(s.events.size(), 2u);
    expect_same(rc::parse_scenario(rc::emit(s)), s);
}

TEST(ScenarioFiles, Errors) {
    try {
        rc::load(source("scenarios/invalid/duplicate_subsystem.scn"));
        FAIL() << "expected a parse error";
    } catch (const rc::ParseError &e) {
        EXPECT_EQ(e.line, 3u);
        EXPECT_GT(e.column, 0u);
    }
    EXPECT_THROW(rc::load(source("scenarios/invalid/superluminal.scn")), rc::ValidationError);
    EXPECT_THROW(rc::load(source("scenarios/invalid/nonlocal_event.scn")), rc::ValidationError);
    EXPECT_THROW(rc::load(source("scenarios/none.scn")), rc::ValidationError);
    EXPECT_THROW(rc::parse_scenario("[bogus] a=1\n"), rc::ParseError);
    EXPECT_THROW(rc::parse_scenario("[subsystem] name=A dim=two\n"), rc::ParseError);
    EXPECT_THROW(rc::parse_scenario("[worldline] subsystem=Z points=(0,0);(1,0)\n"), rc::ParseError);
}

TEST(ScenarioFiles, ShortestRealFormatting) {
    EXPECT_EQ(rc::io_detail::format_real(0.1), "0.1");
    EXPECT_EQ(rc::io_detail::format_real(-4.5), "-4.5");
    EXPECT_EQ(rc::io_detail::parse_complex("0.5-0.25i"), rc::cplx(0.5, -0.25));
    EXPECT_EQ(rc::io_detail::parse_complex("-2"), rc::cplx(-2, 0));
}
