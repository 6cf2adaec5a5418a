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

#include <vector>

#include "relcollapse/exact.hpp"

namespace ex = relcollapse::exact;
using relcollapse::Event;

TEST(Exact, LightSpeed) {
    EXPECT_TRUE(ex::within_light_speed({0, 0}, {8, -6}));
    EXPECT_TRUE(ex::within_light_speed({0, 0}, {2, 2}));
    EXPECT_FALSE(ex::within_light_speed({0, 0}, {1, 1.0000000001}));
    EXPECT_TRUE(ex::within_light_speed({0.1, 0}, {0.3, 0.2}) == (0.3 - 0.1 >= 0.2));
}

TEST(Exact, OnSegment) {
    EXPECT_TRUE(ex::on_segment({0, 0}, {8, -6}, {6, -4.5}));
    EXPECT_TRUE(ex::on_segment({0, 0}, {8, -6}, {0, 0}));
    EXPECT_TRUE(ex::on_segment({0, 0}, {8, -6}, {8, -6}));
    EXPECT_FALSE(ex::on_segment({0, 0}, {8, -6}, {6, -4.5000000001}));
    EXPECT_FALSE(ex::on_segment({0, 0}, {8, -6}, {9, -6.75}));
    EXPECT_TRUE(ex::on_segment({0, 0}, {16, 4}, {6, 1.5}));
    EXPECT_TRUE(ex::on_segment({1e-3, 0}, {1e3, 0}, {1, 0}));
    EXPECT_TRUE(ex::on_segment({0.1, 0}, {100, 0}, {50, 0}));
    EXPECT_TRUE(ex::on_segment({0, 0}, {0x1p-900, 0x1p-901}, {0x1p-901, 0x1p-902}));
    EXPECT_FALSE(ex::on_segment({0, 0}, {1e300, 1e299}, {1, 0.5}));
}

TEST(Exact, OnPolyline) {
    const std::vector<Event> wl = {{0, 0}, {2, 1}, {4, 1}};
    EXPECT_TRUE(ex::on_polyline(wl, {1, 0.5}));
    EXPECT_TRUE(ex::on_polyline(wl, {3, 1}));
    EXPECT_FALSE(ex::on_polyline(wl, {3, 1.5}));
    EXPECT_FALSE(ex::on_polyline(wl, {5, 1}));
}
