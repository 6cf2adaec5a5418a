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

#include "relcollapse/attribution.hpp"
#include "relcollapse/collapse.hpp"
#include "relcollapse/error.hpp"
#include "relcollapse/exact.hpp"
#include "relcollapse/gadgets.hpp"
#include "relcollapse/hilbert.hpp"
#include "relcollapse/oracle.hpp"
#include "relcollapse/reproduction.hpp"
#include "relcollapse/scenario.hpp"
#include "relcollapse/scenario_io.hpp"
#include "relcollapse/spacetime.hpp"
