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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "relcollapse/cli.hpp"

namespace cli = relcollapse::cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string> &args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string source(const std::string &rel) { return std::string(RELCOLLAPSE_SOURCE_DIR) + "/" + rel; }

// Runs the installed binary through the shell; returns exit status and stdout.
std::pair<int, std::string> run_binary(const std::string &args) {
    const std::string cmd = std::string(RELCOLLAPSE_CLI) + " " + args + " 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    std::string text;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) text.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text};
}

bool contains(const std::string &hay, const std::string &needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST(Cli, Usage) {
    EXPECT_EQ(run({}).code, cli::kUsage);
    EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
    EXPECT_EQ(run({"state", "builtin:fig3"}).code, cli::kUsage);
    EXPECT_EQ(run({"--help"}).code, cli::kOk);
    EXPECT_EQ(run({"attribute", "builtin:fig3", "--observable", "builtin.pi_projector", "--targets", "A", "--at", "P",
                   "--format", "xml"})
                  .code,
              cli::kUsage);
}

TEST(Cli, Validate) {
    auto r = run({"validate", source("scenarios/fig3.scn")});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_EQ(r.out, "ok: fig3 (2 subsystems, 1 events, 1 measurements)\n");
    r = run({"validate", source("scenarios/invalid/superluminal.scn")});
    EXPECT_EQ(r.code, cli::kInvalid);
    EXPECT_TRUE(contains(r.err, "superluminal"));
    r = run({"validate", source("scenarios/invalid/duplicate_subsystem.scn")});
    EXPECT_EQ(r.code, cli::kInvalid);
    EXPECT_TRUE(contains(r.err, "line 3, column 13"));
    EXPECT_EQ(run({"validate", "builtin:fig9"}).code, cli::kInvalid);
}

TEST(Cli, SimulateCsv) {
    const auto r = run({"simulate", "builtin:fig3"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_TRUE(contains(r.out, "M,probability\n"));
    EXPECT_TRUE(contains(r.out, "\npi,0.5"));
    const auto path = std::filesystem::temp_directory_path() / "relcollapse_cli_test.csv";
    EXPECT_EQ(run({"simulate", "builtin:fig3", "--out", path.string()}).code, cli::kOk);
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_EQ(text.str(), r.out);
    std::filesystem::remove(path);
}

TEST(Cli, StateAndTrace) {
    auto r = run({"state", "builtin:fig3", "--surface", "sigma(P,Pp)", "--outcomes", "M=pi"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_TRUE(contains(r.out, "events before: M\n"));
    EXPECT_TRUE(contains(r.out, "weight 0.5\n"));
    r = run({"state", "builtin:fig3", "--surface", "sigma(Pp)"});
    EXPECT_EQ(r.code, cli::kInvalid);

    r = run({"trace", "builtin:fig3", "--worldline", "B", "--prescription", "forward", "--outcomes", "M=K"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_TRUE(contains(r.out, "world-line B under forward\n"));
    EXPECT_TRUE(contains(r.out, "[1, 4) crossing M  collapsed: M  weight 0.5\n"));
    EXPECT_EQ(run({"trace", "builtin:fig3", "--worldline", "B", "--prescription", "sideways"}).code, cli::kInvalid);
}

TEST(Cli, AttributeAndCurious) {
    auto r = run({"attribute", "builtin:fig3", "--rule", "ghirardi", "--observable", "builtin.meson_isospin_sq",
                  "--targets", "A,B", "--at", "P", "--at2", "Pp", "--outcomes", "M=pi", "--format", "kv"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_TRUE(contains(r.out, ".definite=true\n"));
    r = run({"attribute", "builtin:fig3", "--rule", "uniform", "--observable", "builtin.pi_projector", "--targets", "A",
             "--at", "(3,0)", "--outcomes", "M=pi"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_TRUE(contains(r.out, "definite (1)"));
    r = run({"attribute", "builtin:fig3", "--observable", "builtin.pi_projector", "--targets", "A", "--at", "(3,0)"});
    EXPECT_EQ(r.code, cli::kInvalid);

    r = run({"curious"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_TRUE(contains(r.out, "definite (6)"));
    r = run({"curious", "--format", "kv"});
    EXPECT_TRUE(contains(r.out, "no_k.A="));
    r = run({"curious", "builtin:fig3", "--outcomes", "M=K"});
    EXPECT_EQ(r.code, cli::kOk);
}

TEST(Cli, ZeroWeightIsNumericalFailure) {
    std::ostringstream text;
    text << "[scenario] name=pure\n"
         << "[subsystem] name=A dim=5\n[subsystem] name=B dim=5\n"
         << "[worldline] subsystem=A points=(0,0);(4,-3)\n[worldline] subsystem=B points=(0,0);(4,3)\n"
         << "[initial] targets=A,B expr=builtin.pipi_i2\n"
         << "[event] id=M at=(1,0.75) kind=measurement targets=B outcomes=builtin.hypercharge_B_measurement\n"
         << "[point] id=P at=(3,-2.25)\n[point] id=Pp at=(3,2.25)\n";
    const auto path = std::filesystem::temp_directory_path() / "relcollapse_pure.scn";
    std::ofstream(path) << text.str();
    EXPECT_EQ(run({"curious", path.string(), "--outcomes", "M=K"}).code, cli::kCheckFailed);
    std::filesystem::remove(path);
}

TEST(Cli, CompareAndEmit) {
    auto r = run({"compare", source("scenarios/fig2.scn")});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_TRUE(contains(r.out, "causal orders: 16 total, 16 checked"));
    EXPECT_TRUE(contains(r.out, ": PASS\n"));
    r = run({"emit", "fig3"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_EQ(r.out, relcollapse::emit(relcollapse::gadgets::fig3()));
}

TEST(Cli, DemoLines) {
    const auto r = run({"demo", "figs", "--cap", "16"});
    EXPECT_EQ(r.code, cli::kOk) << r.out;
    for (const auto *line : {"feature alpha: PASS", "feature beta: PASS", "eq3=eq5: PASS",
                             "prescription equivalence fig1: PASS", "prescription equivalence fig2: PASS",
                             "prescription equivalence fig3: PASS",
                             "curious attribution: I^2 definite (6), type(A) indefinite"}) {
        EXPECT_TRUE(contains(r.out, line)) << line;
    }
}

TEST(CliBinary, ExitCodesAndDeterminism) {
    const auto a = run_binary("compare " + source("scenarios/fig2.scn"));
    const auto b = run_binary("compare " + source("scenarios/fig2.scn"));
    EXPECT_EQ(a.first, 0);
    EXPECT_EQ(a.second, b.second);
    EXPECT_NE(run_binary("validate " + source("scenarios/invalid/superluminal.scn")).first, 0);
    EXPECT_EQ(run_binary("validate " + source("scenarios/invalid/nonlocal_event.scn")).first, 2);
    const auto s1 = run_binary("simulate builtin:fig1");
    const auto s2 = run_binary("simulate builtin:fig1");
    EXPECT_EQ(s1.first, 0);
    EXPECT_EQ(s1.second, s2.second);
}
