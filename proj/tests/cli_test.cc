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

// Runs the tslot binary and checks exit codes and key output lines.

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class Cli : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("tslot_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override {
        fs::remove_all(dir_);
    }

    Invocation run(const std::string &args) {
        auto out = dir_ / "stdout", err = dir_ / "stderr";
        std::string cmd = std::string(TSLOT_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
        int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
    }

    std::string fixture(const std::string &name) const {
        return std::string(TSLOT_FIXTURES) + "/" + name;
    }

    fs::path dir_;
};

TEST_F(Cli, ScheduleParallelWorkedExample) {
    auto r = run("schedule --task 1,5 --n 6 --tq 5 --mode parallel");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("T*=3"), std::string::npos) << r.err;
    EXPECT_NE(r.out.find("\"t_q\": \"5\""), std::string::npos);
}

TEST_F(Cli, ScheduleSequentialUnitSlot) {
    auto r = run("schedule --task 1,5 --n 6 --tq 1 --mode sequential");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("T*=6"), std::string::npos) << r.err;
}

TEST_F(Cli, ScheduleHalfSlotSequential) {
    auto r = run("schedule --task 1,5 --n 6 --tq 1/2 --mode sequential");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("T*=11"), std::string::npos) << r.err;
    EXPECT_EQ(run("schedule --task 1,5 --n 6 --tq 1/2 --mode parallel").code, 3);
}

TEST_F(Cli, ScheduleDegenerateTaskWarns) {
    auto r = run("schedule --task 1,2 --n 2");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("warning: no measuring nodes"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("T*=0"), std::string::npos);
}

TEST_F(Cli, ScheduleOutputValidatesAndRoundTrips) {
    auto path = (dir_ / "s.json").string();
    EXPECT_EQ(run("schedule --task 2,9 --n 10 --tq 3/2 --mode brute -o " + path).code, 0);
    auto v = run("validate --schedule " + path + " --n 10");
    EXPECT_EQ(v.code, 0) << v.out << v.err;
    EXPECT_NE(v.out.find("ok"), std::string::npos);
}

TEST_F(Cli, ValidateRejectsSwappedSchedule) {
    auto r = run("validate --schedule " + fixture("invalid_swap.json") + " --n 6");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("nodes 2 and 4"), std::string::npos) << r.out;
}

TEST_F(Cli, SimulateSlottedVerifies) {
    auto trace = (dir_ / "t.jsonl").string();
    auto r = run("simulate --task 1,5 --n 6 --tq 5 --seed 3 -o " + trace);
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("Verified"), std::string::npos);
    auto lines = slurp(trace);
    EXPECT_NE(lines.find("\"verdict\":\"Verified\""), std::string::npos);
}

TEST_F(Cli, SimulateAsyncFixtureIsAmbiguous) {
    auto r = run("simulate --mode async --task 1,4 --n 4 --profile " + fixture("async_race.json") + " --seed 1");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("AmbiguityDetected"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("order at 1: M2 M3"), std::string::npos);
    EXPECT_NE(r.out.find("order at 4: M3 M2"), std::string::npos);
}

TEST_F(Cli, SimulateDroppedFeedback) {
    auto r = run("simulate --task 1,5 --n 6 --tq 5 --profile " + fixture("dropped_feedback.json") + " --seed 1");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("missing-feedback"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("slot 3"), std::string::npos);
}

TEST_F(Cli, SimulateRequiresSeed) {
    EXPECT_EQ(run("simulate --task 1,5 --n 6 --tq 5").code, 3);
}

TEST_F(Cli, SimulateInvalidScheduleFile) {
    auto r = run("simulate --schedule " + fixture("invalid_swap.json") + " --n 6 --seed 1");
    EXPECT_EQ(r.code, 1);
}

TEST_F(Cli, ConfigErrors) {
    EXPECT_EQ(run("schedule --task 1,5 --n 6 --tq 0").code, 3);
    EXPECT_EQ(run("schedule --task 1,5 --n 6 --tq x").code, 3);
    EXPECT_EQ(run("schedule --task 1,5 --n 4").code, 3);
    EXPECT_EQ(run("schedule --task 3,3 --n 4").code, 3);
    EXPECT_EQ(run("schedule --task 1,5 --mode fastest").code, 3);
    EXPECT_EQ(run("schedule --task 1,5 --unknown").code, 3);
    EXPECT_EQ(run("nonsense").code, 3);
    auto bad = dir_ / "bad.json";
    std::ofstream(bad) << R"({"task": "1,5", "colour": "blue"})";
    EXPECT_EQ(run("schedule --config " + bad.string()).code, 3);
}

TEST_F(Cli, ConfigFileSuppliesDefaultsAndFlagsOverride) {
    auto cfg = dir_ / "cfg.json";
    std::ofstream(cfg) << R"({"task": [1, 5], "n": 6, "t_q": "5", "mode": "sequential"})";
    auto from_file = run("schedule --config " + cfg.string());
    EXPECT_EQ(from_file.code, 0);
    EXPECT_NE(from_file.err.find("T*=4"), std::string::npos) << from_file.err;
    auto overridden = run("schedule --config " + cfg.string() + " --mode parallel");
    EXPECT_NE(overridden.err.find("T*=3"), std::string::npos) << overridden.err;
}

TEST_F(Cli, SweepsAreByteStable) {
    auto a = run("sweep-tq --distances 2..9 --threads 1");
    auto b = run("sweep-tq --distances 2..9 --threads 3");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.substr(0, a.out.find('\n')),
              "D,t_q,t_star_inner,t_star_outer,t_star_total,lower_bound,upper_bound,mode");
    auto c = run("sweep-distance --distances 2..6 --tqs 1,5,inf --config " + fixture("sweep_config.json"));
    EXPECT_EQ(c.code, 0);
    EXPECT_NE(c.out.find("\n4,5,3,2,3,3,4,parallel\n"), std::string::npos) << c.out;
}

TEST_F(Cli, SweepGnuplotAndJson) {
    auto csv = (dir_ / "d.csv").string(), gp = (dir_ / "d.gp").string();
    EXPECT_EQ(run("sweep-distance --distances 2..5 --tqs 1,2 -o " + csv + " --gnuplot " + gp).code, 0);
    EXPECT_TRUE(fs::exists(gp));
    auto j = run("sweep-tq --distances 3 --format json");
    EXPECT_EQ(j.code, 0);
    EXPECT_EQ(j.out.front(), '[');
    EXPECT_EQ(run("sweep-tq --distances 5..2").code, 3);
    EXPECT_EQ(run("sweep-tq --distances 3 --format xml").code, 3);
}

}  // namespace
