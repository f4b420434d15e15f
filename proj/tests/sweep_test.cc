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

#include "tslot/sweep.hpp"

#include "sweep_properties.hpp"

#include <gtest/gtest.h>

namespace tslot {
namespace {

const Breakpoint INF{Rational(0), true};

Breakpoint at(std::int64_t v) {
    return Breakpoint{Rational(v), false};
}

TEST(Sweep, WorkedExampleRow) {
    // D = 4 with both outer neighbors and T_q = 5: three slots in total.
    auto rows = sweep_distance({4}, {at(5)}, SweepMode::Parallel, 1);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].inner, 3);
    EXPECT_EQ(rows[0].outer, 2);
    EXPECT_EQ(rows[0].total, 3);
    EXPECT_EQ(rows[0].lower_bound, 3);
    EXPECT_EQ(rows[0].upper_bound, 4);
}

TEST(Sweep, CsvLayout) {
    auto rows = sweep_distance({1, 2}, {at(1), INF}, SweepMode::Sequential, 1);
    auto csv = sweep_to_csv(rows);
    EXPECT_EQ(csv,
              "D,t_q,t_star_inner,t_star_outer,t_star_total,lower_bound,upper_bound,mode\n"
              "1,1,0,3,3,,,sequential\n"
              "2,1,2,4,4,2,2,sequential\n"
              "1,inf,0,2,2,,,sequential\n"
              "2,inf,2,2,2,2,2,sequential\n");
}

TEST(Sweep, OutputIndependentOfThreadCount) {
    auto one = sweep_to_csv(sweep_tq({2, 3, 5, 8, 13}, {Rational(7, 3)}, SweepMode::Parallel, 1));
    auto many = sweep_to_csv(sweep_tq({2, 3, 5, 8, 13}, {Rational(7, 3)}, SweepMode::Parallel, 4));
    EXPECT_EQ(one, many);
    EXPECT_EQ(one, sweep_to_csv(sweep_tq({2, 3, 5, 8, 13}, {Rational(7, 3)}, SweepMode::Parallel, 3)));
}

TEST(Sweep, UnitSlotColumnEqualsDistance) {
    std::vector<std::int64_t> ds;
    for (std::int64_t d = 2; d <= 20; d++) {
        ds.push_back(d);
    }
    for (auto mode : {SweepMode::Sequential, SweepMode::Parallel}) {
        for (const auto &r : sweep_distance(ds, {at(1)}, mode, 2)) {
            EXPECT_EQ(r.inner, r.distance);
        }
    }
}

TEST(Sweep, InfiniteColumnHitsLowerBound) {
    std::vector<std::int64_t> ds;
    for (std::int64_t d = 2; d <= 20; d++) {
        ds.push_back(d);
    }
    for (const auto &r : sweep_distance(ds, {INF}, SweepMode::Parallel, 2)) {
        EXPECT_EQ(r.inner, *r.lower_bound) << "D=" << r.distance;
    }
}

TEST(Sweep, TqCurveEndsAtAsymptote) {
    auto rows = sweep_tq({5}, {}, SweepMode::Parallel, 1);
    EXPECT_TRUE(rows.back().t_q.infinite);
    EXPECT_EQ(rows.back().inner, 4);
    EXPECT_EQ(rows.front().t_q, at(1));
    EXPECT_EQ(rows.front().inner, 5);
}

TEST(Sweep, ShapeProperties) {
    std::vector<std::int64_t> ds;
    for (std::int64_t d = 2; d <= 16; d++) {
        ds.push_back(d);
    }
    for (auto mode : {SweepMode::Sequential, SweepMode::Parallel}) {
        auto by_tq = sweep_tq(ds, {}, mode, 2);
        EXPECT_EQ(testing::check_non_increasing_in_tq(by_tq), "");
        EXPECT_EQ(testing::check_ordered_by_distance(by_tq), "");
        EXPECT_EQ(testing::check_anchor_regimes(by_tq), "");
        auto by_d = sweep_distance(ds, {at(1), at(2), at(3), at(5), INF}, mode, 2);
        EXPECT_EQ(testing::check_monotone_in_distance(by_d), "");
        EXPECT_EQ(testing::check_anchor_regimes(by_d), "");
    }
}

TEST(Sweep, ParallelNeverWorseThanSequential) {
    std::vector<std::int64_t> ds;
    for (std::int64_t d = 2; d <= 12; d++) {
        ds.push_back(d);
    }
    auto seq = sweep_tq(ds, {}, SweepMode::Sequential, 2);
    auto par = sweep_tq(ds, {}, SweepMode::Parallel, 2);
    ASSERT_EQ(seq.size(), par.size());
    for (std::size_t i = 0; i < seq.size(); i++) {
        EXPECT_LE(par[i].total, seq[i].total);
    }
}

TEST(Sweep, RejectsEmptyInput) {
    EXPECT_THROW(sweep_distance({}, {at(1)}, SweepMode::Parallel), std::invalid_argument);
    EXPECT_THROW(sweep_distance({3}, {}, SweepMode::Parallel), std::invalid_argument);
    EXPECT_THROW(sweep_tq({}, {}, SweepMode::Parallel), std::invalid_argument);
    EXPECT_THROW(sweep_tq({0}, {}, SweepMode::Parallel), std::invalid_argument);
}

TEST(Sweep, JsonAndGnuplot) {
    auto rows = sweep_distance({3}, {at(2)}, SweepMode::Parallel, 1);
    auto j = nlohmann::json::parse(sweep_to_json(rows));
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0]["t_q"], "2");
    EXPECT_EQ(j[0]["mode"], "parallel");
    EXPECT_NE(gnuplot_script("out.csv", true).find("plot for"), std::string::npos);
    EXPECT_NE(gnuplot_script("out.csv", false).find("frac("), std::string::npos);
}

}  // namespace
}  // namespace tslot
