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

#pragma once

// Parameter sweeps over distance and quantum-slot length.
//
// Each point is a task on a line with both outer neighbors present:
// s = 2, r = 2 + D, n = D + 3. By default T_q runs over the task's
// breakpoints, since T* is constant between consecutive ones. The infinite
// breakpoint is evaluated at T_q = D + 1, where every node is eligible in
// the first round.

#include "tslot/graph.hpp"
#include "tslot/rational.hpp"
#include "tslot/scheduler.hpp"
#include "tslot/temporal.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace tslot {

enum class SweepMode { Sequential, Parallel };

inline std::string sweep_mode_name(SweepMode m) {
    return m == SweepMode::Sequential ? "sequential" : "parallel";
}

struct SweepPoint {
    std::int64_t distance = 0;
    Breakpoint t_q;
};

struct SweepRow {
    std::int64_t distance = 0;
    Breakpoint t_q;
    Slot inner = 0;
    Slot outer = 0;
    Slot total = 0;
    std::optional<Slot> lower_bound;
    std::optional<Slot> upper_bound;
    SweepMode mode = SweepMode::Parallel;
};

inline Task sweep_task(std::int64_t distance) {
    if (distance < 1) {
        throw std::invalid_argument("sweep distance must be >= 1");
    }
    return Task(2, NodeId(2 + distance));
}

inline Graph sweep_network(std::int64_t distance) {
    return line_network(std::size_t(distance + 3));
}

/// T_q used to evaluate a breakpoint; +infinity maps to a finite stand-in.
inline Rational effective_tq(const Breakpoint &b, std::int64_t distance) {
    return b.infinite ? Rational(distance + 1) : b.value;
}

/// Breakpoints of the full task (inner and outer nodes).
inline std::vector<Breakpoint> sweep_breakpoints(std::int64_t distance) {
    auto task = sweep_task(distance);
    auto layout = task_layout(task, sweep_network(distance));
    std::vector<NodeId> measuring = layout.inner;
    measuring.insert(measuring.end(), layout.outer.begin(), layout.outer.end());
    return breakpoints(task, measuring);
}

inline SweepRow evaluate_point(const SweepPoint &p, SweepMode mode) {
    auto task = sweep_task(p.distance);
    auto g0 = sweep_network(p.distance);
    SlotModel model{effective_tq(p.t_q, p.distance)};
    auto res = mode == SweepMode::Sequential ? sequential_schedule(task, g0, model) : parallel_schedule(task, g0, model);
    auto violations = validate(res.schedule, task, g0, model);
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << "sweep produced an invalid schedule at D=" << p.distance << " t_q=" << to_string(p.t_q) << ": "
            << violations.front();
        throw std::logic_error(msg.str());
    }
    SweepRow row;
    row.distance = p.distance;
    row.t_q = p.t_q;
    row.inner = res.inner_slots;
    row.outer = res.outer_slots.value_or(0);
    row.total = res.t_star;
    if (p.distance >= 2) {
        auto [lo, hi] = tstar_bounds(task);
        row.lower_bound = lo;
        row.upper_bound = hi;
    }
    row.mode = mode;
    return row;
}

/// Evaluates every point on `threads` workers; rows come back in input order.
inline std::vector<SweepRow> run_sweep(const std::vector<SweepPoint> &points, SweepMode mode, unsigned threads = 0) {
    if (points.empty()) {
        throw std::invalid_argument("sweep has no points");
    }
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, unsigned(points.size()));
    std::vector<SweepRow> rows(points.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                rows[i] = evaluate_point(points[i], mode);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; t++) {
        pool.emplace_back(work);
    }
    work();
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return rows;
}

/// T* against D, one curve per T_q.
inline std::vector<SweepRow> sweep_distance(const std::vector<std::int64_t> &distances,
                                            const std::vector<Breakpoint> &tqs, SweepMode mode, unsigned threads = 0) {
    if (distances.empty() || tqs.empty()) {
        throw std::invalid_argument("sweep-distance needs at least one distance and one t_q");
    }
    std::vector<SweepPoint> points;
    for (const auto &tq : tqs) {
        for (auto d : distances) {
            points.push_back(SweepPoint{d, tq});
        }
    }
    return run_sweep(points, mode, threads);
}

/// T* against T_q, one curve per D. Each curve covers the task's breakpoints
/// plus any extra values, sorted and de-duplicated.
inline std::vector<SweepRow> sweep_tq(const std::vector<std::int64_t> &distances, const std::vector<Rational> &extra,
                                      SweepMode mode, unsigned threads = 0) {
    if (distances.empty()) {
        throw std::invalid_argument("sweep-tq needs at least one distance");
    }
    std::vector<SweepPoint> points;
    for (auto d : distances) {
        auto grid = sweep_breakpoints(d);
        for (const auto &x : extra) {
            grid.push_back(Breakpoint{x, false});
        }
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        for (const auto &b : grid) {
            points.push_back(SweepPoint{d, b});
        }
    }
    return run_sweep(points, mode, threads);
}

inline const char *SWEEP_CSV_HEADER = "D,t_q,t_star_inner,t_star_outer,t_star_total,lower_bound,upper_bound,mode";

inline std::string sweep_to_csv(const std::vector<SweepRow> &rows) {
    std::ostringstream out;
    out << SWEEP_CSV_HEADER << '\n';
    auto opt = [](const std::optional<Slot> &v) { return v ? std::to_string(*v) : std::string(); };
    for (const auto &r : rows) {
        out << r.distance << ',' << to_string(r.t_q) << ',' << r.inner << ',' << r.outer << ',' << r.total << ','
            << opt(r.lower_bound) << ',' << opt(r.upper_bound) << ',' << sweep_mode_name(r.mode) << '\n';
    }
    return out.str();
}

inline std::string sweep_to_json(const std::vector<SweepRow> &rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto &r : rows) {
        nlohmann::ordered_json j;
        j["D"] = r.distance;
        j["t_q"] = to_string(r.t_q);
        j["t_star_inner"] = r.inner;
        j["t_star_outer"] = r.outer;
        j["t_star_total"] = r.total;
        j["lower_bound"] = r.lower_bound ? nlohmann::ordered_json(*r.lower_bound) : nlohmann::ordered_json();
        j["upper_bound"] = r.upper_bound ? nlohmann::ordered_json(*r.upper_bound) : nlohmann::ordered_json();
        j["mode"] = sweep_mode_name(r.mode);
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

/// Gnuplot script that plots a CSV written by sweep_to_csv. `by_distance`
/// picks the x axis: D (one curve per T_q) or T_q (one curve per D).
inline std::string gnuplot_script(const std::string &csv_path, bool by_distance) {
    std::ostringstream out;
    out << "set datafile separator ','\n"
        << "set key left top\n"
        << "set ylabel 'T*'\n";
    if (by_distance) {
        out << "set xlabel 'D'\n"
            << "curves = system(\"tail -n +2 '" << csv_path << "' | cut -d, -f2 | sort -u\")\n"
            << "plot for [q in curves] '" << csv_path
            << "' using (strcol(2) eq q ? $1 : 1/0):5 with linespoints title 'T_q='.q\n";
    } else {
        out << "set xlabel 'T_q'\n"
            << "set logscale x\n"
            << "frac(s) = strstrt(s, '/') ? real(s[1:strstrt(s, '/') - 1]) / real(s[strstrt(s, '/') + 1:]) : real(s)\n"
            << "curves = system(\"tail -n +2 '" << csv_path << "' | cut -d, -f1 | sort -un\")\n"
            << "plot for [d in curves] '" << csv_path
            << "' using ($1 == d + 0 && strcol(2) ne 'inf' ? frac(strcol(2)) : 1/0):5"
            << " with steps title 'D='.d\n";
    }
    return out.str();
}

}  // namespace tslot
