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

// Schedules for EPR tasks on a 1D cluster: Z on the outer neighbors isolates
// the s..r segment, Y on every inner node fuses it into the edge (s, r).
//
// Three constructions live here: the one-measurement-per-slot sequential
// schedule, the round-based parallel schedule (each round takes the odd
// positions of the eligible-but-unassigned prefix), and an exhaustive search
// used as the optimality oracle for small instances.

#include "tslot/graph.hpp"
#include "tslot/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tslot {

struct ScheduleResult {
    Schedule schedule;
    /// Last slot used by any measuring node (0 if none measure).
    Slot t_star = 0;
    /// Last slot used by inner nodes (0 if there are none).
    Slot inner_slots = 0;
    /// Last slot used by outer neighbors, if any exist.
    std::optional<Slot> outer_slots;
};

/// Which nodes of g0 play which role for a task.
struct TaskLayout {
    std::vector<NodeId> inner;  // nearest to s first
    std::vector<NodeId> outer;  // alive neighbors of s or r outside the segment
    std::vector<NodeId> idle;   // everything else that is alive, ends included
};

inline TaskLayout task_layout(const Task &task, const Graph &g0) {
    g0.require_alive(task.source);
    g0.require_alive(task.receiver);
    TaskLayout out;
    out.inner = task.inner_nodes();
    NodeId prev = task.source;
    for (auto a : out.inner) {
        if (!g0.has_edge(prev, a)) {
            throw std::invalid_argument("resource graph is not a path between the task endpoints (missing edge " +
                                        std::to_string(prev) + "-" + std::to_string(a) + ")");
        }
        prev = a;
    }
    if (!g0.has_edge(prev, task.receiver)) {
        throw std::invalid_argument("resource graph is not a path between the task endpoints");
    }
    auto in_segment = [&](NodeId a) {
        return a == task.source || a == task.receiver ||
               std::find(out.inner.begin(), out.inner.end(), a) != out.inner.end();
    };
    for (auto end : {task.source, task.receiver}) {
        for (auto b : g0.neighbors(end)) {
            if (!in_segment(b) && std::find(out.outer.begin(), out.outer.end(), b) == out.outer.end()) {
                out.outer.push_back(b);
            }
        }
    }
    std::sort(out.outer.begin(), out.outer.end());
    for (auto a : g0.alive_nodes()) {
        if (!in_segment(a) || task.is_end(a)) {
            if (std::find(out.outer.begin(), out.outer.end(), a) == out.outer.end()) {
                out.idle.push_back(a);
            }
        }
    }
    return out;
}

/// Z-basis slots for the outer neighbors s-1 and r+1 that exist among the
/// line nodes 1..n, each at its earliest feedforward-legal slot.
inline std::map<NodeId, Slot> outer_slots(const Task &task, std::size_t n, const SlotModel &model) {
    std::map<NodeId, Slot> out;
    std::int64_t dir = task.direction();
    for (std::int64_t cand : {std::int64_t(task.source) - dir, std::int64_t(task.receiver) + dir}) {
        if (cand >= 1 && cand <= std::int64_t(n)) {
            out[NodeId(cand)] = earliest_slot(task, NodeId(cand), model);
        }
    }
    return out;
}

namespace detail {

inline ScheduleResult finish(Schedule sched, const TaskLayout &layout, const Task &task, const SlotModel &model) {
    ScheduleResult res;
    for (auto a : layout.outer) {
        Slot s = earliest_slot(task, a, model);
        sched.assign(a, s, Pauli::Z);
        res.outer_slots = std::max(res.outer_slots.value_or(0), s);
    }
    for (auto a : layout.idle) {
        sched.assign(a, 1, Pauli::I);
    }
    for (auto a : layout.inner) {
        res.inner_slots = std::max(res.inner_slots, sched.assignments.at(a).slot);
    }
    res.t_star = sched.last_slot();
    res.schedule = std::move(sched);
    return res;
}

}  // namespace detail

/// Inner node s+i measures alone in slot i+1. For t_q < 1 the slot is pushed
/// back to the feedforward bound when that is later.
inline ScheduleResult sequential_schedule(const Task &task, const Graph &g0, const SlotModel &model) {
    auto layout = task_layout(task, g0);
    Schedule sched;
    Slot i = 1;
    Slot prev = 1;
    for (auto a : layout.inner) {
        Slot s = std::max({i + 1, earliest_slot(task, a, model), prev + 1});
        sched.assign(a, s, Pauli::Y);
        prev = s;
        i++;
    }
    return detail::finish(std::move(sched), layout, task, model);
}

/// State of the parallel construction at the start of round k.
struct EligibleState {
    Slot k = 1;
    std::vector<NodeId> eligible;    // d_s(i) <= k t_q
    std::vector<NodeId> unassigned;  // eligible and not yet given a slot, nearest s first
};

/// Round-based parallel schedule. Round k looks at the eligible-yet-unassigned
/// inner nodes U_k (ordered from s) and gives slot k+1 to positions 1, 3, 5, ...
/// of U_k. `trace`, when given, receives the state of every round.
inline ScheduleResult parallel_schedule(const Task &task, const Graph &g0, const SlotModel &model,
                                        std::vector<EligibleState> *trace = nullptr) {
    model.require_scheduling_regime();
    auto layout = task_layout(task, g0);
    Schedule sched;
    std::vector<bool> done(layout.inner.size(), false);
    std::size_t remaining = layout.inner.size();
    for (Slot k = 1; remaining > 0; k++) {
        EligibleState st;
        st.k = k;
        for (std::size_t idx = 0; idx < layout.inner.size(); idx++) {
            auto a = layout.inner[idx];
            if (Rational(hop_distance(task, a)) <= Rational(k) * model.t_q) {
                st.eligible.push_back(a);
                if (!done[idx]) {
                    st.unassigned.push_back(a);
                }
            }
        }
        for (std::size_t pos = 0; pos < st.unassigned.size(); pos += 2) {
            auto a = st.unassigned[pos];
            sched.assign(a, k + 1, Pauli::Y);
            done[std::size_t(hop_distance(task, a) - 1)] = true;
            remaining--;
        }
        if (trace) {
            trace->push_back(std::move(st));
        }
    }
    return detail::finish(std::move(sched), layout, task, model);
}

/// [floor(log2(D-1)) + 2, D] for D = r - s >= 2.
inline std::pair<Slot, Slot> tstar_bounds(const Task &task) {
    auto d = task.distance();
    if (d < 2) {
        throw std::invalid_argument("tstar_bounds needs r - s >= 2");
    }
    Slot lg = 0;
    for (auto m = d - 1; m > 1; m >>= 1) {
        lg++;
    }
    return {lg + 2, d};
}

struct BruteForceResult {
    Slot t_star = 0;
    Schedule witness;
};

/// Exhaustive minimum over every causality-preserving schedule (Y on inner
/// nodes, Z on outer neighbors). Searches slot by slot: in each slot any
/// independent subset of the feedforward-eligible remaining nodes may
/// measure, including none. Iterative deepening on the last slot.
inline BruteForceResult brute_force_min_slots(const Task &task, const Graph &g0, const SlotModel &model,
                                              Slot slot_cap = 10) {
    auto layout = task_layout(task, g0);
    std::vector<std::pair<NodeId, Pauli>> nodes;
    for (auto a : layout.inner) {
        nodes.emplace_back(a, Pauli::Y);
    }
    for (auto a : layout.outer) {
        nodes.emplace_back(a, Pauli::Z);
    }
    if (nodes.size() > 8) {
        throw std::invalid_argument("brute force limited to 8 measuring nodes, got " + std::to_string(nodes.size()));
    }
    if (slot_cap > 10) {
        throw std::invalid_argument("brute force slot cap limited to 10");
    }
    auto finish = [&](Schedule sched, Slot t) {
        for (auto a : layout.idle) {
            sched.assign(a, 1, Pauli::I);
        }
        return BruteForceResult{t, std::move(sched)};
    };
    if (nodes.empty()) {
        return finish(Schedule{}, 0);
    }
    std::vector<Slot> earliest;
    for (auto &[a, _] : nodes) {
        earliest.push_back(earliest_slot(task, a, model));
    }
    const std::uint32_t all = (std::uint32_t{1} << nodes.size()) - 1;

    Schedule current;
    std::function<bool(Slot, Slot, const Graph &, std::uint32_t)> search =
        [&](Slot k, Slot limit, const Graph &g, std::uint32_t left) -> bool {
        if (left == 0) {
            return true;
        }
        if (k > limit) {
            return false;
        }
        std::uint32_t ready = 0;
        for (std::size_t i = 0; i < nodes.size(); i++) {
            if (((left >> i) & 1) && earliest[i] <= k) {
                ready |= std::uint32_t{1} << i;
            }
        }
        // Enumerate subsets of `ready`, largest masks first so witnesses tend
        // to be compact; correctness does not depend on the order.
        for (std::uint32_t sub = ready;; sub = (sub - 1) & ready) {
            bool independent = true;
            for (std::size_t i = 0; i < nodes.size() && independent; i++) {
                if (!((sub >> i) & 1)) {
                    continue;
                }
                for (std::size_t j = i + 1; j < nodes.size(); j++) {
                    if (((sub >> j) & 1) && g.has_edge(nodes[i].first, nodes[j].first)) {
                        independent = false;
                        break;
                    }
                }
            }
            if (independent) {
                Graph next = g;
                for (std::size_t i = 0; i < nodes.size(); i++) {
                    if ((sub >> i) & 1) {
                        next = measure_graph(next, nodes[i].first, nodes[i].second, Outcome::Plus).graph;
                        current.assign(nodes[i].first, k, nodes[i].second);
                    }
                }
                if (search(k + 1, limit, next, left & ~sub)) {
                    return true;
                }
                for (std::size_t i = 0; i < nodes.size(); i++) {
                    if ((sub >> i) & 1) {
                        current.assignments.erase(nodes[i].first);
                    }
                }
            }
            if (sub == 0) {
                break;
            }
        }
        return false;
    };

    Slot lower = *std::max_element(earliest.begin(), earliest.end());
    for (Slot limit = lower; limit <= slot_cap; limit++) {
        current = Schedule{};
        if (search(1, limit, g0, all)) {
            auto res = finish(current, limit);
            if (!validate(res.witness, task, g0, model).empty()) {
                throw std::logic_error("brute force produced an invalid witness");
            }
            return res;
        }
    }
    throw std::runtime_error("no valid schedule within " + std::to_string(slot_cap) + " slots");
}

}  // namespace tslot
