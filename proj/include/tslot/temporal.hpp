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

// Time-division layer: slot model, feedforward and adjacency constraints,
// breakpoint analysis, and schedule validation. Quantum slots have length t_q
// in units of the classical (single-hop) slot. The classical topology is the
// line aligned with the resource state, so hop counts are |i - s|.

#include "tslot/graph.hpp"
#include "tslot/graph_state.hpp"
#include "tslot/rational.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tslot {

using Slot = std::int64_t;

struct SlotModel {
    Rational t_q{1};

    explicit SlotModel(Rational tq = Rational(1)) : t_q(tq) {
        if (t_q <= Rational(0)) {
            throw std::invalid_argument("t_q must be positive, got " + to_string(t_q));
        }
    }

    void require_scheduling_regime() const {
        if (t_q < Rational(1)) {
            throw std::invalid_argument("scheduling requires t_q >= 1, got " + to_string(t_q));
        }
    }
};

/// Request for an EPR pair; `source` initiates and sends the feedforward.
struct Task {
    NodeId source = 0;
    NodeId receiver = 0;

    Task() = default;
    Task(NodeId s, NodeId r) : source(s), receiver(r) {
        if (s == r) {
            throw std::invalid_argument("task endpoints must differ");
        }
    }

    /// r - s for the normalized (s < r) orientation.
    std::int64_t distance() const {
        return source < receiver ? std::int64_t(receiver) - source : std::int64_t(source) - receiver;
    }

    /// +1 if the receiver has the larger id.
    int direction() const {
        return receiver > source ? 1 : -1;
    }

    /// Nodes strictly between s and r, nearest to s first.
    std::vector<NodeId> inner_nodes() const {
        std::vector<NodeId> out;
        for (std::int64_t i = 1; i < distance(); i++) {
            out.push_back(static_cast<NodeId>(std::int64_t(source) + direction() * i));
        }
        return out;
    }

    bool is_end(NodeId a) const {
        return a == source || a == receiver;
    }

    bool operator==(const Task &) const = default;
};

struct Assignment {
    Slot slot = 1;
    Pauli basis = Pauli::I;

    bool operator==(const Assignment &) const = default;
};

/// Per-node (slot, logical basis). Basis I means the node does not measure.
struct Schedule {
    std::map<NodeId, Assignment> assignments;

    void assign(NodeId node, Slot slot, Pauli basis) {
        assignments[node] = Assignment{slot, basis};
    }

    std::vector<NodeId> measuring_nodes() const {
        std::vector<NodeId> out;
        for (const auto &[node, a] : assignments) {
            if (a.basis != Pauli::I) {
                out.push_back(node);
            }
        }
        return out;
    }

    /// Measuring nodes grouped by slot, ascending.
    std::map<Slot, std::vector<NodeId>> by_slot() const {
        std::map<Slot, std::vector<NodeId>> out;
        for (const auto &[node, a] : assignments) {
            if (a.basis != Pauli::I) {
                out[a.slot].push_back(node);
            }
        }
        return out;
    }

    /// Largest slot used by a measuring node; 0 if nothing measures.
    Slot last_slot() const {
        Slot best = 0;
        for (const auto &[node, a] : assignments) {
            if (a.basis != Pauli::I) {
                best = std::max(best, a.slot);
            }
        }
        return best;
    }

    bool operator==(const Schedule &) const = default;
};

enum class ViolationKind { Feedforward, Adjacency };

struct Violation {
    ViolationKind kind;
    std::vector<NodeId> nodes;
    Slot slot;
    std::string detail;
};

inline std::ostream &operator<<(std::ostream &out, const Violation &v) {
    out << (v.kind == ViolationKind::Feedforward ? "feedforward" : "adjacency") << " violation in slot " << v.slot
        << ": " << v.detail;
    return out;
}

/// Hops between the source and `node` on the line.
inline std::int64_t hop_distance(const Task &task, NodeId node) {
    return node > task.source ? std::int64_t(node) - task.source : std::int64_t(task.source) - node;
}

/// First slot by whose start the feedforward has reached `node`:
/// ceil(d / t_q) + 1.
inline Slot earliest_slot(const Task &task, NodeId node, const SlotModel &model) {
    return ceil(Rational(hop_distance(task, node)) / model.t_q) + 1;
}

/// Element of the breakpoint set; the last one is +infinity.
struct Breakpoint {
    Rational value{0};
    bool infinite = false;

    bool operator==(const Breakpoint &) const = default;
    bool operator<(const Breakpoint &o) const {
        if (infinite != o.infinite) {
            return o.infinite;
        }
        return !infinite && value < o.value;
    }
};

inline std::string to_string(const Breakpoint &b) {
    return b.infinite ? std::string("inf") : to_string(b.value);
}

/// Sorted union over measuring nodes of {d/k : 1 <= k <= d}, plus +infinity.
/// earliest_slot is constant on every [b_i, b_{i+1}) for t_q >= 1.
inline std::vector<Breakpoint> breakpoints(const Task &task, const std::vector<NodeId> &measuring_nodes) {
    if (measuring_nodes.empty()) {
        throw std::invalid_argument("breakpoints: no measuring nodes");
    }
    std::set<Rational> values;
    for (auto node : measuring_nodes) {
        auto d = hop_distance(task, node);
        if (d < 1) {
            throw std::invalid_argument("breakpoints: node " + std::to_string(node) + " is the source");
        }
        for (std::int64_t k = 1; k <= d; k++) {
            values.insert(Rational(d, k));
        }
    }
    std::vector<Breakpoint> out;
    for (const auto &v : values) {
        out.push_back(Breakpoint{v, false});
    }
    out.push_back(Breakpoint{Rational(0), true});
    return out;
}

/// Structural checks: slots >= 1, bases in {I, Z, Y}, end nodes idle.
inline void require_well_formed(const Schedule &sched, const Task &task) {
    for (const auto &[node, a] : sched.assignments) {
        if (a.slot < 1) {
            throw std::invalid_argument("node " + std::to_string(node) + " has slot " + std::to_string(a.slot) +
                                        " (slots start at 1)");
        }
        if (a.basis == Pauli::X) {
            throw std::invalid_argument("X-basis measurements are not schedulable (node " + std::to_string(node) +
                                        ")");
        }
        if (task.is_end(node) && a.basis != Pauli::I) {
            throw std::invalid_argument("end node " + std::to_string(node) + " must not measure");
        }
    }
}

inline std::vector<Violation> check_feedforward(const Schedule &sched, const Task &task, const SlotModel &model) {
    std::vector<Violation> out;
    for (const auto &[node, a] : sched.assignments) {
        if (a.basis == Pauli::I) {
            continue;
        }
        auto need = earliest_slot(task, node, model);
        if (a.slot < need) {
            out.push_back(Violation{ViolationKind::Feedforward,
                                    {node},
                                    a.slot,
                                    "node " + std::to_string(node) + " measures in slot " + std::to_string(a.slot) +
                                        " but feedforward only allows slot >= " + std::to_string(need)});
        }
    }
    return out;
}

/// Replays slots in order. Each slot's measuring set must be independent in
/// the graph as it stands at the slot's start; then all of the slot's graph
/// rules are applied.
inline std::vector<Violation> check_adjacency(const Schedule &sched, const Task &task, const Graph &g0) {
    require_well_formed(sched, task);
    std::vector<Violation> out;
    Graph g = g0;
    for (const auto &[slot, nodes] : sched.by_slot()) {
        for (auto a : nodes) {
            if (!g.is_alive(a)) {
                throw std::invalid_argument("node " + std::to_string(a) + " measured in slot " +
                                            std::to_string(slot) + " is not part of the graph");
            }
        }
        for (std::size_t i = 0; i < nodes.size(); i++) {
            for (std::size_t j = i + 1; j < nodes.size(); j++) {
                if (g.has_edge(nodes[i], nodes[j])) {
                    out.push_back(Violation{ViolationKind::Adjacency,
                                            {nodes[i], nodes[j]},
                                            slot,
                                            "nodes " + std::to_string(nodes[i]) + " and " + std::to_string(nodes[j]) +
                                                " are adjacent at the start of slot " + std::to_string(slot)});
                }
            }
        }
        for (auto a : nodes) {
            g = measure_graph(g, a, sched.assignments.at(a).basis, Outcome::Plus).graph;
        }
    }
    return out;
}

/// Empty iff the schedule is causality-preserving.
inline std::vector<Violation> validate(const Schedule &sched, const Task &task, const Graph &g0,
                                       const SlotModel &model) {
    auto out = check_feedforward(sched, task, model);
    auto adj = check_adjacency(sched, task, g0);
    out.insert(out.end(), adj.begin(), adj.end());
    return out;
}

inline std::string basis_name(Pauli p) {
    switch (p) {
        case Pauli::I:
            return "I";
        case Pauli::X:
            return "X";
        case Pauli::Y:
            return "Y";
        case Pauli::Z:
            return "Z";
    }
    return "?";
}

inline Pauli parse_basis(const std::string &s) {
    if (s == "I") {
        return Pauli::I;
    }
    if (s == "Z") {
        return Pauli::Z;
    }
    if (s == "Y") {
        return Pauli::Y;
    }
    if (s == "X") {
        return Pauli::X;
    }
    throw std::invalid_argument("unknown basis '" + s + "'");
}

/// A schedule together with the task and slot model it was built for.
struct ScheduleFile {
    Task task;
    SlotModel model;
    Schedule schedule;
};

inline nlohmann::ordered_json schedule_to_json(const ScheduleFile &f) {
    nlohmann::ordered_json j;
    j["task"] = {f.task.source, f.task.receiver};
    j["t_q"] = to_string(f.model.t_q);
    auto rows = nlohmann::ordered_json::array();
    for (const auto &[node, a] : f.schedule.assignments) {
        nlohmann::ordered_json row;
        row["node"] = node;
        row["slot"] = a.slot;
        row["basis"] = basis_name(a.basis);
        rows.push_back(std::move(row));
    }
    j["assignments"] = std::move(rows);
    return j;
}

inline std::string schedule_to_string(const ScheduleFile &f) {
    return schedule_to_json(f).dump(2) + "\n";
}

inline ScheduleFile schedule_from_json(const nlohmann::json &j) {
    for (const auto &[key, _] : j.items()) {
        if (key != "task" && key != "t_q" && key != "assignments") {
            throw std::invalid_argument("unknown schedule key '" + key + "'");
        }
    }
    const auto &t = j.at("task");
    if (!t.is_array() || t.size() != 2) {
        throw std::invalid_argument("task must be [s, r]");
    }
    ScheduleFile f{Task(t[0].get<NodeId>(), t[1].get<NodeId>()),
                   SlotModel(parse_rational(j.at("t_q").get<std::string>())), {}};
    for (const auto &row : j.at("assignments")) {
        for (const auto &[key, _] : row.items()) {
            if (key != "node" && key != "slot" && key != "basis") {
                throw std::invalid_argument("unknown assignment key '" + key + "'");
            }
        }
        auto node = row.at("node").get<NodeId>();
        if (f.schedule.assignments.count(node)) {
            throw std::invalid_argument("node " + std::to_string(node) + " assigned twice");
        }
        f.schedule.assign(node, row.at("slot").get<Slot>(), parse_basis(row.at("basis").get<std::string>()));
    }
    require_well_formed(f.schedule, f.task);
    return f;
}

inline ScheduleFile schedule_from_string(const std::string &text) {
    return schedule_from_json(nlohmann::json::parse(text));
}

}  // namespace tslot
