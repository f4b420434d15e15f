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

// Graph-level effect of single-qubit Pauli measurements on graph states, the
// correction operations (COs) each one leaves behind, and the Pauli frame used
// to postpone those corrections to the end of a protocol.

#include "tslot/graph.hpp"
#include "tslot/stabilizer.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tslot {

/// The COs owed after measuring `measured` in `basis` with result `outcome`.
/// For Z and Y every op is diagonal; X leaves a sqrt(+-iY) on the special
/// neighbor.
struct CorrectionSpec {
    Pauli basis = Pauli::Z;
    Outcome outcome = Outcome::Plus;
    NodeId measured = 0;
    std::optional<NodeId> special_neighbor;
    std::map<NodeId, CliffordOp> targets;

    /// Applies every target op to a state.
    void apply_to(StabTableau &t) const {
        for (const auto &[node, op] : targets) {
            t.apply(node, op);
        }
    }
};

struct MeasuredGraph {
    Graph graph;
    CorrectionSpec correction;
};

/// Z measurement deletes the vertex; a -1 result owes Z on every neighbor.
inline MeasuredGraph measure_Z(const Graph &g, NodeId a, Outcome outcome) {
    g.require_alive(a);
    MeasuredGraph out{g, {Pauli::Z, outcome, a, std::nullopt, {}}};
    if (outcome == Outcome::Minus) {
        for (auto b : g.neighbors(a)) {
            out.correction.targets[b] = CliffordOp::Z;
        }
    }
    out.graph.remove_node(a);
    return out;
}

/// Y measurement complements the neighborhood of a, then deletes a.
inline MeasuredGraph measure_Y(const Graph &g, NodeId a, Outcome outcome) {
    auto nb = g.neighbors(a);  // also checks a is alive via local_complement
    MeasuredGraph out{local_complement(g, a), {Pauli::Y, outcome, a, std::nullopt, {}}};
    auto op = outcome == Outcome::Plus ? CliffordOp::S : CliffordOp::S_dag;
    for (auto b : nb) {
        out.correction.targets[b] = op;
    }
    out.graph.remove_node(a);
    return out;
}

/// X measurement with special neighbor b: tau_b(tau_a(tau_b(g)) - a).
inline MeasuredGraph measure_X(const Graph &g, NodeId a, NodeId b, Outcome outcome) {
    g.require_alive(a);
    auto na = g.neighbors(a);
    if (na.empty()) {
        throw std::invalid_argument("X measurement of isolated node " + std::to_string(a) + " has no special neighbor");
    }
    if (!g.has_edge(a, b)) {
        throw std::invalid_argument("node " + std::to_string(b) + " is not a neighbor of " + std::to_string(a));
    }
    auto nb = g.neighbors(b);
    auto contains = [](const std::vector<NodeId> &v, NodeId x) { return std::find(v.begin(), v.end(), x) != v.end(); };

    Graph h = local_complement(local_complement(g, b), a);
    h.remove_node(a);
    h = local_complement(h, b);

    MeasuredGraph out{std::move(h), {Pauli::X, outcome, a, b, {}}};
    auto &targets = out.correction.targets;
    if (outcome == Outcome::Plus) {
        targets[b] = CliffordOp::SqrtYNeg;
        for (auto c : na) {
            if (c != b && !contains(nb, c)) {
                targets[c] = CliffordOp::Z;
            }
        }
    } else {
        targets[b] = CliffordOp::SqrtYPos;
        for (auto c : nb) {
            if (c != a && !contains(na, c)) {
                targets[c] = CliffordOp::Z;
            }
        }
    }
    return out;
}

/// Dispatches Z/Y measurements; X needs a special neighbor and goes through
/// measure_X directly.
inline MeasuredGraph measure_graph(const Graph &g, NodeId a, Pauli basis, Outcome outcome) {
    switch (basis) {
        case Pauli::Z:
            return measure_Z(g, a, outcome);
        case Pauli::Y:
            return measure_Y(g, a, outcome);
        default:
            throw std::invalid_argument("measure_graph handles Z and Y only");
    }
}

/// Exponent of sqrt(iZ) contributed by a diagonal CO.
inline int frame_exponent(CliffordOp op) {
    switch (op) {
        case CliffordOp::I:
            return 0;
        case CliffordOp::S:
            return 1;
        case CliffordOp::Z:
            return 2;
        case CliffordOp::S_dag:
            return 3;
        default:
            throw std::invalid_argument("op " + std::string(clifford_name(op)) + " is not diagonal");
    }
}

inline CliffordOp frame_op(int exponent) {
    constexpr CliffordOp ops[4] = {CliffordOp::I, CliffordOp::S, CliffordOp::Z, CliffordOp::S_dag};
    return ops[((exponent % 4) + 4) % 4];
}

/// Postponed diagonal corrections: node a owes S^k[a] (S = sqrt(iZ)).
class PauliFrame {
   public:
    PauliFrame() = default;
    explicit PauliFrame(std::size_t n) : k_(n, 0) {
    }

    std::size_t size() const {
        return k_.size();
    }

    int exponent(NodeId a) const {
        return a < k_.size() ? k_[a] : 0;
    }

    void add(NodeId a, int delta) {
        if (a >= k_.size()) {
            k_.resize(a + 1, 0);
        }
        k_[a] = static_cast<std::uint8_t>((((k_[a] + delta) % 4) + 4) % 4);
    }

    /// Applies every owed correction to a state.
    void apply_to(StabTableau &t) const {
        for (NodeId a = 0; a < k_.size(); a++) {
            if (k_[a] != 0) {
                t.apply(a, frame_op(k_[a]));
            }
        }
    }

    bool operator==(const PauliFrame &other) const {
        std::size_t n = std::max(k_.size(), other.k_.size());
        for (NodeId a = 0; a < n; a++) {
            if (exponent(a) != other.exponent(a)) {
                return false;
            }
        }
        return true;
    }

   private:
    std::vector<std::uint8_t> k_;
};

inline PauliFrame accumulate(PauliFrame frame, const CorrectionSpec &spec) {
    if (spec.basis == Pauli::X) {
        throw std::invalid_argument("frame tracking does not support X-basis corrections");
    }
    for (const auto &[node, op] : spec.targets) {
        frame.add(node, frame_exponent(op));
    }
    return frame;
}

struct PhysicalBasis {
    Pauli basis;
    bool flip;

    bool operator==(const PhysicalBasis &) const = default;
};

/// What to measure physically so that, with the outcome negated when `flip`
/// is set, the result equals measuring `logical` after the owed S^k.
///   Z is unaffected by the diagonal frame.
///   Y cycles through S^-k Y S^k:  Y, -X, -Y, X.
inline PhysicalBasis physical_basis(Pauli logical, int k) {
    k = ((k % 4) + 4) % 4;
    if (logical == Pauli::Z) {
        return {Pauli::Z, false};
    }
    if (logical != Pauli::Y) {
        throw std::invalid_argument("physical_basis: logical basis must be Z or Y");
    }
    constexpr PhysicalBasis table[4] = {
        {Pauli::Y, false},
        {Pauli::X, true},
        {Pauli::Y, true},
        {Pauli::X, false},
    };
    return table[k];
}

inline Outcome logical_outcome(Outcome physical, bool flip) {
    return flip ? -physical : physical;
}

/// Replays a measurement sequence on the graph while keeping the frame,
/// translating between physical and logical bases/outcomes as it goes.
class FrameTracker {
   public:
    explicit FrameTracker(Graph g) : graph_(std::move(g)), frame_(graph_.size()) {
    }

    const Graph &graph() const {
        return graph_;
    }

    const PauliFrame &frame() const {
        return frame_;
    }

    PhysicalBasis physical(NodeId a, Pauli logical) const {
        return physical_basis(logical, frame_.exponent(a));
    }

    /// Records a physical result; returns the logical one.
    Outcome record_physical(NodeId a, Pauli logical, Outcome physical_result) {
        auto phys = physical(a, logical);
        Outcome result = logical_outcome(physical_result, phys.flip);
        record_logical(a, logical, result);
        return result;
    }

    void record_logical(NodeId a, Pauli logical, Outcome result) {
        auto step = measure_graph(graph_, a, logical, result);
        frame_ = accumulate(std::move(frame_), step.correction);
        graph_ = std::move(step.graph);
    }

    /// Graph update only, for measurements whose outcome is not needed here.
    void skip(NodeId a, Pauli logical) {
        graph_ = measure_graph(graph_, a, logical, Outcome::Plus).graph;
    }

   private:
    Graph graph_;
    PauliFrame frame_;
};

}  // namespace tslot
