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

// Simple undirected graphs over stable node ids. Deleting a node only clears
// its edges and marks it dead, so ids never shift underneath a schedule.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tslot {

using NodeId = std::uint32_t;

class Graph {
   public:
    Graph() = default;

    /// n nodes, all alive, no edges.
    explicit Graph(std::size_t n) : n_(n), adj_(n * n, 0), alive_(n, 1) {
    }

    std::size_t size() const {
        return n_;
    }

    bool is_alive(NodeId a) const {
        return a < n_ && alive_[a] != 0;
    }

    bool has_edge(NodeId a, NodeId b) const {
        return a < n_ && b < n_ && adj_[a * n_ + b] != 0;
    }

    void add_edge(NodeId a, NodeId b) {
        require_alive(a);
        require_alive(b);
        if (a == b) {
            throw std::invalid_argument("self-loop at node " + std::to_string(a));
        }
        set(a, b, true);
    }

    void remove_edge(NodeId a, NodeId b) {
        if (a < n_ && b < n_) {
            set(a, b, false);
        }
    }

    void toggle_edge(NodeId a, NodeId b) {
        set(a, b, !has_edge(a, b));
    }

    /// Removes a and every edge incident to it. The id stays reserved.
    void remove_node(NodeId a) {
        require_alive(a);
        for (NodeId b = 0; b < n_; b++) {
            set(a, b, false);
        }
        alive_[a] = 0;
    }

    std::vector<NodeId> neighbors(NodeId a) const {
        std::vector<NodeId> out;
        if (a >= n_) {
            return out;
        }
        for (NodeId b = 0; b < n_; b++) {
            if (adj_[a * n_ + b]) {
                out.push_back(b);
            }
        }
        return out;
    }

    std::size_t degree(NodeId a) const {
        return neighbors(a).size();
    }

    std::vector<NodeId> alive_nodes() const {
        std::vector<NodeId> out;
        for (NodeId a = 0; a < n_; a++) {
            if (alive_[a]) {
                out.push_back(a);
            }
        }
        return out;
    }

    std::vector<std::pair<NodeId, NodeId>> edges() const {
        std::vector<std::pair<NodeId, NodeId>> out;
        for (NodeId a = 0; a < n_; a++) {
            for (NodeId b = a + 1; b < n_; b++) {
                if (adj_[a * n_ + b]) {
                    out.emplace_back(a, b);
                }
            }
        }
        return out;
    }

    void require_alive(NodeId a) const {
        if (a >= n_) {
            throw std::out_of_range("node " + std::to_string(a) + " out of range (n=" + std::to_string(n_) + ")");
        }
        if (!alive_[a]) {
            throw std::invalid_argument("node " + std::to_string(a) + " has already been removed");
        }
    }

    bool operator==(const Graph &other) const = default;

   private:
    void set(NodeId a, NodeId b, bool on) {
        adj_[a * n_ + b] = on ? 1 : 0;
        adj_[b * n_ + a] = on ? 1 : 0;
    }

    std::size_t n_ = 0;
    std::vector<std::uint8_t> adj_;
    std::vector<std::uint8_t> alive_;
};

/// Path first - (first+1) - ... - last. Ids below `first` exist but are dead,
/// which lets a line network use the 1-based numbering of its nodes directly.
inline Graph path_graph(NodeId first, NodeId last) {
    if (last < first) {
        throw std::invalid_argument("path_graph: last < first");
    }
    Graph g(last + 1);
    for (NodeId a = 0; a < first; a++) {
        g.remove_node(a);
    }
    for (NodeId a = first; a < last; a++) {
        g.add_edge(a, a + 1);
    }
    return g;
}

/// Line network of n nodes numbered 1..n (id 0 is dead).
inline Graph line_network(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("line network needs at least one node");
    }
    return path_graph(1, static_cast<NodeId>(n));
}

/// Complements the edge set inside N(a). Other edges are untouched.
inline Graph local_complement(const Graph &g, NodeId a) {
    g.require_alive(a);
    Graph out = g;
    auto nb = g.neighbors(a);
    for (std::size_t i = 0; i < nb.size(); i++) {
        for (std::size_t j = i + 1; j < nb.size(); j++) {
            out.toggle_edge(nb[i], nb[j]);
        }
    }
    return out;
}

inline std::ostream &operator<<(std::ostream &out, const Graph &g) {
    out << "Graph(n=" << g.size() << ", edges={";
    bool first = true;
    for (auto [a, b] : g.edges()) {
        if (!first) {
            out << ", ";
        }
        first = false;
        out << a << "-" << b;
    }
    return out << "})";
}

// {"n": int, "edges": [[a,b],...]} plus an optional "removed" id list.
inline nlohmann::json graph_to_json(const Graph &g) {
    nlohmann::ordered_json j;
    j["n"] = g.size();
    auto edges = nlohmann::ordered_json::array();
    for (auto [a, b] : g.edges()) {
        edges.push_back({a, b});
    }
    j["edges"] = std::move(edges);
    std::vector<NodeId> removed;
    for (NodeId a = 0; a < g.size(); a++) {
        if (!g.is_alive(a)) {
            removed.push_back(a);
        }
    }
    if (!removed.empty()) {
        j["removed"] = removed;
    }
    return j;
}

inline Graph graph_from_json(const nlohmann::json &j) {
    for (const auto &[key, _] : j.items()) {
        if (key != "n" && key != "edges" && key != "removed") {
            throw std::invalid_argument("unknown graph key '" + key + "'");
        }
    }
    auto n = j.at("n").get<std::size_t>();
    Graph g(n);
    for (const auto &e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) {
            throw std::invalid_argument("edge must be a pair [a,b]");
        }
        g.add_edge(e[0].get<NodeId>(), e[1].get<NodeId>());
    }
    if (j.contains("removed")) {
        for (const auto &a : j["removed"]) {
            g.remove_node(a.get<NodeId>());
        }
    }
    return g;
}

}  // namespace tslot
