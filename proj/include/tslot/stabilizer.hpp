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

// Exact stabilizer-state simulation for up to 24 qubits.
//
// A state is held as n commuting, independent, signed Pauli generators. There
// is no destabilizer half: every query that would need one (deterministic
// measurement results, group comparison) goes through Gaussian elimination
// instead, which is cheap at this size. Global phase is never tracked.

#include "tslot/graph.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tslot {

inline constexpr std::size_t MAX_QUBITS = 24;

/// Single-qubit Pauli letter. Bit 0 is the X component, bit 1 the Z component.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

enum class Outcome : std::int8_t { Plus = 1, Minus = -1 };

inline Outcome operator-(Outcome o) {
    return o == Outcome::Plus ? Outcome::Minus : Outcome::Plus;
}

inline int to_int(Outcome o) {
    return static_cast<int>(o);
}

inline Outcome outcome_from_int(int v) {
    if (v == 1) {
        return Outcome::Plus;
    }
    if (v == -1) {
        return Outcome::Minus;
    }
    throw std::invalid_argument("outcome must be +1 or -1, got " + std::to_string(v));
}

inline char pauli_char(Pauli p) {
    constexpr std::array<char, 4> chars{'_', 'X', 'Z', 'Y'};
    return chars[static_cast<int>(p)];
}

inline bool anticommute(Pauli a, Pauli b) {
    return a != Pauli::I && b != Pauli::I && a != b;
}

namespace detail {

// Exponent of i picked up when multiplying single-qubit letters a*b
// (with Y taken as the Hermitian Y = iXZ). Returns -1, 0 or +1.
inline int letter_product_phase(Pauli a, Pauli b) {
    bool x1 = static_cast<int>(a) & 1, z1 = static_cast<int>(a) & 2;
    bool x2 = static_cast<int>(b) & 1, z2 = static_cast<int>(b) & 2;
    if (!x1 && !z1) {
        return 0;
    }
    if (x1 && z1) {
        return int(z2) - int(x2);
    }
    if (x1) {
        return int(z2) * (2 * int(x2) - 1);
    }
    return int(x2) * (1 - 2 * int(z2));
}

}  // namespace detail

/// Signed Pauli product over at most MAX_QUBITS qubits.
struct PauliString {
    std::uint32_t xs = 0;
    std::uint32_t zs = 0;
    bool negative = false;

    Pauli at(std::size_t q) const {
        return static_cast<Pauli>(((xs >> q) & 1) | (((zs >> q) & 1) << 1));
    }

    void set(std::size_t q, Pauli p) {
        std::uint32_t bit = std::uint32_t{1} << q;
        xs = (static_cast<int>(p) & 1) ? (xs | bit) : (xs & ~bit);
        zs = (static_cast<int>(p) & 2) ? (zs | bit) : (zs & ~bit);
    }

    bool is_identity() const {
        return xs == 0 && zs == 0;
    }

    bool commutes_with(const PauliString &other) const {
        auto overlap = (xs & other.zs) ^ (zs & other.xs);
        return (__builtin_popcount(overlap) & 1) == 0;
    }

    static PauliString single(std::size_t q, Pauli p, bool negative = false) {
        PauliString s;
        s.set(q, p);
        s.negative = negative;
        return s;
    }

    /// "+XZ_", "-YI", "XX". '_' and 'I' are both identity.
    static PauliString parse(std::string_view text) {
        PauliString s;
        std::size_t start = 0;
        if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
            s.negative = text[0] == '-';
            start = 1;
        }
        if (text.size() - start > MAX_QUBITS) {
            throw std::invalid_argument("Pauli string longer than " + std::to_string(MAX_QUBITS));
        }
        for (std::size_t i = start; i < text.size(); i++) {
            switch (text[i]) {
                case '_':
                case 'I':
                    break;
                case 'X':
                    s.set(i - start, Pauli::X);
                    break;
                case 'Y':
                    s.set(i - start, Pauli::Y);
                    break;
                case 'Z':
                    s.set(i - start, Pauli::Z);
                    break;
                default:
                    throw std::invalid_argument("bad Pauli character in '" + std::string(text) + "'");
            }
        }
        return s;
    }

    std::string str(std::size_t n) const {
        std::string out(1, negative ? '-' : '+');
        for (std::size_t q = 0; q < n; q++) {
            out.push_back(pauli_char(at(q)));
        }
        return out;
    }

    bool operator==(const PauliString &other) const = default;
};

/// Product a*b as (letters, exponent of i in {0,1,2,3}). Signs of a and b are
/// folded into the exponent.
inline std::pair<PauliString, int> multiply(const PauliString &a, const PauliString &b, std::size_t n) {
    int phase = (a.negative ? 2 : 0) + (b.negative ? 2 : 0);
    for (std::size_t q = 0; q < n; q++) {
        phase += detail::letter_product_phase(a.at(q), b.at(q));
    }
    PauliString out;
    out.xs = a.xs ^ b.xs;
    out.zs = a.zs ^ b.zs;
    return {out, ((phase % 4) + 4) % 4};
}

/// Product of two commuting Pauli strings, which is again Hermitian.
inline PauliString multiply_commuting(const PauliString &a, const PauliString &b, std::size_t n) {
    auto [out, phase] = multiply(a, b, n);
    if (phase & 1) {
        throw std::logic_error("multiply_commuting called on anticommuting strings");
    }
    out.negative = phase == 2;
    return out;
}

/// A single-qubit Clifford given by where it sends X and Z under conjugation
/// U P U^dagger. The image of Y follows from Y = iXZ.
struct LocalClifford {
    Pauli x_image = Pauli::X;
    bool x_negative = false;
    Pauli z_image = Pauli::Z;
    bool z_negative = false;

    /// Conjugated letter and whether it picked up a minus sign.
    std::pair<Pauli, bool> conjugate(Pauli p) const {
        switch (p) {
            case Pauli::I:
                return {Pauli::I, false};
            case Pauli::X:
                return {x_image, x_negative};
            case Pauli::Z:
                return {z_image, z_negative};
            case Pauli::Y: {
                int g = detail::letter_product_phase(x_image, z_image);
                bool neg = (((1 + g) % 4 + 4) % 4 == 2) ^ x_negative ^ z_negative;
                auto letter = static_cast<Pauli>(static_cast<int>(x_image) ^ static_cast<int>(z_image));
                return {letter, neg};
            }
        }
        throw std::logic_error("unreachable");
    }

    bool operator==(const LocalClifford &other) const = default;
};

/// Named single-qubit Cliffords. S is sqrt(iZ) = exp(i pi/4 Z) and
/// SqrtYPos is sqrt(iY) = exp(i pi/4 Y), both up to global phase; the
/// daggered / negative variants are their inverses.
enum class CliffordOp : std::uint8_t { I, Z, S, S_dag, SqrtYPos, SqrtYNeg, X, Y };

inline std::string_view clifford_name(CliffordOp op) {
    switch (op) {
        case CliffordOp::I:
            return "I";
        case CliffordOp::Z:
            return "Z";
        case CliffordOp::S:
            return "S";
        case CliffordOp::S_dag:
            return "S_dag";
        case CliffordOp::SqrtYPos:
            return "sqrtY_pos";
        case CliffordOp::SqrtYNeg:
            return "sqrtY_neg";
        case CliffordOp::X:
            return "X";
        case CliffordOp::Y:
            return "Y";
    }
    return "?";
}

inline LocalClifford clifford_of(CliffordOp op) {
    switch (op) {
        case CliffordOp::I:
            return {Pauli::X, false, Pauli::Z, false};
        case CliffordOp::Z:
            return {Pauli::X, true, Pauli::Z, false};
        case CliffordOp::X:
            return {Pauli::X, false, Pauli::Z, true};
        case CliffordOp::Y:
            return {Pauli::X, true, Pauli::Z, true};
        case CliffordOp::S:
            return {Pauli::Y, true, Pauli::Z, false};
        case CliffordOp::S_dag:
            return {Pauli::Y, false, Pauli::Z, false};
        case CliffordOp::SqrtYPos:
            return {Pauli::Z, false, Pauli::X, true};
        case CliffordOp::SqrtYNeg:
            return {Pauli::Z, true, Pauli::X, false};
    }
    throw std::logic_error("unreachable");
}

/// All 24 single-qubit Cliffords modulo phase.
inline const std::array<LocalClifford, 24> &all_local_cliffords() {
    static const std::array<LocalClifford, 24> table = [] {
        std::array<LocalClifford, 24> out{};
        std::size_t k = 0;
        for (auto xi : {Pauli::X, Pauli::Y, Pauli::Z}) {
            for (auto zi : {Pauli::X, Pauli::Y, Pauli::Z}) {
                if (xi == zi) {
                    continue;
                }
                for (int signs = 0; signs < 4; signs++) {
                    out[k++] = LocalClifford{xi, (signs & 1) != 0, zi, (signs & 2) != 0};
                }
            }
        }
        return out;
    }();
    return table;
}

class StabTableau {
   public:
    /// Validates that the generators commute and are independent.
    StabTableau(std::size_t n, std::vector<PauliString> generators) : n_(n), gens_(std::move(generators)) {
        if (n_ == 0) {
            throw std::invalid_argument("tableau needs at least one qubit");
        }
        if (n_ > MAX_QUBITS) {
            throw std::invalid_argument("tableau limited to " + std::to_string(MAX_QUBITS) + " qubits");
        }
        if (gens_.size() != n_) {
            throw std::invalid_argument("need exactly n generators");
        }
        std::uint32_t mask = n_ == 32 ? ~0u : ((std::uint32_t{1} << n_) - 1);
        for (const auto &g : gens_) {
            if ((g.xs | g.zs) & ~mask) {
                throw std::invalid_argument("generator acts outside the register");
            }
        }
        for (std::size_t i = 0; i < n_; i++) {
            for (std::size_t j = i + 1; j < n_; j++) {
                if (!gens_[i].commutes_with(gens_[j])) {
                    throw std::invalid_argument("generators " + std::to_string(i) + " and " + std::to_string(j) +
                                                " anticommute");
                }
            }
        }
        if (reduce(identity_order()).size() != n_) {
            throw std::invalid_argument("generators are not independent");
        }
    }

    static StabTableau parse(const std::vector<std::string> &rows) {
        std::vector<PauliString> gens;
        std::size_t n = 0;
        for (const auto &r : rows) {
            gens.push_back(PauliString::parse(r));
            std::size_t len = r.size() - ((!r.empty() && (r[0] == '+' || r[0] == '-')) ? 1 : 0);
            n = std::max(n, len);
        }
        return StabTableau(n, std::move(gens));
    }

    std::size_t num_qubits() const {
        return n_;
    }

    const std::vector<PauliString> &generators() const {
        return gens_;
    }

    /// Measurement result if the Pauli on `qubit` is already fixed by the state.
    std::optional<Outcome> peek(NodeId qubit, Pauli basis) const {
        check_qubit(qubit);
        auto target = PauliString::single(qubit, basis);
        for (const auto &g : gens_) {
            if (!g.commutes_with(target)) {
                return std::nullopt;
            }
        }
        auto product = express(target);
        if (!product) {
            throw std::logic_error("commuting Pauli missing from a full-rank stabilizer group");
        }
        return product->negative ? Outcome::Minus : Outcome::Plus;
    }

    /// Projective measurement with the result chosen by the caller. Throws if
    /// the result is deterministic and `forced` contradicts it.
    Outcome measure(NodeId qubit, Pauli basis, Outcome forced) {
        return measure_impl(qubit, basis, [&] { return forced; }, true);
    }

    /// Projective measurement; random results are drawn from `rng`.
    template <typename Rng>
    Outcome measure(NodeId qubit, Pauli basis, Rng &rng) {
        return measure_impl(qubit, basis, [&] { return (rng() & 1) ? Outcome::Minus : Outcome::Plus; }, false);
    }

    void apply(NodeId qubit, const LocalClifford &c) {
        check_qubit(qubit);
        for (auto &g : gens_) {
            auto [letter, neg] = c.conjugate(g.at(qubit));
            g.set(qubit, letter);
            g.negative ^= neg;
        }
    }

    void apply(NodeId qubit, CliffordOp op) {
        apply(qubit, clifford_of(op));
    }

    /// Row-reduced echelon form of the generator matrix, qubit-major with the
    /// X bit before the Z bit. Two tableaus describe the same state iff their
    /// canonical forms are identical.
    StabTableau canonical() const {
        StabTableau out = *this;
        out.gens_ = reduce(identity_order());
        return out;
    }

    /// Stabilizers of the reduced state on `keep` (the subgroup supported only
    /// there). The result has |keep| elements iff `keep` is in a pure state
    /// unentangled with the rest.
    std::vector<PauliString> restricted_to(const std::vector<NodeId> &keep) const {
        std::vector<NodeId> order;
        std::uint32_t keep_mask = 0;
        for (auto q : keep) {
            check_qubit(q);
            keep_mask |= std::uint32_t{1} << q;
        }
        for (NodeId q = 0; q < n_; q++) {
            if (!((keep_mask >> q) & 1)) {
                order.push_back(q);
            }
        }
        order.insert(order.end(), keep.begin(), keep.end());
        std::vector<PauliString> out;
        for (const auto &row : reduce(order)) {
            if (((row.xs | row.zs) & ~keep_mask) == 0) {
                out.push_back(row);
            }
        }
        return out;
    }

    std::string str() const {
        std::string out;
        for (const auto &g : gens_) {
            out += g.str(n_);
            out += '\n';
        }
        return out;
    }

   private:
    void check_qubit(NodeId q) const {
        if (q >= n_) {
            throw std::out_of_range("qubit " + std::to_string(q) + " out of range (n=" + std::to_string(n_) + ")");
        }
    }

    std::vector<NodeId> identity_order() const {
        std::vector<NodeId> order(n_);
        for (NodeId q = 0; q < n_; q++) {
            order[q] = q;
        }
        return order;
    }

    // Gauss-Jordan elimination over the symplectic bits, visiting qubits in
    // `order` (X bit then Z bit each). Returns only the nonzero pivot rows.
    std::vector<PauliString> reduce(const std::vector<NodeId> &order) const {
        std::vector<PauliString> rows = gens_;
        std::size_t rank = 0;
        for (auto q : order) {
            for (int part = 0; part < 2; part++) {
                std::uint32_t bit = std::uint32_t{1} << q;
                auto has = [&](const PauliString &p) { return ((part == 0 ? p.xs : p.zs) & bit) != 0; };
                std::size_t pivot = rank;
                while (pivot < rows.size() && !has(rows[pivot])) {
                    pivot++;
                }
                if (pivot == rows.size()) {
                    continue;
                }
                std::swap(rows[rank], rows[pivot]);
                for (std::size_t r = 0; r < rows.size(); r++) {
                    if (r != rank && has(rows[r])) {
                        rows[r] = multiply_commuting(rows[r], rows[rank], n_);
                    }
                }
                rank++;
            }
        }
        rows.resize(rank);
        return rows;
    }

    // The group element with the same letters as `target`, if one exists.
    std::optional<PauliString> express(const PauliString &target) const {
        auto rows = reduce(identity_order());
        PauliString acc;  // identity, + sign
        PauliString rest = target;
        rest.negative = false;
        for (const auto &row : rows) {
            // Each pivot row owns the lowest set bit (in elimination order) of
            // its symplectic vector; clear it from the remainder.
            std::uint32_t low_x = row.xs & (~row.xs + 1);
            std::uint32_t low_z = row.zs & (~row.zs + 1);
            bool use;
            if (row.xs != 0 && (row.zs == 0 || __builtin_ctz(row.xs) <= __builtin_ctz(row.zs))) {
                use = (rest.xs & low_x) != 0;
            } else {
                use = (rest.zs & low_z) != 0;
            }
            if (use) {
                acc = multiply_commuting(acc, row, n_);
                rest.xs ^= row.xs;
                rest.zs ^= row.zs;
            }
        }
        if (!rest.is_identity()) {
            return std::nullopt;
        }
        return acc;
    }

    template <typename Choose>
    Outcome measure_impl(NodeId qubit, Pauli basis, Choose choose, bool forced) {
        check_qubit(qubit);
        if (basis == Pauli::I) {
            throw std::invalid_argument("cannot measure in the identity basis");
        }
        auto target = PauliString::single(qubit, basis);
        std::optional<std::size_t> pivot;
        for (std::size_t i = 0; i < n_; i++) {
            if (!gens_[i].commutes_with(target)) {
                if (!pivot) {
                    pivot = i;
                } else {
                    gens_[i] = multiply_commuting(gens_[i], gens_[*pivot], n_);
                }
            }
        }
        if (!pivot) {
            auto fixed = *peek(qubit, basis);
            if (forced && choose() != fixed) {
                throw std::invalid_argument("forced outcome contradicts deterministic measurement of qubit " +
                                            std::to_string(qubit));
            }
            return fixed;
        }
        Outcome result = choose();
        target.negative = result == Outcome::Minus;
        gens_[*pivot] = target;
        return result;
    }

    std::size_t n_;
    std::vector<PauliString> gens_;
};

inline std::ostream &operator<<(std::ostream &out, const StabTableau &t) {
    return out << t.str();
}

/// Qubit of a measured node left in an eigenstate of one Pauli.
struct ProductQubit {
    NodeId node;
    Pauli basis;
    Outcome outcome;
};

/// Stabilizers K_a = X_a Z_{N(a)} of |G>. Dead nodes are isolated and so
/// come out as |+>. Entries of `products` replace the generator of an
/// isolated node with the given Pauli eigenstate.
inline StabTableau tableau_from_graph(const Graph &g, const std::vector<ProductQubit> &products = {}) {
    std::size_t n = g.size();
    if (n == 0) {
        throw std::invalid_argument("cannot build a tableau for an empty graph");
    }
    if (n > MAX_QUBITS) {
        throw std::invalid_argument("graph too large for the stabilizer oracle");
    }
    std::vector<PauliString> gens(n);
    for (NodeId a = 0; a < n; a++) {
        if (g.has_edge(a, a)) {
            throw std::invalid_argument("self-loop at node " + std::to_string(a));
        }
        gens[a].set(a, Pauli::X);
        for (auto b : g.neighbors(a)) {
            gens[a].set(b, Pauli::Z);
        }
    }
    for (const auto &p : products) {
        if (p.node >= n || g.degree(p.node) != 0) {
            throw std::invalid_argument("product qubit " + std::to_string(p.node) + " must be isolated");
        }
        gens[p.node] = PauliString::single(p.node, p.basis, p.outcome == Outcome::Minus);
    }
    return StabTableau(n, std::move(gens));
}

/// Same stabilizer group (signs included).
inline bool states_equal(const StabTableau &a, const StabTableau &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("states_equal: qubit counts differ");
    }
    return a.canonical().generators() == b.canonical().generators();
}

/// Whether some product of single-qubit Cliffords on `free_qubits` maps a to
/// b. Exhaustive over 24^k choices, so k is capped at 4.
inline bool equal_up_to_local_clifford(const StabTableau &a, const StabTableau &b,
                                       const std::vector<NodeId> &free_qubits) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("equal_up_to_local_clifford: qubit counts differ");
    }
    if (free_qubits.size() > 4) {
        throw std::invalid_argument("equal_up_to_local_clifford: at most 4 free qubits");
    }
    for (auto q : free_qubits) {
        if (q >= a.num_qubits()) {
            throw std::out_of_range("free qubit out of range");
        }
    }
    const auto target = b.canonical().generators();
    const auto &cliffords = all_local_cliffords();
    std::size_t k = free_qubits.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; i++) {
        total *= cliffords.size();
    }
    for (std::size_t code = 0; code < total; code++) {
        StabTableau t = a;
        std::size_t c = code;
        for (std::size_t i = 0; i < k; i++) {
            t.apply(free_qubits[i], cliffords[c % cliffords.size()]);
            c /= cliffords.size();
        }
        if (t.canonical().generators() == target) {
            return true;
        }
    }
    return false;
}

}  // namespace tslot
