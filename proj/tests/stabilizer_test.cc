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

#include "tslot/stabilizer.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

namespace tslot {
namespace {

using testing::cd;
using testing::Mat2;

Mat2 signed_pauli(Pauli p, bool negative) {
    return testing::scale(testing::pauli_matrix(p), negative ? -1.0 : 1.0);
}

// U P U^dagger computed densely must match the symbolic table for X, Y, Z.
void expect_table_matches(const LocalClifford &c, const Mat2 &u, const std::string &label) {
    for (auto p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        auto [img, neg] = c.conjugate(p);
        Mat2 got = testing::mul(testing::mul(u, testing::pauli_matrix(p)), testing::dagger(u));
        EXPECT_TRUE(testing::close(got, signed_pauli(img, neg)))
            << label << " on " << pauli_char(p) << " -> " << (neg ? '-' : '+') << pauli_char(img);
    }
}

TEST(Clifford, NamedOpsMatchTheirMatrices) {
    for (auto op : {CliffordOp::I, CliffordOp::X, CliffordOp::Y, CliffordOp::Z, CliffordOp::S, CliffordOp::S_dag,
                    CliffordOp::SqrtYPos, CliffordOp::SqrtYNeg}) {
        expect_table_matches(clifford_of(op), testing::op_matrix(op), std::string(clifford_name(op)));
    }
}

TEST(Clifford, SqrtIZActsAsExpected) {
    // sqrt(iZ) = exp(i pi/4 Z) ~ diag(1, -i): X -> -Y, Y -> X.
    auto s = clifford_of(CliffordOp::S);
    EXPECT_EQ(s.conjugate(Pauli::X), std::make_pair(Pauli::Y, true));
    EXPECT_EQ(s.conjugate(Pauli::Y), std::make_pair(Pauli::X, false));
    EXPECT_EQ(s.conjugate(Pauli::Z), std::make_pair(Pauli::Z, false));
    auto sd = clifford_of(CliffordOp::S_dag);
    EXPECT_EQ(sd.conjugate(Pauli::X), std::make_pair(Pauli::Y, false));
    EXPECT_EQ(sd.conjugate(Pauli::Y), std::make_pair(Pauli::X, true));
}

TEST(Clifford, TwentyFourDistinctGroupElements) {
    const auto &all = all_local_cliffords();
    std::set<std::tuple<int, bool, int, bool>> seen;
    for (const auto &c : all) {
        seen.insert({int(c.x_image), c.x_negative, int(c.z_image), c.z_negative});
        // Each entry is a genuine Clifford: it preserves Y = iXZ.
        auto [xi, xn] = c.conjugate(Pauli::X);
        auto [yi, yn] = c.conjugate(Pauli::Y);
        auto [zi, zn] = c.conjugate(Pauli::Z);
        Mat2 ixz = testing::scale(testing::mul(signed_pauli(xi, xn), signed_pauli(zi, zn)), cd{0, 1});
        EXPECT_TRUE(testing::close(ixz, signed_pauli(yi, yn)));
    }
    EXPECT_EQ(seen.size(), 24u);
}

TEST(PauliString, ParseAndMultiply) {
    auto a = PauliString::parse("+XZ_");
    auto b = PauliString::parse("-ZX_");
    EXPECT_EQ(a.str(3), "+XZ_");
    EXPECT_TRUE(a.commutes_with(b));
    // (XZ)(ZX) = (XZ)x(ZX) = (-iY)(iY) = YY, times the -1 of b.
    EXPECT_EQ(multiply_commuting(a, b, 3).str(3), "-YY_");
    auto [p, phase] = multiply(PauliString::parse("X"), PauliString::parse("Z"), 1);
    EXPECT_EQ(p.str(1), "+Y");
    EXPECT_EQ(phase, 3);  // XZ = -iY
    EXPECT_THROW(PauliString::parse("XQ"), std::invalid_argument);
    EXPECT_THROW(multiply_commuting(PauliString::parse("X"), PauliString::parse("Z"), 1), std::logic_error);
}

TEST(StabTableau, ValidatesGenerators) {
    EXPECT_THROW(StabTableau::parse({"+XX", "+ZI"}), std::invalid_argument);  // anticommute
    EXPECT_THROW(StabTableau::parse({"+XX", "-XX"}), std::invalid_argument);  // dependent
    EXPECT_THROW(StabTableau::parse({"+XX"}), std::invalid_argument);         // too few
    EXPECT_NO_THROW(StabTableau::parse({"+XX", "+ZZ"}));
}

// Group elements of a 2-qubit stabilizer as dense 4x4 matrices, built
// without the library's multiplication.
std::vector<std::array<cd, 16>> dense_group(const std::vector<std::string> &rows) {
    auto kron = [](const Mat2 &a, const Mat2 &b) {
        std::array<cd, 16> out{};
        for (int i = 0; i < 2; i++)
            for (int j = 0; j < 2; j++)
                for (int k = 0; k < 2; k++)
                    for (int l = 0; l < 2; l++) out[(i * 2 + k) * 4 + j * 2 + l] = a[i * 2 + j] * b[k * 2 + l];
        return out;
    };
    auto mat = [&](const std::string &s) {
        double sign = s[0] == '-' ? -1 : 1;
        auto letter = [](char c) {
            return c == 'X' ? Pauli::X : c == 'Y' ? Pauli::Y : c == 'Z' ? Pauli::Z : Pauli::I;
        };
        auto m = kron(testing::pauli_matrix(letter(s[1])), testing::pauli_matrix(letter(s[2])));
        for (auto &v : m) v *= sign;
        return m;
    };
    auto mul4 = [](const std::array<cd, 16> &a, const std::array<cd, 16> &b) {
        std::array<cd, 16> out{};
        for (int i = 0; i < 4; i++)
            for (int j = 0; j < 4; j++)
                for (int k = 0; k < 4; k++) out[i * 4 + j] += a[i * 4 + k] * b[k * 4 + j];
        return out;
    };
    auto g0 = mat(rows[0]), g1 = mat(rows[1]);
    std::array<cd, 16> id{};
    for (int i = 0; i < 4; i++) id[i * 5] = 1;
    return {id, g0, g1, mul4(g0, g1)};
}

bool same_dense_group(const std::vector<std::string> &a, const std::vector<std::string> &b) {
    auto ga = dense_group(a), gb = dense_group(b);
    for (const auto &x : ga) {
        bool found = false;
        for (const auto &y : gb) {
            bool eq = true;
            for (int k = 0; k < 16; k++) eq = eq && std::abs(x[k] - y[k]) < 1e-9;
            found = found || eq;
        }
        if (!found) return false;
    }
    return true;
}

TEST(StabTableau, StatesEqualAgreesWithGroupEnumeration) {
    const std::vector<std::vector<std::string>> states = {
        {"+XZ", "+ZX"}, {"+XZ", "+YY"}, {"+ZX", "-YY"}, {"+XZ", "-ZX"}, {"+XI", "+IX"},
        {"+XX", "+ZZ"}, {"-XX", "+ZZ"}, {"+YY", "+ZX"}, {"+XX", "-YY"}, {"+ZI", "+IZ"},
    };
    for (const auto &a : states) {
        for (const auto &b : states) {
            EXPECT_EQ(states_equal(StabTableau::parse(a), StabTableau::parse(b)), same_dense_group(a, b))
                << a[0] << a[1] << " vs " << b[0] << b[1];
        }
    }
    EXPECT_TRUE(states_equal(StabTableau::parse({"+XZ", "+ZX"}), StabTableau::parse({"+XZ", "+YY"})));
    EXPECT_FALSE(states_equal(StabTableau::parse({"+XZ", "+ZX"}), StabTableau::parse({"+XZ", "-ZX"})));
}

TEST(StabTableau, LocalCliffordEquivalence) {
    auto edge = StabTableau::parse({"+XZ", "+ZX"});
    EXPECT_TRUE(equal_up_to_local_clifford(StabTableau::parse({"+XX", "+ZZ"}), edge, {0, 1}));
    EXPECT_TRUE(equal_up_to_local_clifford(StabTableau::parse({"+XX", "+ZZ"}), edge, {1}));
    EXPECT_TRUE(equal_up_to_local_clifford(StabTableau::parse({"+XZ", "-ZX"}), edge, {0}));
    EXPECT_FALSE(equal_up_to_local_clifford(StabTableau::parse({"+XX", "+ZZ"}), edge, {}));
    EXPECT_FALSE(equal_up_to_local_clifford(StabTableau::parse({"+XI", "+IX"}), edge, {0, 1}));
    EXPECT_THROW(equal_up_to_local_clifford(edge, edge, {0, 1, 0, 1, 0}), std::invalid_argument);
}

TEST(StabTableau, BellMeasurementCorrelates) {
    auto t = StabTableau::parse({"+XX", "+ZZ"});
    EXPECT_FALSE(t.peek(0, Pauli::Z).has_value());
    EXPECT_EQ(t.measure(0, Pauli::Z, Outcome::Minus), Outcome::Minus);
    EXPECT_EQ(t.peek(1, Pauli::Z), Outcome::Minus);
    EXPECT_THROW(t.measure(1, Pauli::Z, Outcome::Plus), std::invalid_argument);
    EXPECT_EQ(t.measure(1, Pauli::Z, Outcome::Minus), Outcome::Minus);
}

TEST(StabTableau, PeekOnGraphState) {
    auto t = tableau_from_graph(line_network(2));
    EXPECT_FALSE(t.peek(1, Pauli::Y).has_value());
    EXPECT_EQ(t.peek(0, Pauli::X), Outcome::Plus);  // unused id 0 is |+>
    // Y_1 Y_2 = (X_1 Z_2)(Z_1 X_2) is a stabilizer, so after Y_1 = -1 the
    // outcome of Y_2 is fixed to -1 as well.
    t.measure(1, Pauli::Y, Outcome::Minus);
    EXPECT_EQ(t.peek(2, Pauli::Y), Outcome::Minus);
}

TEST(StabTableau, RestrictedToFindsPureSubsystem) {
    auto t = StabTableau::parse({"+XZ_", "+ZX_", "+__Z"});
    EXPECT_EQ(t.restricted_to({0, 1}).size(), 2u);
    EXPECT_EQ(t.restricted_to({2}).size(), 1u);
    EXPECT_EQ(t.restricted_to({1, 2}).size(), 1u);  // qubit 1 is entangled with 0
}

// Random Clifford + measurement circuits on graph states, cross-checked
// against a dense state vector: every stabilizer generator must have
// expectation +1 and deterministic outcomes must agree.
TEST(StabTableau, MatchesStateVectorOnRandomCircuits) {
    std::mt19937 rng(2026);
    const CliffordOp ops[] = {CliffordOp::S, CliffordOp::S_dag, CliffordOp::SqrtYPos, CliffordOp::SqrtYNeg,
                              CliffordOp::X, CliffordOp::Z};
    const Pauli bases[] = {Pauli::X, Pauli::Y, Pauli::Z};
    for (int trial = 0; trial < 200; trial++) {
        std::size_t n = 2 + rng() % 5;
        Graph g = testing::random_graph(n, rng);
        auto tab = tableau_from_graph(g);
        auto sv = testing::StateVector::graph_state(g);
        for (int step = 0; step < 8; step++) {
            NodeId q = rng() % n;
            if (rng() & 1) {
                auto op = ops[rng() % 6];
                tab.apply(q, op);
                sv.apply(q, testing::op_matrix(op));
            } else {
                auto basis = bases[rng() % 3];
                auto fixed = tab.peek(q, basis);
                double e = sv.expectation(q, basis);
                if (fixed) {
                    EXPECT_NEAR(e, to_int(*fixed), 1e-9);
                } else {
                    EXPECT_NEAR(e, 0, 1e-9);
                }
                Outcome o = fixed ? *fixed : ((rng() & 1) ? Outcome::Minus : Outcome::Plus);
                tab.measure(q, basis, o);
                sv.project(q, basis, o);
            }
            for (const auto &gen : tab.generators()) {
                // Apply the whole generator and take the overlap.
                testing::StateVector w = sv;
                for (std::size_t k = 0; k < n; k++) {
                    if (gen.at(k) != Pauli::I) {
                        w.apply(k, testing::pauli_matrix(gen.at(k)));
                    }
                }
                if (gen.negative) {
                    w.apply(0, testing::scale(testing::pauli_matrix(Pauli::I), -1.0));
                }
                EXPECT_NEAR(std::abs(sv.inner(w) - 1.0), 0, 1e-9) << "generator " << gen.str(n);
            }
        }
    }
}

TEST(StabTableau, CanonicalIsInvariantUnderGeneratorMixing) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; trial++) {
        std::size_t n = 1 + rng() % 8;
        auto t = tableau_from_graph(testing::random_graph(n, rng));
        auto gens = t.generators();
        for (int k = 0; k < 20; k++) {
            std::size_t i = rng() % n, j = rng() % n;
            if (i != j) {
                gens[i] = multiply_commuting(gens[i], gens[j], n);
            }
        }
        std::shuffle(gens.begin(), gens.end(), rng);
        StabTableau mixed(n, gens);
        EXPECT_TRUE(states_equal(t, mixed));
        EXPECT_EQ(t.canonical().str(), mixed.canonical().str());
    }
}

}  // namespace
}  // namespace tslot
