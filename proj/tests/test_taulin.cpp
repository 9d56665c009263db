#include <catch2/catch_amalgamated.hpp>

#include "mmf/taulin.hpp"
#include "support/test_util.hpp"

using namespace mmf;
using testutil::determinant;
using testutil::minor_gcd;
using testutil::random_matrix;

namespace {

TauPoly P(std::uint64_t bits) { return TauPoly::from_bits(bits); }

std::vector<TauPoly> col(std::initializer_list<TauPoly> xs) { return std::vector<TauPoly>(xs); }

void check_snf(const TauMatrix& m) {
    SmithForm s = smith_normal_form(m);
    REQUIRE(s.U * m * s.V == s.D);
    REQUIRE(s.U * s.Uinv == TauMatrix::identity(m.rows()));
    REQUIRE(s.V * s.Vinv == TauMatrix::identity(m.cols()));
    // Diagonal with the divisibility chain.
    for (int i = 0; i < s.D.rows(); ++i)
        for (int j = 0; j < s.D.cols(); ++j)
            if (i != j) REQUIRE(s.D.at(i, j).is_zero());
    for (int i = 0; i + 1 < std::min(s.D.rows(), s.D.cols()); ++i)
        REQUIRE(divides(s.diag(i), s.diag(i + 1)));
    // Transforms are units: the only unit of F2[tau] is 1.
    REQUIRE(determinant(s.U).is_one());
    REQUIRE(determinant(s.V).is_one());
    // Determinantal divisors: d_1...d_i = gcd of i x i minors.
    TauPoly prod = TauPoly::one();
    for (int i = 1; i <= std::min(m.rows(), m.cols()); ++i) {
        prod = prod * s.diag(i - 1);
        REQUIRE(prod == minor_gcd(m, i));
    }
}

}  // namespace

TEST_CASE("tau polynomial basics") {
    REQUIRE(TauPoly::zero().is_zero());
    REQUIRE(TauPoly::one().is_unit());
    REQUIRE(TauPoly::tau_power(3).degree() == 3);
    REQUIRE(P(0b1010).to_string() == "tau^3+tau");

    // x + x = 0 in characteristic 2.
    TauPoly x = P(0b1101);
    REQUIRE((x + x).is_zero());

    REQUIRE((P(0b11) * P(0b11)) == P(0b101));  // (tau+1)^2 = tau^2+1
    REQUIRE(P(0b100).is_tau_power());
    REQUIRE(!P(0b101).is_tau_power());
    REQUIRE(truncated(P(0b1110), 2) == P(0b10));
}

TEST_CASE("scalar_divmod examples") {
    // (tau^3 + tau) / tau = (tau^2 + 1, 0)
    auto [q1, r1] = scalar_divmod(P(0b1010), P(0b10));
    REQUIRE(q1 == P(0b101));
    REQUIRE(r1.is_zero());

    // (tau^2 + 1) / (tau + 1) = (tau + 1, 0)
    auto [q2, r2] = scalar_divmod(P(0b101), P(0b11));
    REQUIRE(q2 == P(0b11));
    REQUIRE(r2.is_zero());

    // tau^3 / (tau^2 + tau) = (tau + 1, tau); check by multiplying back
    auto [q3, r3] = scalar_divmod(P(0b1000), P(0b110));
    REQUIRE(q3 == P(0b11));
    REQUIRE(r3 == P(0b10));
    REQUIRE(P(0b110) * q3 + r3 == P(0b1000));

    REQUIRE_THROWS_AS(scalar_divmod(P(1), TauPoly::zero()), UsageError);
}

TEST_CASE("divmod round trip exhaustive tau-degree <= 4") {
    for (std::uint64_t a = 0; a < 32; ++a)
        for (std::uint64_t b = 1; b < 32; ++b) {
            auto [q, r] = scalar_divmod(P(a), P(b));
            REQUIRE(q * P(b) + r == P(a));
            REQUIRE(r.degree() < P(b).degree());
        }
}

TEST_CASE("smith normal form examples") {
    SECTION("zero matrix") {
        TauMatrix z(3, 2);
        SmithForm s = smith_normal_form(z);
        REQUIRE(s.rank == 0);
        REQUIRE(s.D == z);
    }
    SECTION("identity") {
        TauMatrix id = TauMatrix::identity(3);
        SmithForm s = smith_normal_form(id);
        REQUIRE(s.rank == 3);
        REQUIRE(s.D == id);
    }
    SECTION("[[tau, tau^2],[0, tau^3]] -> diag(tau, tau^3)") {
        TauMatrix m(2, 2);
        m.at(0, 0) = P(0b10);
        m.at(0, 1) = P(0b100);
        m.at(1, 1) = P(0b1000);
        SmithForm s = smith_normal_form(m);
        REQUIRE(s.diag(0) == P(0b10));
        REQUIRE(s.diag(1) == P(0b1000));
        check_snf(m);
    }
}

TEST_CASE("smith normal form against determinantal-divisor oracle") {
    std::mt19937 rng(20260811);
    for (int trial = 0; trial < 60; ++trial) {
        int rows = 1 + static_cast<int>(rng() % 4);
        int cols = 1 + static_cast<int>(rng() % 4);
        check_snf(random_matrix(rng, rows, cols, 3));
    }
}

TEST_CASE("solve_linear examples") {
    SECTION("[[tau]] x = [tau^2] -> [tau]") {
        TauMatrix m(1, 1);
        m.at(0, 0) = P(0b10);
        auto x = solve_linear(m, col({P(0b100)}));
        REQUIRE(x.has_value());
        REQUIRE((*x)[0] == P(0b10));
    }
    SECTION("[[tau]] x = [1] unsolvable") {
        TauMatrix m(1, 1);
        m.at(0, 0) = P(0b10);
        REQUIRE(!solve_linear(m, col({P(1)})).has_value());
    }
    SECTION("[[1, tau],[0,0]] x = [tau^2, 0] is solved exactly") {
        TauMatrix m(2, 2);
        m.at(0, 0) = P(1);
        m.at(0, 1) = P(0b10);
        auto x = solve_linear(m, col({P(0b100), TauPoly::zero()}));
        REQUIRE(x.has_value());
        REQUIRE(m.apply(*x) == col({P(0b100), TauPoly::zero()}));
    }
}

TEST_CASE("kernel_basis spans the kernel") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        TauMatrix m = random_matrix(rng, 1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 4), 2);
        auto ker = kernel_basis(m);
        for (const auto& k : ker) REQUIRE(m.apply(k) == std::vector<TauPoly>(m.rows()));
        REQUIRE(static_cast<int>(ker.size()) == m.cols() - rank(m));
    }
}

TEST_CASE("subquotient_decomposition examples") {
    SECTION("cycles {x}, boundaries {tau^2 x} -> M2/tau^2") {
        auto out = subquotient_decomposition({col({P(1)})}, {col({P(0b100)})}, 1);
        REQUIRE(out.size() == 1);
        REQUIRE(out[0].type == TorsionModule::torsion(2));
        REQUIRE(out[0].rep == col({P(1)}));
    }
    SECTION("cycles {x}, boundaries {x} -> empty") {
        auto out = subquotient_decomposition({col({P(1)})}, {col({P(1)})}, 1);
        REQUIRE(out.empty());
    }
    SECTION("cycles {x,y}, boundaries {x + tau y} -> one free summand") {
        auto out = subquotient_decomposition({col({P(1), P(0)}), col({P(0), P(1)})},
                                             {col({P(1), P(0b10)})}, 2);
        REQUIRE(out.size() == 1);
        REQUIRE(out[0].type.is_free());
    }
    SECTION("boundary outside cycles is the d^2 symptom") {
        REQUIRE_THROWS_AS(
            subquotient_decomposition({col({P(1), P(0)})}, {col({P(0), P(1)})}, 2),
            DataError);
    }
}

TEST_CASE("subquotient free count = rank(cycles) - rank(boundaries)") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        int p = 1 + static_cast<int>(rng() % 3);
        TauMatrix C = random_matrix(rng, n, p, 2);
        // Boundaries as random F2[tau]-combinations of the cycles.
        int q = static_cast<int>(rng() % 3);
        std::vector<std::vector<TauPoly>> cycles, boundaries;
        for (int j = 0; j < p; ++j) cycles.push_back(C.column(j));
        TauMatrix coeff = random_matrix(rng, p, q, 1);
        for (int j = 0; j < q; ++j) boundaries.push_back((C * coeff).column(j));
        auto out = subquotient_decomposition(cycles, boundaries, n);
        int free_count = 0;
        for (auto& s : out)
            if (s.type.is_free()) ++free_count;
        TauMatrix B = TauMatrix::from_columns(boundaries, n);
        REQUIRE(free_count == rank(C) - rank(B));
    }
}

TEST_CASE("subquotient coordinates reduce canonically") {
    // span{x, y}/span{tau^2 x} with an element tau^3 x + y.
    SubquotientView v({col({P(1), P(0)}), col({P(0), P(1)})}, {col({P(0b100), P(0)})}, 2);
    REQUIRE(v.summands().size() == 2);
    auto beta = v.coords(col({P(0b1000), P(1)}));
    REQUIRE(beta.has_value());
    // tau^3 x dies in M2/tau^2, leaving the free y coordinate.
    int nonzero = 0;
    for (auto& b : *beta)
        if (!b.is_zero()) ++nonzero;
    REQUIRE(nonzero == 1);
    REQUIRE(!v.is_zero_class(col({P(0), P(1)})));
    REQUIRE(v.is_zero_class(col({P(0b100), P(0)})));
}
