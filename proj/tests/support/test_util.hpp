#pragma once

// Shared helpers for the test suites: small determinant/minor oracles over
// F2[tau] independent of the Smith normal form path, and seeded random data.

#include <random>
#include <vector>

#include "mmf/taulin.hpp"

namespace testutil {

using mmf::TauMatrix;
using mmf::TauPoly;

// Cofactor-expansion determinant; fine for the sizes the tests use.
inline TauPoly determinant(const TauMatrix& m) {
    if (m.rows() != m.cols()) throw mmf::UsageError("determinant of non-square matrix");
    int n = m.rows();
    if (n == 0) return TauPoly::one();
    if (n == 1) return m.at(0, 0);
    TauPoly det;
    for (int j = 0; j < n; ++j) {
        if (m.at(0, j).is_zero()) continue;
        TauMatrix sub(n - 1, n - 1);
        for (int i = 1; i < n; ++i) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                sub.at(i - 1, cc++) = m.at(i, c);
            }
        }
        det += m.at(0, j) * determinant(sub);  // characteristic 2: signs vanish
    }
    return det;
}

// gcd of all i x i minors (zero when every minor vanishes).
inline TauPoly minor_gcd(const TauMatrix& m, int i) {
    std::vector<int> rows(i), cols(i);
    TauPoly g;
    auto choose = [&](auto&& self, std::vector<int>& idx, int limit, int pos, int start,
                      auto&& inner) -> void {
        if (pos == i) {
            inner();
            return;
        }
        for (int v = start; v < limit; ++v) {
            idx[pos] = v;
            self(self, idx, limit, pos + 1, v + 1, inner);
        }
    };
    auto eval = [&]() {
        TauMatrix sub(i, i);
        for (int a = 0; a < i; ++a)
            for (int b = 0; b < i; ++b) sub.at(a, b) = m.at(rows[a], cols[b]);
        g = mmf::gcd(g, determinant(sub));
    };
    auto inner_cols = [&]() { choose(choose, cols, m.cols(), 0, 0, eval); };
    choose(choose, rows, m.rows(), 0, 0, inner_cols);
    return g;
}

inline TauPoly random_poly(std::mt19937& rng, int max_deg) {
    std::uniform_int_distribution<int> bits(0, (1 << (max_deg + 1)) - 1);
    return TauPoly::from_bits(static_cast<std::uint64_t>(bits(rng)));
}

inline TauMatrix random_matrix(std::mt19937& rng, int rows, int cols, int max_deg) {
    TauMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = random_poly(rng, max_deg);
    return m;
}

}  // namespace testutil
