#pragma once

// Exact linear algebra over the principal ideal domain F2[tau].
//
// Scalars are polynomials in tau with mod-2 coefficients, stored as bit
// vectors.  Everything here is exact: no fraction fields, no floating point.
// The only unit of F2[tau] is 1, which keeps Smith normal forms and their
// transforms canonical.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmf/errors.hpp"

namespace mmf {

class TauPoly {
  public:
    TauPoly() = default;

    static TauPoly zero() { return TauPoly{}; }

    static TauPoly one() { return tau_power(0); }

    static TauPoly tau_power(int k) {
        TauPoly p;
        p.set(k);
        return p;
    }

    // Coefficient bits packed little-endian, e.g. 0b101 = tau^2 + 1.
    static TauPoly from_bits(std::uint64_t bits) {
        TauPoly p;
        if (bits != 0) p.words_.push_back(bits);
        return p;
    }

    bool is_zero() const { return words_.empty(); }
    bool is_one() const { return words_.size() == 1 && words_[0] == 1; }
    bool is_unit() const { return is_one(); }

    // Degree in tau; -1 for the zero polynomial.
    int degree() const {
        if (words_.empty()) return -1;
        int top = static_cast<int>(words_.size()) - 1;
        return top * 64 + 63 - countl_zero(words_.back());
    }

    bool is_tau_power() const { return !is_zero() && degree() == valuation(); }

    // tau-adic valuation (lowest set bit); -1 for zero.
    int valuation() const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] != 0) return static_cast<int>(i) * 64 + countr_zero(words_[i]);
        return -1;
    }

    bool coeff(int k) const {
        std::size_t w = static_cast<std::size_t>(k) / 64;
        if (w >= words_.size()) return false;
        return (words_[w] >> (k % 64)) & 1u;
    }

    void set(int k) {
        std::size_t w = static_cast<std::size_t>(k) / 64;
        if (w >= words_.size()) words_.resize(w + 1, 0);
        words_[w] ^= std::uint64_t{1} << (k % 64);
        trim();
    }

    TauPoly& operator+=(const TauPoly& o) {
        if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
        for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] ^= o.words_[i];
        trim();
        return *this;
    }

    friend TauPoly operator+(TauPoly a, const TauPoly& b) {
        a += b;
        return a;
    }

    friend TauPoly operator*(const TauPoly& a, const TauPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        TauPoly r;
        r.words_.assign(a.words_.size() + b.words_.size(), 0);
        for (std::size_t i = 0; i < a.words_.size(); ++i) {
            std::uint64_t w = a.words_[i];
            while (w != 0) {
                int bit = countr_zero(w);
                w &= w - 1;
                r.xor_shifted(b, static_cast<int>(i) * 64 + bit);
            }
        }
        r.trim();
        return r;
    }

    TauPoly& operator*=(const TauPoly& o) { return *this = *this * o; }

    // Shift by tau^k.
    TauPoly shifted(int k) const {
        TauPoly r;
        r.words_.assign(words_.size() + static_cast<std::size_t>(k) / 64 + 1, 0);
        r.xor_shifted(*this, k);
        r.trim();
        return r;
    }

    friend bool operator==(const TauPoly& a, const TauPoly& b) { return a.words_ == b.words_; }
    friend bool operator!=(const TauPoly& a, const TauPoly& b) { return !(a == b); }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (int k = degree(); k >= 0; --k) {
            if (!coeff(k)) continue;
            if (!s.empty()) s += "+";
            if (k == 0)
                s += "1";
            else if (k == 1)
                s += "tau";
            else
                s += "tau^" + std::to_string(k);
        }
        return s;
    }

  private:
    std::vector<std::uint64_t> words_;

    static int countr_zero(std::uint64_t w) { return __builtin_ctzll(w); }
    static int countl_zero(std::uint64_t w) { return __builtin_clzll(w); }

    void trim() {
        while (!words_.empty() && words_.back() == 0) words_.pop_back();
    }

    void xor_shifted(const TauPoly& src, int k) {
        std::size_t wshift = static_cast<std::size_t>(k) / 64;
        int bshift = k % 64;
        std::size_t need = src.words_.size() + wshift + 1;
        if (words_.size() < need) words_.resize(need, 0);
        for (std::size_t i = 0; i < src.words_.size(); ++i) {
            words_[i + wshift] ^= src.words_[i] << bshift;
            if (bshift != 0) words_[i + wshift + 1] ^= src.words_[i] >> (64 - bshift);
        }
    }
};

// a = q*b + r with deg(r) < deg(b).
inline std::pair<TauPoly, TauPoly> scalar_divmod(const TauPoly& a, const TauPoly& b) {
    if (b.is_zero()) throw UsageError("scalar_divmod: division by zero");
    TauPoly q, r = a;
    int db = b.degree();
    while (!r.is_zero() && r.degree() >= db) {
        int shift = r.degree() - db;
        q.set(shift);
        r += b.shifted(shift);
    }
    return {q, r};
}

inline bool divides(const TauPoly& d, const TauPoly& a) {
    if (a.is_zero()) return true;
    if (d.is_zero()) return false;
    return scalar_divmod(a, d).second.is_zero();
}

inline TauPoly gcd(TauPoly a, TauPoly b) {
    while (!b.is_zero()) {
        TauPoly r = scalar_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

class TauMatrix {
  public:
    TauMatrix() : rows_(0), cols_(0) {}
    TauMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols) {}

    static TauMatrix identity(int n) {
        TauMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = TauPoly::one();
        return m;
    }

    static TauMatrix from_columns(const std::vector<std::vector<TauPoly>>& cols, int rows) {
        TauMatrix m(rows, static_cast<int>(cols.size()));
        for (int j = 0; j < m.cols(); ++j) {
            if (static_cast<int>(cols[j].size()) != rows)
                throw UsageError("from_columns: column length mismatch");
            for (int i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    TauPoly& at(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
    const TauPoly& at(int i, int j) const { return e_[static_cast<std::size_t>(i) * cols_ + j]; }

    std::vector<TauPoly> column(int j) const {
        std::vector<TauPoly> c(rows_);
        for (int i = 0; i < rows_; ++i) c[i] = at(i, j);
        return c;
    }

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
    }

    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
    }

    // row[dst] += q * row[src]
    void add_row_multiple(int dst, int src, const TauPoly& q) {
        for (int k = 0; k < cols_; ++k) at(dst, k) += q * at(src, k);
    }

    // col[dst] += q * col[src]
    void add_col_multiple(int dst, int src, const TauPoly& q) {
        for (int k = 0; k < rows_; ++k) at(k, dst) += q * at(k, src);
    }

    friend TauMatrix operator*(const TauMatrix& a, const TauMatrix& b) {
        if (a.cols() != b.rows()) throw UsageError("matrix product: dimension mismatch");
        TauMatrix r(a.rows(), b.cols());
        for (int i = 0; i < a.rows(); ++i)
            for (int k = 0; k < a.cols(); ++k) {
                if (a.at(i, k).is_zero()) continue;
                for (int j = 0; j < b.cols(); ++j) r.at(i, j) += a.at(i, k) * b.at(k, j);
            }
        return r;
    }

    std::vector<TauPoly> apply(const std::vector<TauPoly>& v) const {
        if (static_cast<int>(v.size()) != cols_) throw UsageError("matrix apply: dimension mismatch");
        std::vector<TauPoly> r(rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] += at(i, j) * v[j];
        return r;
    }

    friend bool operator==(const TauMatrix& a, const TauMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }

  private:
    int rows_, cols_;
    std::vector<TauPoly> e_;
};

// U * m * V = D with U, V invertible (determinant 1) and D diagonal with
// d_i | d_{i+1}.  Uinv and Vinv are maintained alongside so callers can move
// between coordinates without solving.
struct SmithForm {
    TauMatrix U, D, V, Uinv, Vinv;
    int rank = 0;

    TauPoly diag(int i) const {
        if (i < 0 || i >= D.rows() || i >= D.cols()) return TauPoly::zero();
        return D.at(i, i);
    }
};

namespace detail {

inline bool find_pivot(const TauMatrix& d, int k, int& pi, int& pj) {
    int best = -1;
    for (int i = k; i < d.rows(); ++i)
        for (int j = k; j < d.cols(); ++j) {
            const TauPoly& e = d.at(i, j);
            if (e.is_zero()) continue;
            if (best < 0 || e.degree() < best) {
                best = e.degree();
                pi = i;
                pj = j;
            }
        }
    return best >= 0;
}

}  // namespace detail

inline SmithForm smith_normal_form(const TauMatrix& m) {
    SmithForm s;
    s.D = m;
    s.U = TauMatrix::identity(m.rows());
    s.Uinv = TauMatrix::identity(m.rows());
    s.V = TauMatrix::identity(m.cols());
    s.Vinv = TauMatrix::identity(m.cols());
    TauMatrix& D = s.D;

    auto row_op = [&](int dst, int src, const TauPoly& q) {
        D.add_row_multiple(dst, src, q);
        s.U.add_row_multiple(dst, src, q);
        s.Uinv.add_col_multiple(src, dst, q);  // inverse op applied on the right
    };
    auto col_op = [&](int dst, int src, const TauPoly& q) {
        D.add_col_multiple(dst, src, q);
        s.V.add_col_multiple(dst, src, q);
        s.Vinv.add_row_multiple(src, dst, q);
    };
    auto row_swap = [&](int i, int j) {
        D.swap_rows(i, j);
        s.U.swap_rows(i, j);
        s.Uinv.swap_cols(i, j);
    };
    auto col_swap = [&](int i, int j) {
        D.swap_cols(i, j);
        s.V.swap_cols(i, j);
        s.Vinv.swap_rows(i, j);
    };

    // Clears row k and column k around the minimal-degree pivot; returns
    // false when the remaining submatrix is zero.
    auto clear_at = [&](int k) -> bool {
        int pi = 0, pj = 0;
        if (!detail::find_pivot(D, k, pi, pj)) return false;
        row_swap(k, pi);
        col_swap(k, pj);
        for (;;) {
            bool dirty = false;
            for (int i = k + 1; i < D.rows(); ++i) {
                if (D.at(i, k).is_zero()) continue;
                TauPoly q = scalar_divmod(D.at(i, k), D.at(k, k)).first;
                row_op(i, k, q);
                if (!D.at(i, k).is_zero()) dirty = true;  // remainder stayed behind
            }
            for (int j = k + 1; j < D.cols(); ++j) {
                if (D.at(k, j).is_zero()) continue;
                TauPoly q = scalar_divmod(D.at(k, j), D.at(k, k)).first;
                col_op(j, k, q);
                if (!D.at(k, j).is_zero()) dirty = true;
            }
            if (!dirty) break;
            int qi = 0, qj = 0;
            detail::find_pivot(D, k, qi, qj);
            row_swap(k, qi);
            col_swap(k, qj);
        }
        return true;
    };

    int n = std::min(m.rows(), m.cols());
    int rank = 0;
    while (rank < n && clear_at(rank)) ++rank;
    s.rank = rank;

    // Enforce the divisibility chain d_i | d_{i+1}: fold an offending d_j
    // into column i and rediagonalize from i (the new pivot is the gcd).
    for (;;) {
        int vi = -1, vj = -1;
        for (int i = 0; i + 1 < rank && vi < 0; ++i)
            for (int j = i + 1; j < rank; ++j)
                if (!divides(D.at(i, i), D.at(j, j))) {
                    vi = i;
                    vj = j;
                    break;
                }
        if (vi < 0) break;
        col_op(vi, vj, TauPoly::one());
        for (int k = vi; k < rank; ++k) clear_at(k);
    }
    return s;
}

inline int rank(const TauMatrix& m) { return smith_normal_form(m).rank; }

// Some x with m * x = target, or nullopt when the system is unsolvable.
inline std::optional<std::vector<TauPoly>> solve_linear(const TauMatrix& m,
                                                        const std::vector<TauPoly>& target) {
    if (static_cast<int>(target.size()) != m.rows())
        throw UsageError("solve_linear: target length must equal row count");
    SmithForm s = smith_normal_form(m);
    std::vector<TauPoly> z = s.U.apply(target);
    std::vector<TauPoly> y(m.cols());
    for (int i = 0; i < m.rows(); ++i) {
        TauPoly d = s.diag(i);
        if (!d.is_zero()) {
            auto [q, r] = scalar_divmod(z[i], d);
            if (!r.is_zero()) return std::nullopt;
            y[i] = q;
        } else if (!z[i].is_zero()) {
            return std::nullopt;
        }
    }
    return s.V.apply(y);
}

// Columns spanning ker(m), in ambient coordinates.  The kernel of a map of
// free F2[tau]-modules is free; the returned columns are a basis.
inline std::vector<std::vector<TauPoly>> kernel_basis(const TauMatrix& m) {
    SmithForm s = smith_normal_form(m);
    std::vector<std::vector<TauPoly>> out;
    for (int j = s.rank; j < m.cols(); ++j) out.push_back(s.V.column(j));
    return out;
}

// A cyclic summand of a subquotient: M2 (tau-free) or M2/tau^k.
class TorsionModule {
  public:
    static TorsionModule free() { return TorsionModule(-1); }
    static TorsionModule torsion(int k) {
        if (k < 1) throw UsageError("torsion order must be >= 1");
        return TorsionModule(k);
    }

    bool is_free() const { return order_ < 0; }
    int tau_order() const {
        if (is_free()) throw UsageError("tau_order of a free summand");
        return order_;
    }

    std::string to_string() const { return is_free() ? "M2" : "M2/tau^" + std::to_string(order_); }

    friend bool operator==(const TorsionModule& a, const TorsionModule& b) { return a.order_ == b.order_; }
    friend bool operator!=(const TorsionModule& a, const TorsionModule& b) { return !(a == b); }

  private:
    explicit TorsionModule(int order) : order_(order) {}
    int order_;
};

struct CyclicSummand {
    TorsionModule type;
    std::vector<TauPoly> rep;  // representative cycle in ambient coordinates
};

// Truncation mod tau^k (F2-linear), used for canonical torsion coordinates.
inline TauPoly truncated(const TauPoly& p, int k) {
    TauPoly r;
    for (int i = 0; i < k && i <= p.degree(); ++i)
        if (p.coeff(i)) r.set(i);
    return r;
}

// span(cycles)/span(boundaries) inside F2[tau]^ambient_dim, with coordinate
// maps retained so arbitrary ambient elements can be reduced to canonical
// summand coordinates afterwards.
//
// Boundaries must lie in the span of the cycles; a violation is the d^2 != 0
// symptom and raises DataError.  Weight-graded input always yields tau-power
// invariant factors; anything else is rejected.
class SubquotientView {
  public:
    SubquotientView(const std::vector<std::vector<TauPoly>>& cycles,
                    const std::vector<std::vector<TauPoly>>& boundaries, int ambient_dim)
        : dim_(ambient_dim) {
        sc_ = smith_normal_form(TauMatrix::from_columns(cycles, ambient_dim));
        r_ = sc_.rank;

        // Free basis of span(cycles): f_i = d_i * (Uinv e_i), i < r.
        basis_.resize(static_cast<std::size_t>(r_));
        for (int i = 0; i < r_; ++i) {
            basis_[static_cast<std::size_t>(i)] = sc_.Uinv.column(i);
            for (auto& e : basis_[static_cast<std::size_t>(i)]) e = e * sc_.diag(i);
        }

        TauMatrix A(r_, static_cast<int>(boundaries.size()));
        for (int j = 0; j < A.cols(); ++j) {
            auto alpha = cycle_coords(boundaries[j]);
            if (!alpha)
                throw DataError("subquotient: boundary not contained in cycles (d^2 != 0 symptom)");
            for (int i = 0; i < r_; ++i) A.at(i, j) = (*alpha)[static_cast<std::size_t>(i)];
        }
        sa_ = smith_normal_form(A);

        for (int i = 0; i < r_; ++i) {
            TauPoly d = sa_.diag(i);
            if (d.is_unit()) continue;  // trivial summand
            std::vector<TauPoly> rep(static_cast<std::size_t>(dim_));
            for (int m = 0; m < r_; ++m) {
                const TauPoly& c = sa_.Uinv.at(m, i);
                if (c.is_zero()) continue;
                for (int row = 0; row < dim_; ++row)
                    rep[static_cast<std::size_t>(row)] += c * basis_[static_cast<std::size_t>(m)][static_cast<std::size_t>(row)];
            }
            if (d.is_zero())
                summands_.push_back({TorsionModule::free(), std::move(rep)});
            else if (d.is_tau_power())
                summands_.push_back({TorsionModule::torsion(d.degree()), std::move(rep)});
            else
                throw DataError("subquotient: invariant factor " + d.to_string() +
                                " is not a tau power (input not weight-graded)");
            gen_rows_.push_back(i);
        }
    }

    int ambient_dim() const { return dim_; }
    const std::vector<CyclicSummand>& summands() const { return summands_; }

    // Coordinates of an ambient column on the free basis of span(cycles);
    // nullopt when the column is outside that span.
    std::optional<std::vector<TauPoly>> cycle_coords(const std::vector<TauPoly>& x) const {
        if (static_cast<int>(x.size()) != dim_) throw UsageError("subquotient: column length mismatch");
        std::vector<TauPoly> z = sc_.U.apply(x);
        std::vector<TauPoly> alpha(static_cast<std::size_t>(r_));
        for (int i = 0; i < dim_; ++i) {
            if (i < r_) {
                auto [q, rem] = scalar_divmod(z[static_cast<std::size_t>(i)], sc_.diag(i));
                if (!rem.is_zero()) return std::nullopt;
                alpha[static_cast<std::size_t>(i)] = q;
            } else if (!z[static_cast<std::size_t>(i)].is_zero()) {
                return std::nullopt;
            }
        }
        return alpha;
    }

    // Canonical coordinates on the summands (torsion coordinates reduced mod
    // tau^k); nullopt when the element is not in span(cycles).
    std::optional<std::vector<TauPoly>> coords(const std::vector<TauPoly>& x) const {
        auto alpha = cycle_coords(x);
        if (!alpha) return std::nullopt;
        std::vector<TauPoly> beta(summands_.size());
        for (std::size_t j = 0; j < summands_.size(); ++j) {
            int row = gen_rows_[j];
            TauPoly b;
            for (int m = 0; m < r_; ++m)
                if (!sa_.U.at(row, m).is_zero())
                    b += sa_.U.at(row, m) * (*alpha)[static_cast<std::size_t>(m)];
            if (!summands_[j].type.is_free()) b = truncated(b, summands_[j].type.tau_order());
            beta[j] = b;
        }
        return beta;
    }

    bool is_zero_class(const std::vector<TauPoly>& x) const {
        auto beta = coords(x);
        if (!beta) throw DataError("subquotient: element not in span of cycles");
        for (const auto& b : *beta)
            if (!b.is_zero()) return false;
        return true;
    }

  private:
    int dim_;
    int r_ = 0;
    SmithForm sc_, sa_;
    std::vector<std::vector<TauPoly>> basis_;
    std::vector<CyclicSummand> summands_;
    std::vector<int> gen_rows_;  // summand index -> row in the SNF of A
};

inline std::vector<CyclicSummand> subquotient_decomposition(
    const std::vector<std::vector<TauPoly>>& cycles,
    const std::vector<std::vector<TauPoly>>& boundaries, int ambient_dim) {
    return SubquotientView(cycles, boundaries, ambient_dim).summands();
}

}  // namespace mmf
