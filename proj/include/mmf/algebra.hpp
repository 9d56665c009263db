#pragma once

// Finitely presented trigraded commutative algebras over F2[tau].  The
// f-grading makes every tridegree a finite F2[tau]-module problem, so each
// (s,f) column is handled by exact Smith-normal-form linear algebra; no
// Groebner machinery is needed.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmf/errors.hpp"
#include "mmf/grading.hpp"
#include "mmf/taulin.hpp"

namespace mmf {

struct StemWindow {
    int max_stem = -1;  // relations asserted complete for stems <= max_stem
};

struct Relation {
    Expression expr;  // homogeneous, meaning "= 0"
    std::string source;
};

struct Presentation {
    AtomTable atoms;
    std::vector<Relation> relations;
    std::optional<StemWindow> window;

    bool in_window(int s) const { return window && s <= window->max_stem; }

    void check() const {
        for (int i = 0; i < atoms.size(); ++i)
            if (atoms.degree(i).f < 1)
                throw DataError("atom " + atoms.name(i) + " has filtration < 1; tridegrees would be infinite");
        for (const auto& r : relations) {
            if (r.expr.is_zero()) throw DataError("zero relation");
            degree_of(r.expr, atoms);  // throws when inhomogeneous
        }
    }
};

// All tau-free monomials with stem s and filtration f (any weight), in
// canonical descending order.  Finite because every atom has f >= 1.
inline std::vector<Monomial> enumerate_tau_free(const AtomTable& t, int s, int f) {
    std::vector<Monomial> out;
    if (s < 0 || f < 0) return out;
    bool stems_nonneg = true;
    for (int i = 0; i < t.size(); ++i)
        if (t.degree(i).s < 0) stems_nonneg = false;

    std::vector<std::pair<int, int>> acc;
    auto rec = [&](auto&& self, int idx, int rem_s, int rem_f) -> void {
        if (idx == t.size()) {
            if (rem_s == 0 && rem_f == 0) {
                Monomial m;
                for (auto& [i, e] : acc) m = m * Monomial::atom(i, e);
                out.push_back(m);
            }
            return;
        }
        TriDegree d = t.degree(idx);
        for (int e = 0; e * d.f <= rem_f; ++e) {
            if (stems_nonneg && e * d.s > rem_s) break;
            if (e > 0) acc.push_back({idx, e});
            self(self, idx + 1, rem_s - e * d.s, rem_f - e * d.f);
            if (e > 0) acc.pop_back();
        }
    };
    rec(rec, 0, s, f);
    std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) { return b < a; });
    return out;
}

// All monomials (tau power included) of exactly the given tridegree.
inline std::vector<Monomial> enumerate_monomials(const AtomTable& t, TriDegree deg) {
    std::vector<Monomial> out;
    for (const auto& m : enumerate_tau_free(t, deg.s, deg.f)) {
        int k = m.degree(t).w - deg.w;
        if (k >= 0) out.push_back(m.with_tau(k));
    }
    return out;
}

struct Summand {
    TorsionModule type;
    TriDegree degree;  // tridegree of the generating class
    Expression rep;    // representative (tau-free lead possible; exact class generator)
};

// The (s,f) column of a presented algebra or of a spectral-sequence page:
// ambient tau-free monomial basis plus a subquotient with coordinates.
class GradedPiece {
  public:
    GradedPiece(const AtomTable& t, int s, int f, std::vector<Monomial> ambient,
                const std::vector<std::vector<TauPoly>>& cycles,
                const std::vector<std::vector<TauPoly>>& boundaries)
        : table_(&t), s_(s), f_(f), ambient_(std::move(ambient)),
          view_(cycles, boundaries, static_cast<int>(ambient_.size())) {}

    int stem() const { return s_; }
    int fil() const { return f_; }
    const std::vector<Monomial>& ambient() const { return ambient_; }
    const SubquotientView& view() const { return view_; }

    std::vector<TauPoly> column_of(const Expression& x) const {
        std::vector<TauPoly> col(ambient_.size());
        for (const auto& term : x.terms()) {
            Monomial stripped = term.tau_stripped();
            auto it = std::find(ambient_.begin(), ambient_.end(), stripped);
            if (it == ambient_.end())
                throw UsageError("column_of: monomial " + term.to_string(*table_) +
                                 " is not in the (s,f)=(" + std::to_string(s_) + "," +
                                 std::to_string(f_) + ") ambient basis");
            col[static_cast<std::size_t>(it - ambient_.begin())] += TauPoly::tau_power(term.tau());
        }
        return col;
    }

    Expression expression_of(const std::vector<TauPoly>& col) const {
        Expression e;
        for (std::size_t i = 0; i < ambient_.size(); ++i) {
            const TauPoly& p = col[i];
            for (int k = 0; k <= p.degree(); ++k)
                if (p.coeff(k)) e += Expression::term(ambient_[i].with_tau(k));
        }
        return e;
    }

    std::vector<Summand> summands() const {
        std::vector<Summand> out;
        for (const auto& cs : view_.summands()) {
            Expression rep = expression_of(cs.rep);
            TriDegree deg = degree_of(rep, *table_);  // graded input keeps reps homogeneous
            out.push_back({cs.type, deg, rep});
        }
        return out;
    }

  private:
    const AtomTable* table_;
    int s_, f_;
    std::vector<Monomial> ambient_;
    SubquotientView view_;
};

class QuotientAlgebra {
  public:
    explicit QuotientAlgebra(Presentation pres) : pres_(std::move(pres)) {
        pres_.check();
        for (const auto& r : pres_.relations) rel_degrees_.push_back(degree_of(r.expr, pres_.atoms));
    }

    const Presentation& presentation() const { return pres_; }
    const AtomTable& atoms() const { return pres_.atoms; }

    // Columns of all relation multiples landing in the (s,f) ambient basis.
    std::vector<std::vector<TauPoly>> relation_columns(int s, int f,
                                                       const std::vector<Monomial>& ambient) const {
        std::vector<std::vector<TauPoly>> cols;
        for (std::size_t ri = 0; ri < pres_.relations.size(); ++ri) {
            TriDegree rd = rel_degrees_[ri];
            if (rd.s > s || rd.f > f) continue;
            for (const auto& mu : enumerate_tau_free(pres_.atoms, s - rd.s, f - rd.f)) {
                Expression prod = mu * pres_.relations[ri].expr;
                std::vector<TauPoly> col(ambient.size());
                bool ok = true;
                for (const auto& term : prod.terms()) {
                    Monomial stripped = term.tau_stripped();
                    auto it = std::find(ambient.begin(), ambient.end(), stripped);
                    if (it == ambient.end()) {
                        ok = false;
                        break;
                    }
                    col[static_cast<std::size_t>(it - ambient.begin())] += TauPoly::tau_power(term.tau());
                }
                if (!ok)
                    throw Error("relation multiple leaves the ambient basis (inconsistent enumeration)");
                cols.push_back(std::move(col));
            }
        }
        return cols;
    }

    GradedPiece tower(int s, int f) const {
        std::vector<Monomial> ambient = enumerate_tau_free(pres_.atoms, s, f);
        int n = static_cast<int>(ambient.size());
        std::vector<std::vector<TauPoly>> cycles;
        for (int i = 0; i < n; ++i) {
            std::vector<TauPoly> e(static_cast<std::size_t>(n));
            e[static_cast<std::size_t>(i)] = TauPoly::one();
            cycles.push_back(std::move(e));
        }
        auto boundaries = relation_columns(s, f, ambient);
        return GradedPiece(pres_.atoms, s, f, std::move(ambient), cycles, boundaries);
    }

    struct BasisResult {
        std::vector<Summand> summands;  // generators at exactly the requested degree
        bool complete = false;          // inside the declared relation window
    };

    BasisResult graded_basis(TriDegree deg) const {
        GradedPiece piece = tower(deg.s, deg.f);
        BasisResult r;
        r.complete = pres_.in_window(deg.s);
        for (auto& s : piece.summands())
            if (s.degree == deg) r.summands.push_back(std::move(s));
        return r;
    }

    struct NormalForm {
        bool zero = false;
        bool complete = false;          // false = partial knowledge, not a certified zero
        Expression reduced;             // canonical representative
        std::vector<TauPoly> coords;    // canonical summand coordinates of the (s,f) tower
    };

    NormalForm normal_form(const Expression& x) const {
        NormalForm nf;
        if (x.is_zero()) {
            nf.zero = true;
            nf.complete = true;
            return nf;
        }
        TriDegree deg = degree_of(x, pres_.atoms);
        GradedPiece piece = tower(deg.s, deg.f);
        auto beta = piece.view().coords(piece.column_of(x));
        if (!beta) throw Error("normal_form: element escaped its own tower");
        nf.coords = *beta;
        nf.complete = pres_.in_window(deg.s);
        nf.zero = true;
        for (const auto& b : nf.coords)
            if (!b.is_zero()) nf.zero = false;
        auto reps = piece.summands();
        for (std::size_t j = 0; j < reps.size(); ++j)
            if (!nf.coords[j].is_zero()) nf.reduced += nf.coords[j] * reps[j].rep;
        return nf;
    }

  private:
    Presentation pres_;
    std::vector<TriDegree> rel_degrees_;
};

}  // namespace mmf
