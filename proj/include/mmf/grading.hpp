#pragma once

// Tridegrees (stem, filtration, weight), named atoms, monomials and
// homogeneous mod-2 expressions, plus a parser for the table notation used
// by the datasets: atom names, `^` exponents, `+` for sums, whitespace
// separated multiplication, and parenthesized subexpressions that multiply
// out (characteristic 2, strictly commutative).

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmf/errors.hpp"
#include "mmf/taulin.hpp"

namespace mmf {

struct TriDegree {
    int s = 0;  // stem
    int f = 0;  // Adams filtration
    int w = 0;  // motivic weight

    friend TriDegree operator+(TriDegree a, TriDegree b) { return {a.s + b.s, a.f + b.f, a.w + b.w}; }
    TriDegree& operator+=(TriDegree o) {
        s += o.s;
        f += o.f;
        w += o.w;
        return *this;
    }
    friend TriDegree operator*(int k, TriDegree d) { return {k * d.s, k * d.f, k * d.w}; }
    friend bool operator==(TriDegree a, TriDegree b) { return a.s == b.s && a.f == b.f && a.w == b.w; }
    friend bool operator!=(TriDegree a, TriDegree b) { return !(a == b); }
    friend bool operator<(TriDegree a, TriDegree b) {
        if (a.s != b.s) return a.s < b.s;
        if (a.f != b.f) return a.f < b.f;
        return a.w < b.w;
    }

    std::string to_string() const {
        return "(" + std::to_string(s) + "," + std::to_string(f) + "," + std::to_string(w) + ")";
    }
};

// tau sits in (0,0,-1) and is the scalar of the whole engine; it is handled
// separately from the atom table.
inline constexpr TriDegree kTauDegree{0, 0, -1};

struct Atom {
    std::string name;
    TriDegree degree;
};

class AtomTable {
  public:
    AtomTable() = default;

    int add(std::string name, TriDegree degree) {
        if (name == "tau") throw UsageError("tau is built in and cannot be an atom");
        if (index_of(name)) throw UsageError("duplicate atom name: " + name);
        int idx = static_cast<int>(atoms_.size());
        atoms_.push_back({name, degree});
        lookup_[name] = idx;
        // TeX-ish and plain spellings both resolve: h_0 <-> h0.
        std::string plain = name;
        plain.erase(std::remove(plain.begin(), plain.end(), '_'), plain.end());
        if (plain != name) lookup_[plain] = idx;
        return idx;
    }

    std::optional<int> index_of(std::string_view name) const {
        auto it = lookup_.find(std::string(name));
        if (it == lookup_.end()) return std::nullopt;
        return it->second;
    }

    int size() const { return static_cast<int>(atoms_.size()); }
    const Atom& at(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
    const std::string& name(int i) const { return at(i).name; }
    TriDegree degree(int i) const { return at(i).degree; }

    // Display rank controls factor order when printing a monomial; defaults
    // to insertion order.
    void set_display_order(const std::vector<std::string>& names) {
        display_rank_.assign(atoms_.size(), 0);
        for (std::size_t r = 0; r < names.size(); ++r) {
            auto idx = index_of(names[r]);
            if (!idx) throw UsageError("display order names unknown atom " + names[r]);
            display_rank_[static_cast<std::size_t>(*idx)] = static_cast<int>(r);
        }
    }

    int display_rank(int i) const {
        if (display_rank_.empty()) return i;
        return display_rank_[static_cast<std::size_t>(i)];
    }

    // The generator degrees forced by the tables: every composite degree in
    // the datasets must be reproduced by these.
    static AtomTable mmf() {
        AtomTable t;
        t.add("h_0", {0, 1, 0});
        t.add("h_1", {1, 1, 1});
        t.add("h_2", {3, 1, 2});
        t.add("c", {8, 3, 5});
        t.add("P", {8, 4, 4});
        t.add("u", {11, 3, 7});
        t.add("a", {12, 3, 6});
        t.add("d", {14, 4, 8});
        t.add("n", {15, 3, 8});
        t.add("e", {17, 4, 10});
        t.add("g", {20, 4, 12});
        t.add("Delta", {24, 4, 12});
        t.set_display_order({"Delta", "P", "h_0", "h_1", "h_2", "c", "u", "a", "d", "n", "e", "g"});
        return t;
    }

  private:
    std::vector<Atom> atoms_;
    std::map<std::string, int> lookup_;
    std::vector<int> display_rank_;
};

class Monomial {
  public:
    Monomial() = default;

    static Monomial unit() { return {}; }

    static Monomial atom(int index, int exponent = 1) {
        Monomial m;
        if (exponent < 0) throw UsageError("negative exponent");
        if (exponent > 0) m.factors_.push_back({index, exponent});
        return m;
    }

    static Monomial tau_power(int k) {
        Monomial m;
        m.tau_ = k;
        return m;
    }

    bool is_unit() const { return factors_.empty() && tau_ == 0; }
    bool is_tau_free() const { return tau_ == 0; }
    int tau() const { return tau_; }
    const std::vector<std::pair<int, int>>& factors() const { return factors_; }

    int exponent_of(int atom_index) const {
        for (auto& [i, e] : factors_)
            if (i == atom_index) return e;
        return 0;
    }

    int total_atom_exponent() const {
        int t = 0;
        for (auto& [i, e] : factors_) t += e;
        return t;
    }

    Monomial tau_stripped() const {
        Monomial m = *this;
        m.tau_ = 0;
        return m;
    }

    Monomial with_tau(int k) const {
        Monomial m = *this;
        m.tau_ = k;
        return m;
    }

    TriDegree degree(const AtomTable& t) const {
        TriDegree d = tau_ * kTauDegree;
        for (auto& [i, e] : factors_) d += e * t.degree(i);
        return d;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r;
        r.tau_ = a.tau_ + b.tau_;
        std::size_t i = 0, j = 0;
        while (i < a.factors_.size() || j < b.factors_.size()) {
            if (j == b.factors_.size() || (i < a.factors_.size() && a.factors_[i].first < b.factors_[j].first))
                r.factors_.push_back(a.factors_[i++]);
            else if (i == a.factors_.size() || b.factors_[j].first < a.factors_[i].first)
                r.factors_.push_back(b.factors_[j++]);
            else {
                r.factors_.push_back({a.factors_[i].first, a.factors_[i].second + b.factors_[j].second});
                ++i;
                ++j;
            }
        }
        return r;
    }

    // Whole division including the tau budget; nullopt when not divisible.
    std::optional<Monomial> divided_by(const Monomial& d) const {
        if (tau_ < d.tau_) return std::nullopt;
        Monomial r;
        r.tau_ = tau_ - d.tau_;
        std::size_t i = 0, j = 0;
        while (i < factors_.size() || j < d.factors_.size()) {
            if (j == d.factors_.size() ||
                (i < factors_.size() && factors_[i].first < d.factors_[j].first)) {
                r.factors_.push_back(factors_[i++]);
            } else if (i == factors_.size() || d.factors_[j].first < factors_[i].first) {
                return std::nullopt;  // divisor has an atom we lack
            } else {
                int e = factors_[i].second - d.factors_[j].second;
                if (e < 0) return std::nullopt;
                if (e > 0) r.factors_.push_back({factors_[i].first, e});
                ++i;
                ++j;
            }
        }
        return r;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.tau_ == b.tau_ && a.factors_ == b.factors_;
    }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

    // Canonical term order: lexicographic on atom exponents in table order,
    // tau power as the last key.  Compatible with multiplication, so leading
    // terms are multiplicative.
    friend bool operator<(const Monomial& a, const Monomial& b) {
        std::size_t i = 0, j = 0;
        while (i < a.factors_.size() && j < b.factors_.size()) {
            if (a.factors_[i].first != b.factors_[j].first)
                return a.factors_[i].first > b.factors_[j].first;  // missing atom = exponent 0
            if (a.factors_[i].second != b.factors_[j].second)
                return a.factors_[i].second < b.factors_[j].second;
            ++i;
            ++j;
        }
        if (i < a.factors_.size()) return false;  // a has an extra atom -> a larger
        if (j < b.factors_.size()) return true;
        return a.tau_ < b.tau_;
    }

    std::string to_string(const AtomTable& t) const {
        std::vector<std::pair<int, int>> order;  // (display rank, factor idx)
        for (std::size_t k = 0; k < factors_.size(); ++k)
            order.push_back({t.display_rank(factors_[k].first), static_cast<int>(k)});
        std::sort(order.begin(), order.end());
        std::string s;
        auto append = [&s](const std::string& piece) {
            if (!s.empty()) s += " ";
            s += piece;
        };
        if (tau_ == 1)
            append("tau");
        else if (tau_ > 1)
            append("tau^" + std::to_string(tau_));
        for (auto& [rank, k] : order) {
            auto& [i, e] = factors_[static_cast<std::size_t>(k)];
            append(e == 1 ? t.name(i) : t.name(i) + "^" + std::to_string(e));
        }
        if (s.empty()) s = "1";
        return s;
    }

  private:
    std::vector<std::pair<int, int>> factors_;  // (atom index, exponent > 0), sorted by index
    int tau_ = 0;
};

// A mod-2 combination of monomials; terms kept sorted descending (leading
// term first) with cancelled pairs removed.
class Expression {
  public:
    Expression() = default;

    static Expression zero() { return {}; }

    static Expression term(Monomial m) {
        Expression e;
        e.terms_.push_back(std::move(m));
        return e;
    }

    bool is_zero() const { return terms_.empty(); }
    const std::vector<Monomial>& terms() const { return terms_; }

    const Monomial& lead() const {
        if (terms_.empty()) throw UsageError("lead of zero expression");
        return terms_.front();
    }

    Expression& operator+=(const Expression& o) {
        std::vector<Monomial> merged;
        merged.reserve(terms_.size() + o.terms_.size());
        std::size_t i = 0, j = 0;
        auto desc = [](const Monomial& a, const Monomial& b) { return b < a; };
        while (i < terms_.size() && j < o.terms_.size()) {
            if (terms_[i] == o.terms_[j]) {
                ++i;
                ++j;  // characteristic 2: pairs cancel
            } else if (desc(terms_[i], o.terms_[j])) {
                merged.push_back(terms_[i++]);
            } else {
                merged.push_back(o.terms_[j++]);
            }
        }
        while (i < terms_.size()) merged.push_back(terms_[i++]);
        while (j < o.terms_.size()) merged.push_back(o.terms_[j++]);
        terms_ = std::move(merged);
        return *this;
    }

    friend Expression operator+(Expression a, const Expression& b) {
        a += b;
        return a;
    }

    friend Expression operator*(const Expression& a, const Expression& b) {
        Expression r;
        for (const auto& ma : a.terms_) {
            Expression partial;
            for (const auto& mb : b.terms_) partial += Expression::term(ma * mb);
            r += partial;
        }
        return r;
    }

    friend Expression operator*(const Monomial& m, const Expression& e) {
        return Expression::term(m) * e;
    }

    // Scalar action of F2[tau].
    friend Expression operator*(const TauPoly& p, const Expression& e) {
        Expression r;
        for (int k = 0; k <= p.degree(); ++k)
            if (p.coeff(k)) r += Expression::term(Monomial::tau_power(k)) * e;
        return r;
    }

    friend bool operator==(const Expression& a, const Expression& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Expression& a, const Expression& b) { return !(a == b); }
    friend bool operator<(const Expression& a, const Expression& b) {
        return std::lexicographical_compare(a.terms_.begin(), a.terms_.end(), b.terms_.begin(),
                                            b.terms_.end());
    }

    std::string to_string(const AtomTable& t) const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& m : terms_) {
            if (!s.empty()) s += " + ";
            s += m.to_string(t);
        }
        return s;
    }

  private:
    std::vector<Monomial> terms_;
};

struct HomogeneityWitness {
    bool homogeneous = true;
    TriDegree degree{};                           // common degree when homogeneous
    std::pair<Monomial, Monomial> counterexample;  // two terms of different degree otherwise
};

inline HomogeneityWitness is_homogeneous(const Expression& x, const AtomTable& t) {
    HomogeneityWitness w;
    if (x.is_zero()) return w;
    w.degree = x.terms().front().degree(t);
    for (const auto& m : x.terms()) {
        if (m.degree(t) != w.degree) {
            w.homogeneous = false;
            w.counterexample = {x.terms().front(), m};
            return w;
        }
    }
    return w;
}

inline TriDegree degree_of(const Monomial& m, const AtomTable& t) { return m.degree(t); }

inline TriDegree degree_of(const Expression& x, const AtomTable& t) {
    if (x.is_zero()) throw UsageError("degree_of: zero expression has no degree");
    auto w = is_homogeneous(x, t);
    if (!w.homogeneous)
        throw DataError("inhomogeneous expression: term " +
                        w.counterexample.first.to_string(t) + " has degree " +
                        w.counterexample.first.degree(t).to_string() + " but term " +
                        w.counterexample.second.to_string(t) + " has degree " +
                        w.counterexample.second.degree(t).to_string());
    return w.degree;
}

namespace detail {

struct Tokenizer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    bool done() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return text[pos];
    }

    // An atom-ish token: name characters, optionally followed by ^exponent.
    std::pair<std::string, int> next_factor() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) throw ParseError("unexpected character '" + std::string(1, text[pos]) +
                                           "' in expression \"" + std::string(text) + "\"");
        std::string name(text.substr(start, pos - start));
        int exp = 1;
        skip_ws();
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            skip_ws();
            std::size_t estart = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == estart)
                throw ParseError("malformed exponent after '" + name + "' in \"" + std::string(text) + "\"");
            exp = std::stoi(std::string(text.substr(estart, pos - estart)));
            if (exp <= 0) throw ParseError("exponent must be positive after '" + name + "'");
        }
        return {name, exp};
    }
};

}  // namespace detail

// Parses table notation into a canonical Expression.  "0" and the empty
// string denote zero; "1" is the unit monomial.  Parenthesized groups
// multiply out.  Rejects unknown atom names and (by default) inhomogeneous
// sums, each with a diagnostic naming the offender.
inline Expression parse_expression(std::string_view text, const AtomTable& atoms,
                                   bool enforce_homogeneous = true) {
    detail::Tokenizer tk{text};

    // term := factor+ ; expr := term (+ term)*
    // Implemented with explicit recursion over parenthesized groups.
    struct Parser {
        detail::Tokenizer& tk;
        const AtomTable& atoms;

        Expression parse_expr() {
            Expression sum = parse_term();
            while (!tk.done() && tk.peek() == '+') {
                ++tk.pos;
                sum += parse_term();
            }
            return sum;
        }

        Expression parse_term() {
            Expression prod = Expression::term(Monomial::unit());
            bool any = false;
            while (!tk.done() && tk.peek() != '+' && tk.peek() != ')') {
                any = true;
                if (tk.peek() == '(') {
                    ++tk.pos;
                    Expression inner = parse_expr();
                    if (tk.done() || tk.peek() != ')')
                        throw ParseError("missing ')' in \"" + std::string(tk.text) + "\"");
                    ++tk.pos;
                    prod = prod * inner;
                    continue;
                }
                auto [name, exp] = tk.next_factor();
                if (name == "0" && exp == 1) {
                    prod = Expression::zero();
                    continue;
                }
                if (name == "1" && exp == 1) continue;
                Expression factor;
                if (name == "tau") {
                    factor = Expression::term(Monomial::tau_power(exp));
                } else {
                    auto idx = atoms.index_of(name);
                    if (!idx)
                        throw ParseError("unknown atom '" + name + "' in \"" + std::string(tk.text) + "\"");
                    factor = Expression::term(Monomial::atom(*idx, exp));
                }
                prod = prod * factor;
            }
            if (!any) throw ParseError("empty term in \"" + std::string(tk.text) + "\"");
            return prod;
        }
    };

    if (tk.done()) return Expression::zero();
    Parser p{tk, atoms};
    Expression e = p.parse_expr();
    if (!tk.done()) throw ParseError("trailing input at '" + std::string(1, tk.peek()) + "' in \"" +
                                     std::string(text) + "\"");
    if (enforce_homogeneous && !e.is_zero()) {
        auto w = is_homogeneous(e, atoms);
        if (!w.homogeneous)
            throw ParseError("inhomogeneous sum in \"" + std::string(text) + "\": " +
                             w.counterexample.first.to_string(atoms) + " at " +
                             w.counterexample.first.degree(atoms).to_string() + " vs " +
                             w.counterexample.second.to_string(atoms) + " at " +
                             w.counterexample.second.degree(atoms).to_string());
    }
    return e;
}

inline std::string serialize(const Expression& e, const AtomTable& t) { return e.to_string(t); }

}  // namespace mmf
