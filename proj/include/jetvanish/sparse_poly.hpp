// Sparse multivariate polynomials with exact coefficients. Terms are kept in
// canonical (graded lex, ascending) order with no zero coefficients, so equal
// polynomials serialize identically. Values are immutable after construction
// in the sense that all operations return fresh polynomials.
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jetvanish/fields.hpp"
#include "jetvanish/monomial.hpp"

namespace jv {

template <class F>
struct SparsePoly {
    using elem = typename F::elem;
    std::vector<std::pair<Monomial, elem>> terms;  // sorted ascending, no zeros

    bool is_zero() const { return terms.empty(); }
    std::size_t size() const { return terms.size(); }

    int total_degree() const {
        int d = -1;
        for (auto& [m, c] : terms) d = std::max(d, static_cast<int>(m.total_degree()));
        return d;
    }
    int degree_in(int var) const {
        int d = -1;
        for (auto& [m, c] : terms) d = std::max(d, static_cast<int>(m.e[var]));
        return d;
    }
    // Minimal exponent of `var` over all terms; 0 for the zero polynomial.
    int min_exponent(int var) const {
        int d = -1;
        for (auto& [m, c] : terms)
            d = (d < 0) ? m.e[var] : std::min(d, static_cast<int>(m.e[var]));
        return d < 0 ? 0 : d;
    }

    bool equal(const F& f, const SparsePoly& o) const {
        if (terms.size() != o.terms.size()) return false;
        for (std::size_t i = 0; i < terms.size(); ++i)
            if (!(terms[i].first == o.terms[i].first) || !f.equal(terms[i].second, o.terms[i].second))
                return false;
        return true;
    }
};

// Sorts, combines equal monomials, drops zeros.
template <class F>
SparsePoly<F> poly_from_terms(const F& f, std::vector<std::pair<Monomial, typename F::elem>> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first.pack() < b.first.pack(); });
    SparsePoly<F> out;
    out.terms.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.terms.empty() && out.terms.back().first == t.first)
            out.terms.back().second = f.add(out.terms.back().second, t.second);
        else
            out.terms.push_back(std::move(t));
        if (!out.terms.empty() && f.is_zero(out.terms.back().second)) out.terms.pop_back();
    }
    return out;
}

template <class F>
SparsePoly<F> poly_zero() { return SparsePoly<F>{}; }

template <class F>
SparsePoly<F> poly_const(const F& f, typename F::elem c) {
    SparsePoly<F> p;
    if (!f.is_zero(c)) p.terms.push_back({Monomial{}, c});
    return p;
}

template <class F>
SparsePoly<F> poly_monomial(const F& f, Monomial m, typename F::elem c) {
    SparsePoly<F> p;
    if (!f.is_zero(c)) p.terms.push_back({m, c});
    return p;
}

template <class F>
SparsePoly<F> poly_add(const F& f, const SparsePoly<F>& a, const SparsePoly<F>& b) {
    SparsePoly<F> out;
    out.terms.reserve(a.terms.size() + b.terms.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms.size() && j < b.terms.size()) {
        std::uint64_t ka = a.terms[i].first.pack(), kb = b.terms[j].first.pack();
        if (ka < kb) out.terms.push_back(a.terms[i++]);
        else if (kb < ka) out.terms.push_back(b.terms[j++]);
        else {
            auto c = f.add(a.terms[i].second, b.terms[j].second);
            if (!f.is_zero(c)) out.terms.push_back({a.terms[i].first, c});
            ++i; ++j;
        }
    }
    for (; i < a.terms.size(); ++i) out.terms.push_back(a.terms[i]);
    for (; j < b.terms.size(); ++j) out.terms.push_back(b.terms[j]);
    return out;
}

template <class F>
SparsePoly<F> poly_neg(const F& f, const SparsePoly<F>& a) {
    SparsePoly<F> out = a;
    for (auto& t : out.terms) t.second = f.neg(t.second);
    return out;
}

template <class F>
SparsePoly<F> poly_sub(const F& f, const SparsePoly<F>& a, const SparsePoly<F>& b) {
    return poly_add(f, a, poly_neg(f, b));
}

template <class F>
SparsePoly<F> poly_scale(const F& f, const SparsePoly<F>& a, typename F::elem c) {
    if (f.is_zero(c)) return {};
    SparsePoly<F> out;
    out.terms.reserve(a.terms.size());
    for (auto& t : a.terms) {
        auto v = f.mul(t.second, c);
        if (!f.is_zero(v)) out.terms.push_back({t.first, v});
    }
    return out;
}

// Exact product. Term count is at most |a| * |b|.
template <class F>
SparsePoly<F> poly_mul(const F& f, const SparsePoly<F>& a, const SparsePoly<F>& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<std::pair<Monomial, typename F::elem>> acc;
    acc.reserve(a.terms.size() * b.terms.size());
    for (auto& ta : a.terms)
        for (auto& tb : b.terms)
            acc.push_back({ta.first * tb.first, f.mul(ta.second, tb.second)});
    return poly_from_terms(f, std::move(acc));
}

template <class F>
SparsePoly<F> poly_pow(const F& f, const SparsePoly<F>& a, unsigned e) {
    SparsePoly<F> r = poly_const(f, f.one());
    for (unsigned i = 0; i < e; ++i) r = poly_mul(f, r, a);
    return r;
}

// Formal partial derivative with respect to variable `var` (0 = x, 1 = y, 2 = z).
template <class F>
SparsePoly<F> poly_partial(const F& f, const SparsePoly<F>& a, int var) {
    if (var < 0 || var > 2) throw usage_error("poly_partial: variable index out of range");
    SparsePoly<F> out;
    out.terms.reserve(a.terms.size());
    std::vector<std::pair<Monomial, typename F::elem>> acc;
    for (auto& t : a.terms) {
        unsigned e = t.first.e[var];
        if (e == 0) continue;
        Monomial m = t.first;
        m.e[var] = static_cast<std::uint16_t>(e - 1);
        auto c = f.mul(t.second, f.from_int(static_cast<std::int64_t>(e)));
        if (!f.is_zero(c)) acc.push_back({m, c});
    }
    return poly_from_terms(f, std::move(acc));
}

// Shifts every term by the monomial `m` (multiplication by a monomial).
template <class F>
SparsePoly<F> poly_shift(const SparsePoly<F>& a, const Monomial& m) {
    SparsePoly<F> out = a;
    for (auto& t : out.terms) t.first = t.first * m;
    return out;
}

template <class F>
typename F::elem poly_eval(const F& f, const SparsePoly<F>& a,
                           const std::array<typename F::elem, 3>& pt) {
    // Power tables per variable keep this linear in the term count.
    std::array<std::vector<typename F::elem>, 3> pows;
    for (int v = 0; v < 3; ++v) {
        int dmax = a.degree_in(v);
        pows[v].resize(static_cast<std::size_t>(std::max(dmax, 0)) + 1);
        pows[v][0] = f.one();
        for (int i = 1; i <= dmax; ++i) pows[v][i] = f.mul(pows[v][i - 1], pt[v]);
    }
    auto acc = f.zero();
    for (auto& [m, c] : a.terms) {
        auto v = c;
        for (int k = 0; k < 3; ++k)
            if (m.e[k]) v = f.mul(v, pows[k][m.e[k]]);
        acc = f.add(acc, v);
    }
    return acc;
}

// Canonical text: terms in descending order as "c * x^a y^b [z^c]", joined by
// " + "; the zero polynomial prints "0". Identical polynomials produce
// identical bytes.
template <class F>
std::string poly_text(const F& f, const SparsePoly<F>& a, int num_vars) {
    if (a.is_zero()) return "0";
    std::string out;
    for (auto it = a.terms.rbegin(); it != a.terms.rend(); ++it) {
        if (!out.empty()) out += " + ";
        out += f.to_string(it->second);
        out += " * ";
        out += monomial_text(it->first, num_vars);
    }
    return out;
}

// Parses the canonical text format (tolerating signed coefficients and "n/d"
// rationals). Inverse of poly_text on canonical output.
template <class F>
SparsePoly<F> poly_parse(const F& f, const std::string& text, int num_vars);

}  // namespace jv
