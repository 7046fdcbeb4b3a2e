// Polynomials whose coefficients are sparse linear forms in unknowns: the
// carriers of the undetermined families through transition and reduction.
// Specializing every unknown yields a SparsePoly.
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "jetvanish/lin_form.hpp"
#include "jetvanish/sparse_poly.hpp"

namespace jv {

template <class F>
struct ParamPoly {
    using elem = typename F::elem;
    std::vector<std::pair<Monomial, LinForm<F>>> terms;  // sorted ascending, no zero forms

    bool is_zero() const { return terms.empty(); }
    std::size_t size() const { return terms.size(); }
    int degree_in(int var) const {
        int d = -1;
        for (auto& [m, lf] : terms) d = std::max(d, static_cast<int>(m.e[var]));
        return d;
    }
};

template <class F>
ParamPoly<F> param_from_terms(const F& f, std::vector<std::pair<Monomial, LinForm<F>>> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first.pack() < b.first.pack(); });
    ParamPoly<F> out;
    out.terms.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.terms.empty() && out.terms.back().first == t.first)
            out.terms.back().second = lin_add(f, out.terms.back().second, t.second);
        else
            out.terms.push_back(std::move(t));
        if (!out.terms.empty() && out.terms.back().second.is_zero(f)) out.terms.pop_back();
    }
    return out;
}

template <class F>
ParamPoly<F> param_add(const F& f, const ParamPoly<F>& a, const ParamPoly<F>& b) {
    ParamPoly<F> out;
    out.terms.reserve(a.terms.size() + b.terms.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms.size() && j < b.terms.size()) {
        std::uint64_t ka = a.terms[i].first.pack(), kb = b.terms[j].first.pack();
        if (ka < kb) out.terms.push_back(a.terms[i++]);
        else if (kb < ka) out.terms.push_back(b.terms[j++]);
        else {
            auto lf = lin_add(f, a.terms[i].second, b.terms[j].second);
            if (!lf.is_zero(f)) out.terms.push_back({a.terms[i].first, std::move(lf)});
            ++i; ++j;
        }
    }
    for (; i < a.terms.size(); ++i) out.terms.push_back(a.terms[i]);
    for (; j < b.terms.size(); ++j) out.terms.push_back(b.terms[j]);
    return out;
}

// Product with a scalar polynomial. Works through a flat triple buffer
// (monomial key, unknown id, coefficient) to keep allocation churn low on the
// large ansatz polynomials; the constant component rides along under a
// sentinel id.
template <class F>
ParamPoly<F> param_mul_poly(const F& f, const ParamPoly<F>& a, const SparsePoly<F>& s) {
    if (a.is_zero() || s.is_zero()) return {};
    constexpr std::uint32_t kConstId = 0xffffffffu;
    struct Triple {
        std::uint64_t key;
        std::uint32_t id;
        typename F::elem c;
    };
    std::size_t est = 0;
    for (auto& t : a.terms) est += t.second.coeffs.size() + 1;
    std::vector<Triple> acc;
    acc.reserve(est * s.terms.size());
    for (auto& [ms, cs] : s.terms) {
        for (auto& [ma, lf] : a.terms) {
            std::uint64_t key = (ma * ms).pack();
            for (auto& [id, c] : lf.coeffs) acc.push_back({key, id, f.mul(c, cs)});
            if (!f.is_zero(lf.constant)) acc.push_back({key, kConstId, f.mul(lf.constant, cs)});
        }
    }
    std::sort(acc.begin(), acc.end(), [](const Triple& x, const Triple& y) {
        return x.key != y.key ? x.key < y.key : x.id < y.id;
    });
    ParamPoly<F> out;
    std::size_t i = 0;
    while (i < acc.size()) {
        std::uint64_t key = acc[i].key;
        LinForm<F> lf;
        lf.constant = f.zero();
        while (i < acc.size() && acc[i].key == key) {
            auto c = acc[i].c;
            std::uint32_t id = acc[i].id;
            ++i;
            while (i < acc.size() && acc[i].key == key && acc[i].id == id) {
                c = f.add(c, acc[i].c);
                ++i;
            }
            if (f.is_zero(c)) continue;
            if (id == kConstId) lf.constant = c;
            else lf.coeffs.push_back({id, c});
        }
        if (!lf.is_zero(f)) out.terms.push_back({Monomial::unpack(key), std::move(lf)});
    }
    return out;
}

// Exact substitution of every unknown; linear in the assignment.
template <class F>
SparsePoly<F> param_specialize(const F& f, const ParamPoly<F>& a,
                               const std::vector<typename F::elem>& assignment) {
    SparsePoly<F> out;
    out.terms.reserve(a.terms.size());
    for (auto& [m, lf] : a.terms) {
        auto v = lin_eval(f, lf, assignment);
        if (!f.is_zero(v)) out.terms.push_back({m, v});
    }
    return out;
}

template <class F>
bool param_equal(const F& f, const ParamPoly<F>& a, const ParamPoly<F>& b) {
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i)
        if (!(a.terms[i].first == b.terms[i].first) || !lin_equal(f, a.terms[i].second, b.terms[i].second))
            return false;
    return true;
}

}  // namespace jv
