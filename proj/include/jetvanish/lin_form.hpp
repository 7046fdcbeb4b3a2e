// Sparse linear (affine) forms in a registry of unknowns. One constraint row
// of the assembled systems is a LinForm with zero constant.
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "jetvanish/fields.hpp"

namespace jv {

template <class F>
struct LinForm {
    using elem = typename F::elem;
    std::vector<std::pair<std::uint32_t, elem>> coeffs;  // sorted by unknown id, no zeros
    elem constant{};

    bool is_zero(const F& f) const { return coeffs.empty() && f.is_zero(constant); }
    std::size_t size() const { return coeffs.size(); }
};

template <class F>
LinForm<F> lin_single(const F& f, std::uint32_t id, typename F::elem c) {
    LinForm<F> out;
    out.constant = f.zero();
    if (!f.is_zero(c)) out.coeffs.push_back({id, c});
    return out;
}

template <class F>
LinForm<F> lin_const(const F& f, typename F::elem c) {
    LinForm<F> out;
    out.constant = c;
    return out;
}

template <class F>
LinForm<F> lin_add(const F& f, const LinForm<F>& a, const LinForm<F>& b) {
    LinForm<F> out;
    out.constant = f.add(a.constant, b.constant);
    out.coeffs.reserve(a.coeffs.size() + b.coeffs.size());
    std::size_t i = 0, j = 0;
    while (i < a.coeffs.size() && j < b.coeffs.size()) {
        if (a.coeffs[i].first < b.coeffs[j].first) out.coeffs.push_back(a.coeffs[i++]);
        else if (b.coeffs[j].first < a.coeffs[i].first) out.coeffs.push_back(b.coeffs[j++]);
        else {
            auto c = f.add(a.coeffs[i].second, b.coeffs[j].second);
            if (!f.is_zero(c)) out.coeffs.push_back({a.coeffs[i].first, c});
            ++i; ++j;
        }
    }
    for (; i < a.coeffs.size(); ++i) out.coeffs.push_back(a.coeffs[i]);
    for (; j < b.coeffs.size(); ++j) out.coeffs.push_back(b.coeffs[j]);
    return out;
}

template <class F>
LinForm<F> lin_scale(const F& f, const LinForm<F>& a, typename F::elem c) {
    LinForm<F> out;
    out.constant = f.mul(a.constant, c);
    if (f.is_zero(c)) return out;
    out.coeffs.reserve(a.coeffs.size());
    for (auto& t : a.coeffs) {
        auto v = f.mul(t.second, c);
        if (!f.is_zero(v)) out.coeffs.push_back({t.first, v});
    }
    return out;
}

// Evaluates at a full assignment (vector indexed by unknown id).
template <class F>
typename F::elem lin_eval(const F& f, const LinForm<F>& a,
                          const std::vector<typename F::elem>& assignment) {
    auto acc = a.constant;
    for (auto& [id, c] : a.coeffs) {
        if (id >= assignment.size()) throw usage_error("lin_eval: assignment does not cover unknown");
        acc = f.add(acc, f.mul(c, assignment[id]));
    }
    return acc;
}

template <class F>
bool lin_equal(const F& f, const LinForm<F>& a, const LinForm<F>& b) {
    if (!f.equal(a.constant, b.constant) || a.coeffs.size() != b.coeffs.size()) return false;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        if (a.coeffs[i].first != b.coeffs[i].first || !f.equal(a.coeffs[i].second, b.coeffs[i].second))
            return false;
    return true;
}

}  // namespace jv
