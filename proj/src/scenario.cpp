#include "jetvanish/scenario.hpp"

namespace jv {

std::vector<DeformTerm> default_deformation(CaseKind kind, int d) {
    if (kind == CaseKind::compact) return {DeformTerm{Monomial(d / 2, 0, 0), 1}};
    // x^6 for the shipped degrees; clipped to the admissible degree for small d
    return {DeformTerm{Monomial(std::min(6, d - 1), 0, 0), 1}};
}

void validate_spec(const SurfaceSpec& spec) {
    if (spec.d < 2) throw usage_error("scenario: degree d must be at least 2");
    int max_deg = spec.kind == CaseKind::compact ? spec.d : spec.d - 1;
    for (auto& t : spec.deformation) {
        if (t.coeff == 0) throw usage_error("scenario: zero deformation coefficient");
        if (t.mono.e[1] != 0)
            throw usage_error("scenario: deformation touches the reduction variable y, "
                              "which breaks the unique normal form");
        if (spec.kind == CaseKind::compact && t.mono.e[2] != 0)
            throw usage_error("scenario: deformation touches z, which breaks the pure-power "
                              "form of the constrained partial derivative");
        if (spec.kind == CaseKind::logarithmic && t.mono.e[2] != 0)
            throw usage_error("scenario: plane case has no variable z");
        if (static_cast<int>(t.mono.total_degree()) > max_deg)
            throw usage_error("scenario: deformation degree exceeds the admissible bound");
        if (static_cast<int>(t.mono.total_degree()) == spec.d && t.coeff == -1)
            throw usage_error("scenario: degree-d deformation with coefficient -1 degenerates "
                              "the leading form");
    }
}

template <class F>
SparsePoly<F> defining_polynomial(const F& f, const SurfaceSpec& spec) {
    std::vector<std::pair<Monomial, typename F::elem>> terms;
    terms.push_back({Monomial{}, f.one()});
    terms.push_back({Monomial(spec.d, 0, 0), f.one()});
    terms.push_back({Monomial(0, spec.d, 0), f.one()});
    if (spec.kind == CaseKind::compact) terms.push_back({Monomial(0, 0, spec.d), f.one()});
    for (auto& t : spec.deformation) terms.push_back({t.mono, f.from_int(t.coeff)});
    return poly_from_terms(f, std::move(terms));
}

template <class F>
DerivativePack<F> build_scenario(const F& f, const SurfaceSpec& spec) {
    validate_spec(spec);
    DerivativePack<F> pack;
    pack.R = defining_polynomial(f, spec);
    pack.Rx = poly_partial(f, pack.R, 0);
    pack.Ry = poly_partial(f, pack.R, 1);
    pack.Rxx = poly_partial(f, pack.Rx, 0);
    pack.Rxy = poly_partial(f, pack.Rx, 1);
    pack.Ryy = poly_partial(f, pack.Ry, 1);
    if (spec.kind == CaseKind::compact) {
        pack.Rz = poly_partial(f, pack.R, 2);
        pack.Rxz = poly_partial(f, pack.Rx, 2);
        pack.Ryz = poly_partial(f, pack.Ry, 2);
        pack.Rzz = poly_partial(f, pack.Rz, 2);
    }
    // The constrained partial must be d * v^{d-1}; guaranteed by validate_spec
    // unless p divides d, in which case it vanishes entirely mod p.
    const SparsePoly<F>& k = spec.kind == CaseKind::compact ? pack.Rz : pack.Ry;
    if (k.size() > 1) throw internal_error("build_scenario: constrained partial is not a pure power");
    return pack;
}

namespace {

template <class F, class Carrier, class ScaleFn, class BuildFn>
Carrier nf_impl(const F& f, const Carrier& p, const SurfaceSpec& spec,
                ReductionCache<F>* cache, ScaleFn&& scale_into, BuildFn&& build) {
    if (spec.kind == CaseKind::logarithmic) return p;
    const int d = spec.d;
    bool reduced = true;
    for (auto& t : p.terms)
        if (t.first.e[1] >= d) { reduced = false; break; }
    if (reduced) return p;

    std::optional<ReductionCache<F>> local;
    if (!cache) {
        local.emplace(f, spec);
        cache = &*local;
    }
    using Value = std::decay_t<decltype(p.terms.front().second)>;
    std::vector<std::pair<Monomial, Value>> acc;
    acc.reserve(p.terms.size());
    for (auto& [m, v] : p.terms) {
        if (m.e[1] < d) {
            acc.push_back({m, v});
            continue;
        }
        unsigned q = m.e[1] / d, r = m.e[1] % d;
        Monomial base = m;
        base.e[1] = static_cast<std::uint16_t>(r);
        const SparsePoly<F>& rhs_pow = cache->power(q);
        scale_into(acc, base, v, rhs_pow);
    }
    // One pass suffices: rhs powers have no y at all, so rewritten terms keep
    // y-degree r < d.
    return build(std::move(acc));
}

}  // namespace

template <class F>
SparsePoly<F> normal_form(const F& f, const SparsePoly<F>& p, const SurfaceSpec& spec,
                          ReductionCache<F>* cache) {
    return nf_impl(
        f, p, spec, cache,
        [&f](auto& acc, const Monomial& base, const typename F::elem& v, const SparsePoly<F>& rhs) {
            for (auto& [rm, rc] : rhs.terms) acc.push_back({base * rm, f.mul(v, rc)});
        },
        [&f](auto&& acc) { return poly_from_terms(f, std::move(acc)); });
}

template <class F>
ParamPoly<F> normal_form(const F& f, const ParamPoly<F>& p, const SurfaceSpec& spec,
                         ReductionCache<F>* cache) {
    return nf_impl(
        f, p, spec, cache,
        [&f](auto& acc, const Monomial& base, const LinForm<F>& v, const SparsePoly<F>& rhs) {
            for (auto& [rm, rc] : rhs.terms) acc.push_back({base * rm, lin_scale(f, v, rc)});
        },
        [&f](auto&& acc) { return param_from_terms(f, std::move(acc)); });
}

template SparsePoly<GF> defining_polynomial<GF>(const GF&, const SurfaceSpec&);
template SparsePoly<QQ> defining_polynomial<QQ>(const QQ&, const SurfaceSpec&);
template SparsePoly<ZZ> defining_polynomial<ZZ>(const ZZ&, const SurfaceSpec&);
template DerivativePack<GF> build_scenario<GF>(const GF&, const SurfaceSpec&);
template DerivativePack<QQ> build_scenario<QQ>(const QQ&, const SurfaceSpec&);
template DerivativePack<ZZ> build_scenario<ZZ>(const ZZ&, const SurfaceSpec&);
template SparsePoly<GF> normal_form<GF>(const GF&, const SparsePoly<GF>&, const SurfaceSpec&, ReductionCache<GF>*);
template SparsePoly<QQ> normal_form<QQ>(const QQ&, const SparsePoly<QQ>&, const SurfaceSpec&, ReductionCache<QQ>*);
template SparsePoly<ZZ> normal_form<ZZ>(const ZZ&, const SparsePoly<ZZ>&, const SurfaceSpec&, ReductionCache<ZZ>*);
template ParamPoly<GF> normal_form<GF>(const GF&, const ParamPoly<GF>&, const SurfaceSpec&, ReductionCache<GF>*);
template ParamPoly<QQ> normal_form<QQ>(const QQ&, const ParamPoly<QQ>&, const SurfaceSpec&, ReductionCache<QQ>*);
template ParamPoly<ZZ> normal_form<ZZ>(const ZZ&, const ParamPoly<ZZ>&, const SurfaceSpec&, ReductionCache<ZZ>*);

}  // namespace jv
