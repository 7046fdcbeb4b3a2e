// Concrete Fermat-type defining equations, their derivative packs, the
// quotient-ring normal form for the compact case, and the divisibility
// predicate that drives constraint extraction.
//
// Compact case: R = 1 + x^d + y^d + z^d + S(x) on the affine chart, with the
// reduction y^d = -(1 + x^d + z^d + S(x)) giving every element of
// C[x,y,z]/(R) a unique representative of y-degree < d. The constrained
// partial is R_z = d z^{d-1}.
//
// Logarithmic case: R = 1 + x^d + y^d + S(x) in C[x,y]; the ambient ring is
// already a polynomial ring, so the normal form is the identity. The
// constrained partial is R_y = d y^{d-1}.
#pragma once

#include <optional>
#include <vector>

#include "jetvanish/param_poly.hpp"
#include "jetvanish/sparse_poly.hpp"

namespace jv {

enum class CaseKind { compact, logarithmic };

struct DeformTerm {
    Monomial mono;         // ambient affine monomial (x only; see build checks)
    std::int64_t coeff;
};

struct SurfaceSpec {
    CaseKind kind;
    int d;
    std::vector<DeformTerm> deformation;

    int num_vars() const { return kind == CaseKind::compact ? 3 : 2; }
    // Variable whose pure-power partial is the constrained divisor.
    int constrained_var() const { return kind == CaseKind::compact ? 2 : 1; }
    // Variable eliminated by the quotient-ring reduction (compact only).
    int reduction_var() const { return 1; }
};

// Default deformation: x^{floor(d/2)} in the compact case, x^6 in the
// logarithmic case.
std::vector<DeformTerm> default_deformation(CaseKind kind, int d);

template <class F>
struct DerivativePack {
    SparsePoly<F> R, Rx, Ry, Rz;
    SparsePoly<F> Rxx, Rxy, Rxz, Ryy, Ryz, Rzz;  // z-derivatives empty in the log case
};

// Validates the deformation against the stated invariants and throws
// usage_error on violation. Checked by build_scenario.
void validate_spec(const SurfaceSpec& spec);

template <class F>
SparsePoly<F> defining_polynomial(const F& f, const SurfaceSpec& spec);

// Builds R and all first partials, plus all second partials in the compact
// case. Postcondition: every entry equals poly_partial applied to R, and the
// constrained-divisor partial is a pure power times d.
template <class F>
DerivativePack<F> build_scenario(const F& f, const SurfaceSpec& spec);

// Cache of the powers of the reduction right-hand side
// (-(1 + x^d + z^d + S(x)))^q used by the normal form.
template <class F>
struct ReductionCache {
    const F* field = nullptr;
    SurfaceSpec spec;
    std::vector<SparsePoly<F>> powers;  // powers[q] = rhs^q

    ReductionCache() = default;
    ReductionCache(const F& f, const SurfaceSpec& s) : field(&f), spec(s) {
        powers.push_back(poly_const(f, f.one()));
    }
    const SparsePoly<F>& power(unsigned q) {
        while (powers.size() <= q) {
            if (powers.size() == 1) {
                SparsePoly<F> rhs = defining_polynomial(*field, spec);
                // rhs = -(R - y^d) = y^d - R
                SparsePoly<F> yd = poly_monomial(*field, Monomial(0, spec.d, 0), field->one());
                powers.push_back(poly_sub(*field, yd, rhs));
            } else {
                powers.push_back(poly_mul(*field, powers.back(), powers[1]));
            }
        }
        return powers[q];
    }
};

// Unique representative modulo R with y-degree < d (compact); identity in the
// logarithmic case. Idempotent.
template <class F>
SparsePoly<F> normal_form(const F& f, const SparsePoly<F>& p, const SurfaceSpec& spec,
                          ReductionCache<F>* cache = nullptr);
template <class F>
ParamPoly<F> normal_form(const F& f, const ParamPoly<F>& p, const SurfaceSpec& spec,
                         ReductionCache<F>* cache = nullptr);

// True iff every term of F has constrained-variable exponent >= (d-1) * i.
// F must already be in normal form (compact) or raw (log). The constant
// factor d in the constrained partial is immaterial here.
template <class F>
bool divides_power(const SparsePoly<F>& p, int i, const SurfaceSpec& spec) {
    if (i <= 0) throw usage_error("divides_power: power must be positive");
    int v = spec.constrained_var();
    int need = (spec.d - 1) * i;
    for (auto& [m, c] : p.terms)
        if (static_cast<int>(m.e[v]) < need) return false;
    return true;
}

}  // namespace jv
