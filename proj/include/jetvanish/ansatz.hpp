// Enumeration of the undetermined polynomial families of the most general
// negatively twisted invariant jet differential, with the degree bounds
// forced by the required vanishing order along the divisor at infinity.
//
// Families are indexed by the Wronskian power k (A=0, B=1, C=2, D=3, E=4)
// and an inner index j; the first-jet weight of a term is m - 3k, the
// source-chart denominator exponent is m - 2k. Compact sections exist for
// families A..D and weighted order m <= 11; plane-complement sections for
// A..E and m <= 14.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jetvanish/param_poly.hpp"
#include "jetvanish/scenario.hpp"

namespace jv {

struct JetTermKey {
    int k = 0;  // family / Wronskian power: 0=A, 1=B, 2=C, 3=D, 4=E
    int j = 0;  // index within the family

    friend bool operator==(const JetTermKey&, const JetTermKey&) = default;
    friend auto operator<=>(const JetTermKey&, const JetTermKey&) = default;
};

inline char family_letter(int k) { return "ABCDE"[k]; }

struct UnknownInfo {
    std::uint32_t id;
    JetTermKey key;
    Monomial mono;
};

inline int max_weighted_order(CaseKind kind) { return kind == CaseKind::compact ? 11 : 14; }
inline int max_family(CaseKind kind) { return kind == CaseKind::compact ? 3 : 4; }

// Exponents of (x', second first-jet symbol) carried by a family term: the
// second symbol is y' in the compact case and the logarithmic jet coordinate
// L = R'/R in the plane case. Their sum is m - 3k.
inline std::pair<int, int> first_jet_split(CaseKind kind, const JetTermKey& key, int m) {
    if (kind == CaseKind::compact) return {m - 3 * key.k - key.j, key.j};  // (x', y')
    return {m - 3 * key.k - key.j, key.j};                                 // (x', L)
}

// Source-chart denominator exponent of the constrained partial: m - 2k.
int source_denominator_exponent(const JetTermKey& key, int m);

// Maximal admissible total degree of the family member (k, j); a negative
// value means the member is absent. Throws on invalid (family, j).
int degree_bound(const SurfaceSpec& spec, int family_k, int j, int m, int t);

template <class F>
struct Ansatz {
    CaseKind kind;
    int m = 0;
    int t = 0;
    int jet_order = 2;
    std::vector<std::pair<JetTermKey, ParamPoly<F>>> terms;  // ordered by key
    std::vector<UnknownInfo> registry;                       // ordered by id

    std::size_t num_unknowns() const { return registry.size(); }
    const ParamPoly<F>* find(const JetTermKey& key) const {
        for (auto& [k, p] : terms)
            if (k == key) return &p;
        return nullptr;
    }
};

// Builds the full unknown structure for weighted order m, twist t and jet
// order 1 or 2. Unknown ids run consecutively in (k, j, monomial) order.
template <class F>
Ansatz<F> build_ansatz(const F& f, const SurfaceSpec& spec, int m, int t, int jet_order = 2);

// Ordered CSV (id, family, j, exponent tuple) of the unknown registry.
template <class F>
std::string registry_csv(const Ansatz<F>& ansatz, int num_vars);

}  // namespace jv
