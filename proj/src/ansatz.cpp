#include "jetvanish/ansatz.hpp"

namespace jv {

int source_denominator_exponent(const JetTermKey& key, int m) {
    return m - 2 * key.k;
}

int degree_bound(const SurfaceSpec& spec, int family_k, int j, int m, int t) {
    if (family_k < 0 || family_k > max_family(spec.kind))
        throw usage_error("degree_bound: family not admissible for this case");
    if (j < 0 || j > m - 3 * family_k)
        throw usage_error("degree_bound: index j out of range for the family");
    int d = spec.d, k = family_k;
    if (spec.kind == CaseKind::compact) {
        // Pole orders at infinity: x' and y' contribute 2 each, the Wronskian
        // 3; the denominator contributes (m-2k)(d-1).
        return (m - 2 * k) * (d - 1) - 2 * (m - 3 * k) - 3 * k - t;
    }
    // Logarithmic case: x' contributes 2, L contributes 1, the logarithmic
    // Wronskian 4.
    return (m - 2 * k) * (d - 1) - 2 * (m - 3 * k - j) - j - 4 * k - t;
}

template <class F>
Ansatz<F> build_ansatz(const F& f, const SurfaceSpec& spec, int m, int t, int jet_order) {
    if (jet_order != 1 && jet_order != 2)
        throw usage_error("build_ansatz: jet order must be 1 or 2");
    if (m < 1 || m > max_weighted_order(spec.kind))
        throw usage_error("build_ansatz: weighted order " + std::to_string(m) +
                          " outside the proved structure range for this case");
    if (t < 0 || (t == 0 && jet_order != 1))
        throw usage_error("build_ansatz: twist must be >= 1 (t = 0 only in the 1-jet mode)");

    Ansatz<F> out;
    out.kind = spec.kind;
    out.m = m;
    out.t = t;
    out.jet_order = jet_order;

    int kmax = jet_order == 1 ? 0 : std::min(max_family(spec.kind), m / 3);
    std::uint32_t next_id = 0;
    for (int k = 0; k <= kmax; ++k) {
        for (int j = 0; j <= m - 3 * k; ++j) {
            int bound = degree_bound(spec, k, j, m, t);
            if (bound < 0) continue;  // absent member, no unknowns
            std::vector<int> caps;
            if (spec.kind == CaseKind::compact) caps = {-1, spec.d - 1, -1};
            auto basis = monomial_basis(spec.num_vars(), bound,
                                        caps.empty() ? nullptr : &caps);
            ParamPoly<F> poly;
            poly.terms.reserve(basis.size());
            for (auto& mono : basis) {
                poly.terms.push_back({mono, lin_single(f, next_id, f.one())});
                out.registry.push_back({next_id, JetTermKey{k, j}, mono});
                ++next_id;
            }
            out.terms.push_back({JetTermKey{k, j}, std::move(poly)});
        }
    }
    return out;
}

template <class F>
std::string registry_csv(const Ansatz<F>& ansatz, int num_vars) {
    std::string out = "id,family,j";
    for (int v = 0; v < num_vars; ++v) out += std::string(",e_") + "xyz"[v];
    out += "\n";
    for (auto& u : ansatz.registry) {
        out += std::to_string(u.id);
        out += ',';
        out += family_letter(u.key.k);
        out += ',';
        out += std::to_string(u.key.j);
        for (int v = 0; v < num_vars; ++v) {
            out += ',';
            out += std::to_string(u.mono.e[v]);
        }
        out += "\n";
    }
    return out;
}

template Ansatz<GF> build_ansatz<GF>(const GF&, const SurfaceSpec&, int, int, int);
template Ansatz<QQ> build_ansatz<QQ>(const QQ&, const SurfaceSpec&, int, int, int);
template Ansatz<ZZ> build_ansatz<ZZ>(const ZZ&, const SurfaceSpec&, int, int, int);
template std::string registry_csv<GF>(const Ansatz<GF>&, int);
template std::string registry_csv<QQ>(const Ansatz<QQ>&, int);
template std::string registry_csv<ZZ>(const Ansatz<ZZ>&, int);

}  // namespace jv
