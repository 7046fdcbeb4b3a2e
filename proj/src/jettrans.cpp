#include "jetvanish/jettrans.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include "jetvanish/parallel.hpp"

namespace jv {

std::string jet_monomial_text(const JetMonomial& jm, CaseKind kind) {
    if (kind == CaseKind::compact)
        return "x'^" + std::to_string(jm.u) + " z'^" + std::to_string(jm.w) +
               " W^" + std::to_string(jm.k);
    return "y'^" + std::to_string(jm.w) + " L^" + std::to_string(jm.u) +
           " D^" + std::to_string(jm.k);
}

namespace {

std::int64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::int64_t factorial(int n) {
    std::int64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace

template <class F>
FirstJetRule<F> substitute_first_jet(const F& f, const SurfaceSpec& spec,
                                     const DerivativePack<F>& pack) {
    FirstJetRule<F> rule;
    auto minus_one = poly_const(f, f.neg(f.one()));
    if (spec.kind == CaseKind::compact) {
        // y' = -(R_x/R_y) x' - (R_z/R_y) z'
        rule.pick_u = {poly_neg(f, pack.Rx), 0, 0, 1};
        rule.pick_w = {minus_one, 1, 0, 1};
    } else {
        // x' = -y' R_y/R_x + R L / R_x
        rule.pick_u = {poly_const(f, f.one()), 0, 1, 1};
        rule.pick_w = {minus_one, 1, 0, 1};
    }
    return rule;
}

template <class F>
WronskianRule<F> substitute_wronskian(const F& f, const SurfaceSpec& spec,
                                      const DerivativePack<F>& pack) {
    WronskianRule<F> rule;
    auto c = [&](std::int64_t v) { return f.from_int(v); };
    auto scaled = [&](const SparsePoly<F>& p, std::int64_t v) { return poly_scale(f, p, c(v)); };
    if (spec.kind == CaseKind::compact) {
        // W_yx = -(R_z/R_y) W_zx
        //        + z'z'x' (R_zz/R_y - 2 R_z R_yz/R_y^2 + R_z^2 R_yy/R_y^3)
        //        + z'x'x' (2R_xz/R_y - 2R_z R_xy/R_y^2 - 2R_x R_yz/R_y^2 + 2R_x R_z R_yy/R_y^3)
        //        + x'x'x' (R_xx/R_y - 2R_x R_xy/R_y^2 + R_x^2 R_yy/R_y^3)
        rule.wmain = {poly_const(f, f.neg(f.one())), 1, 0, 1};
        rule.tail[1] = {{pack.Rzz, 0, 0, 1},
                        {scaled(pack.Ryz, -2), 1, 0, 2},
                        {pack.Ryy, 2, 0, 3}};
        rule.tail[2] = {{scaled(pack.Rxz, 2), 0, 0, 1},
                        {scaled(pack.Rxy, -2), 1, 0, 2},
                        {scaled(poly_mul(f, pack.Rx, pack.Ryz), -2), 0, 0, 2},
                        {scaled(poly_mul(f, pack.Rx, pack.Ryy), 2), 1, 0, 3}};
        rule.tail[3] = {{pack.Rxx, 0, 0, 1},
                        {scaled(poly_mul(f, pack.Rx, pack.Rxy), -2), 0, 0, 2},
                        {poly_mul(f, poly_mul(f, pack.Rx, pack.Rx), pack.Ryy), 0, 0, 3}};
    } else {
        // D_xR = (R_y/R_x) D_Ry
        //        + L^3    (R^2 R_xx/R_x^3 - R/R_x)
        //        + L^2 y' (2R R_xy/R_x^2 - 2R R_y R_xx/R_x^3)
        //        + L y'^2 (R_y^2 R_xx/R_x^3 - 2R_y R_xy/R_x^2 + R_yy/R_x)
        rule.wmain = {poly_const(f, f.one()), 1, 0, 1};
        rule.tail[3] = {{pack.Rxx, 0, 2, 3},
                        {poly_const(f, f.neg(f.one())), 0, 1, 1}};
        rule.tail[2] = {{scaled(pack.Rxy, 2), 0, 1, 2},
                        {scaled(pack.Rxx, -2), 1, 1, 3}};
        rule.tail[1] = {{pack.Rxx, 2, 0, 3},
                        {scaled(pack.Rxy, -2), 1, 0, 2},
                        {pack.Ryy, 0, 0, 1}};
    }
    return rule;
}

namespace {

template <class F>
TrackedFactor<F> factor_mul(const F& f, const TrackedFactor<F>& a, const TrackedFactor<F>& b) {
    return {poly_mul(f, a.poly, b.poly), a.k_num + b.k_num, a.r_num + b.r_num, a.d_den + b.d_den};
}

// (sum of factors)^n expanded with multinomial coefficients.
template <class F>
std::vector<TrackedFactor<F>> expand_power(const F& f, const std::vector<TrackedFactor<F>>& terms,
                                           int n) {
    std::vector<TrackedFactor<F>> out;
    if (n == 0) {
        out.push_back({poly_const(f, f.one()), 0, 0, 0});
        return out;
    }
    std::vector<int> counts(terms.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int left) {
        if (idx + 1 == terms.size()) {
            counts[idx] = left;
            std::int64_t coef = factorial(n);
            for (int ci : counts) coef /= factorial(ci);
            TrackedFactor<F> prod{poly_const(f, f.from_int(coef)), 0, 0, 0};
            for (std::size_t t = 0; t < terms.size(); ++t)
                for (int r = 0; r < counts[t]; ++r) prod = factor_mul(f, prod, terms[t]);
            if (!prod.poly.is_zero()) out.push_back(std::move(prod));
            return;
        }
        for (int c = 0; c <= left; ++c) {
            counts[idx] = c;
            rec(idx + 1, left - c);
        }
    };
    if (terms.empty()) return out;  // empty sum to a positive power is zero
    rec(0, n);
    return out;
}

template <class F>
std::vector<TrackedFactor<F>> cross(const F& f, const std::vector<TrackedFactor<F>>& a,
                                    const std::vector<TrackedFactor<F>>& b) {
    std::vector<TrackedFactor<F>> out;
    out.reserve(a.size() * b.size());
    for (auto& x : a)
        for (auto& y : b) {
            auto p = factor_mul(f, x, y);
            if (!p.poly.is_zero()) out.push_back(std::move(p));
        }
    return out;
}

struct NetKey {
    int K = 0, D = 0, R = 0;
    friend bool operator==(const NetKey&, const NetKey&) = default;
    friend auto operator<=>(const NetKey&, const NetKey&) = default;
};

template <class F>
using GroupMap = std::map<std::pair<JetMonomial, NetKey>, SparsePoly<F>>;

// Expands one source family term into scalar prefactor groups keyed by
// (target jet monomial, net tracked exponents).
template <class F>
GroupMap<F> expand_key(const F& f, const SurfaceSpec& spec, const FirstJetRule<F>& fj,
                       const WronskianRule<F>& wr, int m, const JetTermKey& key) {
    const int ks = key.k;
    int su, ve;
    if (spec.kind == CaseKind::compact) {
        su = m - 3 * ks - key.j;  // x' exponent (shared)
        ve = key.j;               // y' exponent (eliminated)
    } else {
        su = key.j;               // L exponent (shared)
        ve = m - 3 * ks - key.j;  // x' exponent (eliminated)
    }
    const int K0 = m - 2 * ks;

    // Powers of the pick and main factors.
    std::vector<TrackedFactor<F>> pu_pow{{poly_const(f, f.one()), 0, 0, 0}};
    std::vector<TrackedFactor<F>> pw_pow{{poly_const(f, f.one()), 0, 0, 0}};
    for (int i = 1; i <= ve; ++i) {
        pu_pow.push_back(factor_mul(f, pu_pow.back(), fj.pick_u));
        pw_pow.push_back(factor_mul(f, pw_pow.back(), fj.pick_w));
    }
    std::vector<TrackedFactor<F>> wm_pow{{poly_const(f, f.one()), 0, 0, 0}};
    for (int i = 1; i <= ks; ++i) wm_pow.push_back(factor_mul(f, wm_pow.back(), wr.wmain));

    GroupMap<F> groups;
    auto deposit = [&](const JetMonomial& jet, const TrackedFactor<F>& tf) {
        if (tf.poly.is_zero()) return;
        if (jet.u + jet.w + 3 * jet.k != m)
            throw internal_error("transition: weight accounting mismatch after expansion");
        NetKey net{K0 - tf.k_num, tf.d_den, -tf.r_num};
        auto [it, fresh] = groups.try_emplace({jet, net}, tf.poly);
        if (!fresh) it->second = poly_add(f, it->second, tf.poly);
    };

    for (int kt = 0; kt <= ks; ++kt) {
        int wq = ks - kt;
        // Enumerate tail multisets (n_1, n_2, n_3) with sum wq.
        for (int n1 = 0; n1 <= wq; ++n1) {
            if (n1 > 0 && wr.tail[1].empty()) continue;
            for (int n2 = 0; n2 + n1 <= wq; ++n2) {
                if (n2 > 0 && wr.tail[2].empty()) continue;
                int n3 = wq - n1 - n2;
                if (n3 > 0 && wr.tail[3].empty()) continue;
                std::int64_t mcoef = factorial(wq) / (factorial(n1) * factorial(n2) * factorial(n3));
                std::vector<TrackedFactor<F>> block{
                    {poly_const(f, f.from_int(mcoef * binom(ks, kt))), 0, 0, 0}};
                block = cross(f, block, expand_power(f, wr.tail[1], n1));
                block = cross(f, block, expand_power(f, wr.tail[2], n2));
                block = cross(f, block, expand_power(f, wr.tail[3], n3));
                if (block.empty()) continue;
                int u_tail = 1 * n1 + 2 * n2 + 3 * n3;
                int w_tail = 2 * n1 + 1 * n2 + 0 * n3;
                for (int s = 0; s <= ve; ++s) {
                    JetMonomial jet{su + s + u_tail, (ve - s) + w_tail, kt};
                    TrackedFactor<F> base{poly_const(f, f.from_int(binom(ve, s))), 0, 0, 0};
                    base = factor_mul(f, base, pu_pow[s]);
                    base = factor_mul(f, base, pw_pow[ve - s]);
                    base = factor_mul(f, base, wm_pow[kt]);
                    for (auto& e : block) deposit(jet, factor_mul(f, base, e));
                }
            }
        }
    }
    return groups;
}

template <class F, class Carrier>
struct COps;

template <class F>
struct COps<F, ParamPoly<F>> {
    static ParamPoly<F> mul(const F& f, const ParamPoly<F>& p, const SparsePoly<F>& s) {
        return param_mul_poly(f, p, s);
    }
    static ParamPoly<F> add(const F& f, const ParamPoly<F>& a, const ParamPoly<F>& b) {
        return param_add(f, a, b);
    }
};

template <class F>
struct COps<F, SparsePoly<F>> {
    static SparsePoly<F> mul(const F& f, const SparsePoly<F>& p, const SparsePoly<F>& s) {
        return poly_mul(f, p, s);
    }
    static SparsePoly<F> add(const F& f, const SparsePoly<F>& a, const SparsePoly<F>& b) {
        return poly_add(f, a, b);
    }
};

// Incremental power cache for the clearing multipliers.
template <class F>
struct PowCache {
    const F* f;
    SparsePoly<F> base;
    std::vector<SparsePoly<F>> pows;
    PowCache(const F& field, SparsePoly<F> b) : f(&field), base(std::move(b)) {
        pows.push_back(poly_const(field, field.one()));
    }
    const SparsePoly<F>& get(int e) {
        while (static_cast<int>(pows.size()) <= e) pows.push_back(poly_mul(*f, pows.back(), base));
        return pows[static_cast<std::size_t>(e)];
    }
};

}  // namespace

namespace {

template <class F, class Carrier>
void transition_impl(const F& f, const SurfaceSpec& spec, const DerivativePack<F>& pack,
                     const FirstJetRule<F>& fj, const WronskianRule<F>& wr, int m,
                     const std::vector<std::pair<JetTermKey, Carrier>>& families, int threads,
                     bool expect_exact_power,
                     const std::function<void(TransitionTerm<F, Carrier>&&)>& sink) {
    const bool compact = spec.kind == CaseKind::compact;

    // Phase 1: expand every family term into scalar groups (parallel per key).
    std::vector<GroupMap<F>> per_key(families.size());
    parallel_for(families.size(), threads, [&](std::size_t i) {
        if (families[i].second.is_zero()) return;
        per_key[i] = expand_key(f, spec, fj, wr, m, families[i].first);
    });

    // Collect the target set and the clearing exponents.
    std::map<JetMonomial, NetKey> clearing;  // maximum net exponents per target
    for (auto& groups : per_key)
        for (auto& [tk, poly] : groups) {
            auto [jet, net] = tk;
            if (net.R > 0)
                throw internal_error("transition: R appeared as a denominator");
            auto [it, fresh] = clearing.try_emplace(jet, net);
            if (!fresh) {
                it->second.K = std::max(it->second.K, net.K);
                it->second.D = std::max(it->second.D, net.D);
                it->second.R = std::max(it->second.R, net.R);
            }
        }

    const SparsePoly<F>& Kdiv = compact ? pack.Rz : pack.Ry;
    const SparsePoly<F>& Ddiv = compact ? pack.Ry : pack.Rx;
    PowCache<F> kpow(f, Kdiv), dpow(f, Ddiv), rpow(f, pack.R);
    ReductionCache<F> red(f, spec);

    // Phase 2: clear each target to the componentwise maximum, multiply the
    // family carriers in, and hand the finished numerator to the sink
    // (canonical target order; deterministic).
    for (auto& [jet, maxnet] : clearing) {
        int EK = std::max(maxnet.K, 0);
        int ED = std::max(maxnet.D, 0);
        int ER = std::max(maxnet.R, 0);
        if (maxnet.K > jet.u)
            throw internal_error("transition: tracked constrained exponent exceeds the shared-symbol "
                                 "exponent at " + jet_monomial_text(jet, spec.kind));
        Carrier numerator{};
        for (std::size_t i = 0; i < families.size(); ++i) {
            SparsePoly<F> cleared;
            for (auto& [tk, poly] : per_key[i]) {
                if (!(tk.first == jet)) continue;
                const NetKey& net = tk.second;
                SparsePoly<F> piece = poly_mul(f, poly, kpow.get(EK - net.K));
                piece = poly_mul(f, piece, dpow.get(ED - net.D));
                piece = poly_mul(f, piece, rpow.get(ER - net.R));
                cleared = poly_add(f, cleared, piece);
            }
            if (cleared.is_zero()) continue;
            cleared = normal_form(f, cleared, spec, &red);
            Carrier contrib = COps<F, Carrier>::mul(f, families[i].second, cleared);
            numerator = COps<F, Carrier>::add(f, numerator, contrib);
        }
        numerator = normal_form(f, numerator, spec, &red);
        if (numerator.is_zero()) continue;
        if (expect_exact_power && EK != jet.u)
            throw internal_error("transition: required power " + std::to_string(EK) +
                                 " != shared exponent at " + jet_monomial_text(jet, spec.kind));
        sink({jet, std::move(numerator), EK, DenomExp{EK, ED, ER}});
    }
}

// True when every family member admitted by the degree bounds is present, in
// which case the required power must equal the shared-symbol exponent.
template <class Carrier>
bool full_generic_ansatz(const SurfaceSpec& spec, int m, int t, int jet_order,
                         const std::vector<std::pair<JetTermKey, Carrier>>& families) {
    int kmax = jet_order == 1 ? 0 : std::min(max_family(spec.kind), m / 3);
    std::size_t expected = 0;
    for (int k = 0; k <= kmax; ++k)
        for (int j = 0; j <= m - 3 * k; ++j)
            if (degree_bound(spec, k, j, m, t) >= 0) ++expected;
    return families.size() == expected && expected > 0;
}

}  // namespace

template <class F, class Carrier>
std::vector<TransitionTerm<F, Carrier>> transition(
    const F& f, const SurfaceSpec& spec, const DerivativePack<F>& pack,
    const FirstJetRule<F>& fj, const WronskianRule<F>& wr, int m,
    const std::vector<std::pair<JetTermKey, Carrier>>& families, int threads) {
    std::vector<TransitionTerm<F, Carrier>> out;
    transition_impl<F, Carrier>(f, spec, pack, fj, wr, m, families, threads, false,
                                [&](TransitionTerm<F, Carrier>&& t) { out.push_back(std::move(t)); });
    return out;
}

template <class F>
std::vector<TransitionTerm<F, ParamPoly<F>>> transition(const F& f, const SurfaceSpec& spec,
                                                        const DerivativePack<F>& pack,
                                                        const Ansatz<F>& ansatz, int threads) {
    std::vector<TransitionTerm<F, ParamPoly<F>>> out;
    transition_stream<F>(f, spec, pack, ansatz,
                         [&](TransitionTerm<F, ParamPoly<F>>&& t) { out.push_back(std::move(t)); },
                         threads);
    return out;
}

template <class F>
void transition_stream(const F& f, const SurfaceSpec& spec, const DerivativePack<F>& pack,
                       const Ansatz<F>& ansatz,
                       const std::function<void(TransitionTerm<F, ParamPoly<F>>&&)>& sink,
                       int threads) {
    auto fj = substitute_first_jet(f, spec, pack);
    auto wr = substitute_wronskian(f, spec, pack);
    bool exact = full_generic_ansatz(spec, ansatz.m, ansatz.t, ansatz.jet_order, ansatz.terms);
    transition_impl<F, ParamPoly<F>>(f, spec, pack, fj, wr, ansatz.m, ansatz.terms, threads, exact,
                                     sink);
}

template <class F, class Carrier>
std::string transition_dump(const std::vector<TransitionTerm<F, Carrier>>& terms, CaseKind kind) {
    std::string out = "target            terms    required_power\n";
    for (auto& t : terms) {
        std::string jm = jet_monomial_text(t.jet, kind);
        out += jm;
        out.append(jm.size() < 18 ? 18 - jm.size() : 1, ' ');
        std::string n = std::to_string(t.numerator.size());
        out += n;
        out.append(n.size() < 9 ? 9 - n.size() : 1, ' ');
        out += std::to_string(t.required_power);
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Numeric consistency oracle over F_p.

namespace {

std::uint64_t modinv_u64(std::uint64_t a, std::uint64_t n) {
    // inverse of a mod n for gcd(a, n) = 1 (n need not be prime)
    std::int64_t t0 = 0, t1 = 1;
    std::int64_t r0 = static_cast<std::int64_t>(n), r1 = static_cast<std::int64_t>(a % n);
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t tmp = r0 - q * r1; r0 = r1; r1 = tmp;
        tmp = t0 - q * t1; t0 = t1; t1 = tmp;
    }
    if (r0 != 1) throw usage_error("modinv_u64: arguments not coprime");
    if (t0 < 0) t0 += static_cast<std::int64_t>(n);
    return static_cast<std::uint64_t>(t0);
}

}  // namespace

JetSample sample_jet(const GF& f, const SurfaceSpec& spec, Rng& rng, int max_retries) {
    const int d = spec.d;
    if (f.p % static_cast<std::uint64_t>(d) == 0)
        throw usage_error("sample_jet: p divides d");
    auto draw = [&] { return rng.below(f.p); };
    if (spec.kind == CaseKind::compact) {
        std::uint64_t g = std::gcd(static_cast<std::uint64_t>(d), f.p - 1);
        if (g != 1)
            throw sampling_error("sample_jet: root extraction needs gcd(d, p-1) = 1; "
                                 "choose a different prime");
        std::uint64_t dinv = modinv_u64(static_cast<std::uint64_t>(d) % (f.p - 1), f.p - 1);
        auto pack = build_scenario(f, spec);
        for (int attempt = 0; attempt < max_retries; ++attempt) {
            std::uint64_t x = draw(), y = draw();
            if (y == 0) continue;
            // w = -(1 + x^d + y^d + S(x)) must be a nonzero d-th power
            std::array<std::uint64_t, 3> pt0{x, y, 0};
            std::uint64_t rest = poly_eval(f, pack.R, pt0);  // R with z = 0
            std::uint64_t w = f.neg(rest);
            if (w == 0) continue;
            std::uint64_t z = powmod_u64(w, dinv, f.p);
            if (powmod_u64(z, static_cast<std::uint64_t>(d), f.p) != w)
                throw internal_error("sample_jet: root extraction failed");
            std::array<std::uint64_t, 3> pt{x, y, z};
            if (poly_eval(f, pack.Rx, pt) == 0 || z == 0) continue;
            JetSample s;
            s.pt = pt;
            s.x1 = draw(); s.z1 = draw();
            std::uint64_t rx = poly_eval(f, pack.Rx, pt), ry = poly_eval(f, pack.Ry, pt),
                          rz = poly_eval(f, pack.Rz, pt);
            std::uint64_t ryi = f.inv(ry);
            s.y1 = f.neg(f.mul(f.add(f.mul(rx, s.x1), f.mul(rz, s.z1)), ryi));
            s.x2 = draw(); s.z2 = draw();
            // second differentiated relation solved for y''
            std::uint64_t q = f.add(f.mul(poly_eval(f, pack.Rxx, pt), f.mul(s.x1, s.x1)),
                                    f.mul(poly_eval(f, pack.Rzz, pt), f.mul(s.z1, s.z1)));
            q = f.add(q, f.mul(poly_eval(f, pack.Ryy, pt), f.mul(s.y1, s.y1)));
            q = f.add(q, f.mul(f.from_int(2), f.mul(poly_eval(f, pack.Rxy, pt), f.mul(s.x1, s.y1))));
            q = f.add(q, f.mul(f.from_int(2), f.mul(poly_eval(f, pack.Rxz, pt), f.mul(s.x1, s.z1))));
            q = f.add(q, f.mul(f.from_int(2), f.mul(poly_eval(f, pack.Ryz, pt), f.mul(s.y1, s.z1))));
            q = f.add(q, f.add(f.mul(rx, s.x2), f.mul(rz, s.z2)));
            s.y2 = f.neg(f.mul(q, ryi));
            return s;
        }
        throw sampling_error("sample_jet: retry budget exhausted");
    }
    // logarithmic: any jet with R, R_x, R_y nonzero at the base point
    auto pack = build_scenario(f, spec);
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::uint64_t x = draw(), y = draw();
        std::array<std::uint64_t, 3> pt{x, y, 0};
        if (poly_eval(f, pack.R, pt) == 0) continue;
        if (poly_eval(f, pack.Rx, pt) == 0 || poly_eval(f, pack.Ry, pt) == 0) continue;
        JetSample s;
        s.pt = pt;
        s.x1 = draw(); s.y1 = draw(); s.x2 = draw(); s.y2 = draw();
        s.z1 = s.z2 = 0;
        return s;
    }
    throw sampling_error("sample_jet: retry budget exhausted");
}

namespace {

struct LogJetValues {
    std::uint64_t L;        // (log R)'
    std::uint64_t L2;       // (log R)''
};

LogJetValues log_jet_values(const GF& f, const DerivativePack<GF>& pack, const JetSample& s) {
    auto& pt = s.pt;
    std::uint64_t R = poly_eval(f, pack.R, pt);
    std::uint64_t Rx = poly_eval(f, pack.Rx, pt), Ry = poly_eval(f, pack.Ry, pt);
    std::uint64_t Rxx = poly_eval(f, pack.Rxx, pt), Rxy = poly_eval(f, pack.Rxy, pt),
                  Ryy = poly_eval(f, pack.Ryy, pt);
    std::uint64_t Rp = f.add(f.mul(s.x1, Rx), f.mul(s.y1, Ry));
    std::uint64_t Rpp = f.add(f.add(f.mul(s.x2, Rx), f.mul(s.y2, Ry)),
                              f.add(f.mul(Rxx, f.mul(s.x1, s.x1)),
                                    f.add(f.mul(f.from_int(2), f.mul(Rxy, f.mul(s.x1, s.y1))),
                                          f.mul(Ryy, f.mul(s.y1, s.y1)))));
    std::uint64_t Rinv = f.inv(R);
    std::uint64_t L = f.mul(Rp, Rinv);
    std::uint64_t L2 = f.sub(f.mul(Rpp, Rinv), f.mul(L, L));
    return {L, L2};
}

}  // namespace

std::uint64_t eval_source(const GF& f, const SurfaceSpec& spec, const DerivativePack<GF>& pack,
                          int m, const std::vector<std::pair<JetTermKey, SparsePoly<GF>>>& families,
                          const JetSample& s) {
    std::uint64_t acc = 0;
    if (spec.kind == CaseKind::compact) {
        std::uint64_t W = f.sub(f.mul(s.y1, s.x2), f.mul(s.y2, s.x1));
        std::uint64_t Rz = poly_eval(f, pack.Rz, s.pt);
        for (auto& [key, poly] : families) {
            std::uint64_t v = poly_eval(f, poly, s.pt);
            v = f.mul(v, powmod_u64(s.y1, static_cast<std::uint64_t>(key.j), f.p));
            v = f.mul(v, powmod_u64(s.x1, static_cast<std::uint64_t>(m - 3 * key.k - key.j), f.p));
            v = f.mul(v, powmod_u64(W, static_cast<std::uint64_t>(key.k), f.p));
            v = f.mul(v, f.inv(powmod_u64(Rz, static_cast<std::uint64_t>(m - 2 * key.k), f.p)));
            acc = f.add(acc, v);
        }
        return acc;
    }
    auto lv = log_jet_values(f, pack, s);
    std::uint64_t Dsrc = f.sub(f.mul(s.x1, lv.L2), f.mul(s.x2, lv.L));  // |x' L; x'' L'|
    std::uint64_t Ry = poly_eval(f, pack.Ry, s.pt);
    for (auto& [key, poly] : families) {
        std::uint64_t v = poly_eval(f, poly, s.pt);
        v = f.mul(v, powmod_u64(s.x1, static_cast<std::uint64_t>(m - 3 * key.k - key.j), f.p));
        v = f.mul(v, powmod_u64(lv.L, static_cast<std::uint64_t>(key.j), f.p));
        v = f.mul(v, powmod_u64(Dsrc, static_cast<std::uint64_t>(key.k), f.p));
        v = f.mul(v, f.inv(powmod_u64(Ry, static_cast<std::uint64_t>(m - 2 * key.k), f.p)));
        acc = f.add(acc, v);
    }
    return acc;
}

std::uint64_t eval_target(const GF& f, const SurfaceSpec& spec, const DerivativePack<GF>& pack,
                          const std::vector<TransitionTerm<GF, SparsePoly<GF>>>& terms,
                          const JetSample& s) {
    std::uint64_t acc = 0;
    if (spec.kind == CaseKind::compact) {
        std::uint64_t W = f.sub(f.mul(s.z1, s.x2), f.mul(s.z2, s.x1));
        std::uint64_t Rz = poly_eval(f, pack.Rz, s.pt), Ry = poly_eval(f, pack.Ry, s.pt);
        for (auto& t : terms) {
            std::uint64_t v = poly_eval(f, t.numerator, s.pt);
            v = f.mul(v, powmod_u64(s.x1, static_cast<std::uint64_t>(t.jet.u), f.p));
            v = f.mul(v, powmod_u64(s.z1, static_cast<std::uint64_t>(t.jet.w), f.p));
            v = f.mul(v, powmod_u64(W, static_cast<std::uint64_t>(t.jet.k), f.p));
            std::uint64_t den = f.mul(powmod_u64(Rz, static_cast<std::uint64_t>(t.denom.K), f.p),
                                      powmod_u64(Ry, static_cast<std::uint64_t>(t.denom.D), f.p));
            acc = f.add(acc, f.mul(v, f.inv(den)));
        }
        return acc;
    }
    auto lv = log_jet_values(f, pack, s);
    std::uint64_t Dtgt = f.sub(f.mul(lv.L, s.y2), f.mul(lv.L2, s.y1));  // |L y'; L' y''|
    std::uint64_t Ry = poly_eval(f, pack.Ry, s.pt), Rx = poly_eval(f, pack.Rx, s.pt),
                  R = poly_eval(f, pack.R, s.pt);
    for (auto& t : terms) {
        std::uint64_t v = poly_eval(f, t.numerator, s.pt);
        v = f.mul(v, powmod_u64(lv.L, static_cast<std::uint64_t>(t.jet.u), f.p));
        v = f.mul(v, powmod_u64(s.y1, static_cast<std::uint64_t>(t.jet.w), f.p));
        v = f.mul(v, powmod_u64(Dtgt, static_cast<std::uint64_t>(t.jet.k), f.p));
        std::uint64_t den = f.mul(powmod_u64(Ry, static_cast<std::uint64_t>(t.denom.K), f.p),
                                  powmod_u64(Rx, static_cast<std::uint64_t>(t.denom.D), f.p));
        den = f.mul(den, powmod_u64(R, static_cast<std::uint64_t>(t.denom.R), f.p));
        acc = f.add(acc, f.mul(v, f.inv(den)));
    }
    return acc;
}

bool numeric_consistency_with_rules(const GF& f, const SurfaceSpec& spec,
                                    const DerivativePack<GF>& pack, const FirstJetRule<GF>& fj,
                                    const WronskianRule<GF>& wr, const Ansatz<GF>& ansatz,
                                    const std::vector<std::uint64_t>& assignment, int trials,
                                    std::uint64_t seed) {
    if (assignment.size() < ansatz.num_unknowns())
        throw usage_error("numeric_consistency: assignment does not cover all unknowns");
    std::vector<std::pair<JetTermKey, SparsePoly<GF>>> specialized;
    specialized.reserve(ansatz.terms.size());
    for (auto& [key, poly] : ansatz.terms)
        specialized.push_back({key, param_specialize(f, poly, assignment)});
    auto terms = transition<GF, SparsePoly<GF>>(f, spec, pack, fj, wr, ansatz.m, specialized);
    Rng rng(seed);
    for (int i = 0; i < trials; ++i) {
        JetSample s = sample_jet(f, spec, rng);
        if (eval_source(f, spec, pack, ansatz.m, specialized, s) != eval_target(f, spec, pack, terms, s))
            return false;
    }
    return true;
}

bool numeric_consistency(const GF& f, const SurfaceSpec& spec, const Ansatz<GF>& ansatz,
                         const std::vector<std::uint64_t>& assignment, int trials,
                         std::uint64_t seed) {
    auto pack = build_scenario(f, spec);
    auto fj = substitute_first_jet(f, spec, pack);
    auto wr = substitute_wronskian(f, spec, pack);
    return numeric_consistency_with_rules(f, spec, pack, fj, wr, ansatz, assignment, trials, seed);
}

// Explicit instantiations.
template FirstJetRule<GF> substitute_first_jet<GF>(const GF&, const SurfaceSpec&, const DerivativePack<GF>&);
template FirstJetRule<QQ> substitute_first_jet<QQ>(const QQ&, const SurfaceSpec&, const DerivativePack<QQ>&);
template FirstJetRule<ZZ> substitute_first_jet<ZZ>(const ZZ&, const SurfaceSpec&, const DerivativePack<ZZ>&);
template WronskianRule<GF> substitute_wronskian<GF>(const GF&, const SurfaceSpec&, const DerivativePack<GF>&);
template WronskianRule<QQ> substitute_wronskian<QQ>(const QQ&, const SurfaceSpec&, const DerivativePack<QQ>&);
template WronskianRule<ZZ> substitute_wronskian<ZZ>(const ZZ&, const SurfaceSpec&, const DerivativePack<ZZ>&);

template std::vector<TransitionTerm<GF, ParamPoly<GF>>> transition<GF, ParamPoly<GF>>(
    const GF&, const SurfaceSpec&, const DerivativePack<GF>&, const FirstJetRule<GF>&,
    const WronskianRule<GF>&, int, const std::vector<std::pair<JetTermKey, ParamPoly<GF>>>&, int);
template std::vector<TransitionTerm<GF, SparsePoly<GF>>> transition<GF, SparsePoly<GF>>(
    const GF&, const SurfaceSpec&, const DerivativePack<GF>&, const FirstJetRule<GF>&,
    const WronskianRule<GF>&, int, const std::vector<std::pair<JetTermKey, SparsePoly<GF>>>&, int);
template std::vector<TransitionTerm<QQ, ParamPoly<QQ>>> transition<QQ, ParamPoly<QQ>>(
    const QQ&, const SurfaceSpec&, const DerivativePack<QQ>&, const FirstJetRule<QQ>&,
    const WronskianRule<QQ>&, int, const std::vector<std::pair<JetTermKey, ParamPoly<QQ>>>&, int);
template std::vector<TransitionTerm<QQ, SparsePoly<QQ>>> transition<QQ, SparsePoly<QQ>>(
    const QQ&, const SurfaceSpec&, const DerivativePack<QQ>&, const FirstJetRule<QQ>&,
    const WronskianRule<QQ>&, int, const std::vector<std::pair<JetTermKey, SparsePoly<QQ>>>&, int);
template std::vector<TransitionTerm<ZZ, ParamPoly<ZZ>>> transition<ZZ, ParamPoly<ZZ>>(
    const ZZ&, const SurfaceSpec&, const DerivativePack<ZZ>&, const FirstJetRule<ZZ>&,
    const WronskianRule<ZZ>&, int, const std::vector<std::pair<JetTermKey, ParamPoly<ZZ>>>&, int);
template std::vector<TransitionTerm<ZZ, SparsePoly<ZZ>>> transition<ZZ, SparsePoly<ZZ>>(
    const ZZ&, const SurfaceSpec&, const DerivativePack<ZZ>&, const FirstJetRule<ZZ>&,
    const WronskianRule<ZZ>&, int, const std::vector<std::pair<JetTermKey, SparsePoly<ZZ>>>&, int);

template std::vector<TransitionTerm<GF, ParamPoly<GF>>> transition<GF>(
    const GF&, const SurfaceSpec&, const DerivativePack<GF>&, const Ansatz<GF>&, int);
template std::vector<TransitionTerm<QQ, ParamPoly<QQ>>> transition<QQ>(
    const QQ&, const SurfaceSpec&, const DerivativePack<QQ>&, const Ansatz<QQ>&, int);
template std::vector<TransitionTerm<ZZ, ParamPoly<ZZ>>> transition<ZZ>(
    const ZZ&, const SurfaceSpec&, const DerivativePack<ZZ>&, const Ansatz<ZZ>&, int);

template void transition_stream<GF>(
    const GF&, const SurfaceSpec&, const DerivativePack<GF>&, const Ansatz<GF>&,
    const std::function<void(TransitionTerm<GF, ParamPoly<GF>>&&)>&, int);
template void transition_stream<QQ>(
    const QQ&, const SurfaceSpec&, const DerivativePack<QQ>&, const Ansatz<QQ>&,
    const std::function<void(TransitionTerm<QQ, ParamPoly<QQ>>&&)>&, int);
template void transition_stream<ZZ>(
    const ZZ&, const SurfaceSpec&, const DerivativePack<ZZ>&, const Ansatz<ZZ>&,
    const std::function<void(TransitionTerm<ZZ, ParamPoly<ZZ>>&&)>&, int);

template std::string transition_dump<GF, ParamPoly<GF>>(
    const std::vector<TransitionTerm<GF, ParamPoly<GF>>>&, CaseKind);
template std::string transition_dump<GF, SparsePoly<GF>>(
    const std::vector<TransitionTerm<GF, SparsePoly<GF>>>&, CaseKind);
template std::string transition_dump<ZZ, ParamPoly<ZZ>>(
    const std::vector<TransitionTerm<ZZ, ParamPoly<ZZ>>>&, CaseKind);

}  // namespace jv
