// Symbolic chart-transition engine. Substitutes the eliminated first-jet
// symbol and the Wronskian of the source chart into an ansatz, expands, and
// emits one numerator per target jet monomial together with an exact record
// of the denominator exponents per distinguished divisor.
//
// Unified view of the two cases (source chart -> target chart):
//
//   compact:  {R_z != 0} -> {R_y != 0}.  Shared first-jet symbol u = x',
//     new symbol w = z', eliminated v = y', target Wronskian z'x'' - z''x'.
//     Constrained divisor K = R_z, allowed divisor D = R_y.
//
//   logarithmic:  {R_y != 0} -> {R_x != 0}.  Shared symbol u = L = R'/R
//     (chart-independent), new symbol w = y', eliminated v = x', target
//     Wronskian |(log R)' y'; (log R)'' y''|.  Constrained divisor K = R_y,
//     allowed divisors D = R_x and R.  R' never appears: occurrences are
//     rewritten as R * L, so R only ever enters numerators.
//
// Every factor of K or (log case) R appearing in a rule numerator is tracked
// as an exponent rather than multiplied into the polynomial part, so the net
// K-exponent of each contribution is exact. After clearing each target jet
// monomial to the componentwise maximum of the tracked exponents, the
// K-exponent is the required divisibility power; it always equals the
// u-exponent of the target monomial, which is asserted.
//
// Documented assumption: holomorphy is imposed on exactly one alternate chart
// (the target chart above) in addition to the vanishing-order bounds at
// infinity that the ansatz degree bounds encode. No constraints from further
// charts are generated.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "jetvanish/ansatz.hpp"
#include "jetvanish/scenario.hpp"

namespace jv {

// Raised when on-surface jet sampling exhausts its retry budget; distinct
// from a consistency failure.
struct sampling_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Target jet monomial: exponents of (shared symbol, new symbol, Wronskian).
// Compact reading: (x'^u, z'^w, W^k); logarithmic: (L^u, y'^w, Delta^k).
struct JetMonomial {
    int u = 0, w = 0, k = 0;

    friend bool operator==(const JetMonomial&, const JetMonomial&) = default;
    friend auto operator<=>(const JetMonomial&, const JetMonomial&) = default;
};

std::string jet_monomial_text(const JetMonomial& jm, CaseKind kind);

// One multiplicative contribution c(x,..) * K^{k_num} * R^{r_num} / D^{d_den};
// the polynomial part never contains the tracked divisors.
template <class F>
struct TrackedFactor {
    SparsePoly<F> poly;
    int k_num = 0;
    int r_num = 0;
    int d_den = 0;
};

// Rewrite rule for the eliminated first-jet symbol:
//   v = (pick_u * u + pick_w * w), each piece carrying one power of D.
template <class F>
struct FirstJetRule {
    TrackedFactor<F> pick_u, pick_w;
};

// Rewrite rule for the source Wronskian:
//   W_src = wmain * W_tgt + sum_a u^a w^{3-a} * (sum of tail[a] factors).
template <class F>
struct WronskianRule {
    TrackedFactor<F> wmain;
    std::array<std::vector<TrackedFactor<F>>, 4> tail;
};

template <class F>
FirstJetRule<F> substitute_first_jet(const F& f, const SurfaceSpec& spec,
                                     const DerivativePack<F>& pack);
template <class F>
WronskianRule<F> substitute_wronskian(const F& f, const SurfaceSpec& spec,
                                      const DerivativePack<F>& pack);

struct DenomExp {
    int K = 0;  // constrained divisor exponent after clearing = required power
    int D = 0;  // allowed divisor exponent
    int R = 0;  // R exponent (log case; stays 0)
};

template <class F, class Carrier>
struct TransitionTerm {
    JetMonomial jet;
    Carrier numerator;   // cleared and, in the compact case, in normal form
    int required_power;  // tracked K-exponent
    DenomExp denom;
};

// Carrier is ParamPoly<F> (undetermined families) or SparsePoly<F>
// (specialized families, used for exact witness verification). Terms come
// out in canonical target order. Weight conservation u + w + 3k = m and the
// required-power identity are asserted during expansion.
template <class F, class Carrier>
std::vector<TransitionTerm<F, Carrier>> transition(
    const F& f, const SurfaceSpec& spec, const DerivativePack<F>& pack,
    const FirstJetRule<F>& fj, const WronskianRule<F>& wr, int m,
    const std::vector<std::pair<JetTermKey, Carrier>>& families, int threads = 1);

template <class F>
std::vector<TransitionTerm<F, ParamPoly<F>>> transition(
    const F& f, const SurfaceSpec& spec, const DerivativePack<F>& pack,
    const Ansatz<F>& ansatz, int threads = 1);

// Streaming form: emits targets one at a time in canonical order so the
// consumer can extract rows and release each numerator; peak memory stays at
// a single target. Same outputs as transition().
template <class F>
void transition_stream(const F& f, const SurfaceSpec& spec, const DerivativePack<F>& pack,
                       const Ansatz<F>& ansatz,
                       const std::function<void(TransitionTerm<F, ParamPoly<F>>&&)>& sink,
                       int threads = 1);

// Text table (jet monomial, numerator term count, required power) per target.
template <class F, class Carrier>
std::string transition_dump(const std::vector<TransitionTerm<F, Carrier>>& terms, CaseKind kind);

// A sampled 2-jet suitable for evaluating both chart expressions.
struct JetSample {
    std::array<std::uint64_t, 3> pt;
    std::uint64_t x1, y1, z1;  // first jets
    std::uint64_t x2, y2, z2;  // second jets
};

// Draws a jet over F_p: compact case on the surface (relations solved for y',
// y'') at a point where all distinguished partials are nonzero; logarithmic
// case off the curve with R, R_x, R_y nonzero and free jets. Root extraction
// uses the inverse-exponent trick and therefore needs gcd(d, p-1) = 1; other
// primes raise sampling_error, as does running out of retries.
JetSample sample_jet(const GF& f, const SurfaceSpec& spec, Rng& rng, int max_retries = 400);

// Evaluates the specialized source-chart expression at the sample.
std::uint64_t eval_source(const GF& f, const SurfaceSpec& spec, const DerivativePack<GF>& pack,
                          int m, const std::vector<std::pair<JetTermKey, SparsePoly<GF>>>& families,
                          const JetSample& s);

// Evaluates the transitioned target-chart expression at the sample.
std::uint64_t eval_target(const GF& f, const SurfaceSpec& spec, const DerivativePack<GF>& pack,
                          const std::vector<TransitionTerm<GF, SparsePoly<GF>>>& terms,
                          const JetSample& s);

// End-to-end oracle: true iff source and target evaluations agree on `trials`
// random admissible jets. `assignment` must cover every unknown.
bool numeric_consistency(const GF& f, const SurfaceSpec& spec, const Ansatz<GF>& ansatz,
                         const std::vector<std::uint64_t>& assignment, int trials,
                         std::uint64_t seed = 0x6a657476616e6973ull);

// Same oracle against externally supplied rules (tests corrupt a rule to
// check the oracle trips).
bool numeric_consistency_with_rules(const GF& f, const SurfaceSpec& spec,
                                    const DerivativePack<GF>& pack, const FirstJetRule<GF>& fj,
                                    const WronskianRule<GF>& wr, const Ansatz<GF>& ansatz,
                                    const std::vector<std::uint64_t>& assignment, int trials,
                                    std::uint64_t seed);

}  // namespace jv
