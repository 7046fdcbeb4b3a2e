#include <doctest.h>

#include "jetvanish/scenario.hpp"

using namespace jv;

namespace {

// Exact division of G by the defining polynomial R, treating y as the main
// variable (R is monic in y^d). Returns true iff R | G.
bool divisible_by_R(const QQ& q, SparsePoly<QQ> g, const SurfaceSpec& spec) {
    auto r = defining_polynomial(q, spec);
    const int d = spec.d;
    while (!g.is_zero()) {
        // leading term in y
        int ymax = g.degree_in(1);
        if (ymax < d) return g.is_zero();
        // collect the coefficient of y^ymax
        SparsePoly<QQ> lead;
        for (auto& [m, c] : g.terms)
            if (m.e[1] == ymax) {
                Monomial shifted = m;
                shifted.e[1] = static_cast<std::uint16_t>(ymax - d);
                lead.terms.push_back({shifted, c});
            }
        g = poly_sub(q, g, poly_mul(q, lead, r));
    }
    return true;
}

SparsePoly<QQ> random_small(const QQ& q, Rng& rng, int num_vars, int ymax, int max_deg) {
    std::vector<std::pair<Monomial, BigRat>> terms;
    int n = 1 + static_cast<int>(rng.below(8));
    for (int i = 0; i < n; ++i) {
        Monomial m;
        m.e[0] = static_cast<std::uint16_t>(rng.below(static_cast<std::uint64_t>(max_deg)));
        m.e[1] = static_cast<std::uint16_t>(rng.below(static_cast<std::uint64_t>(ymax)));
        if (num_vars == 3) m.e[2] = static_cast<std::uint16_t>(rng.below(static_cast<std::uint64_t>(max_deg)));
        terms.push_back({m, BigRat(rng.int_in(-9, 9))});
    }
    return poly_from_terms(q, std::move(terms));
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("build_scenario compact d=17 default") {
    QQ q;
    SurfaceSpec spec{CaseKind::compact, 17, default_deformation(CaseKind::compact, 17)};
    auto pack = build_scenario(q, spec);
    CHECK(poly_text(q, pack.R, 3) ==
          "1 * x^17 y^0 z^0 + 1 * x^0 y^17 z^0 + 1 * x^0 y^0 z^17 + 1 * x^8 y^0 z^0 + "
          "1 * x^0 y^0 z^0");
    CHECK(poly_text(q, pack.Rz, 3) == "17 * x^0 y^0 z^16");
    CHECK(poly_text(q, pack.Ry, 3) == "17 * x^0 y^16 z^0");
    // derivative pack consistency
    CHECK(pack.Rx.equal(q, poly_partial(q, pack.R, 0)));
    CHECK(pack.Rzz.equal(q, poly_partial(q, pack.Rz, 2)));
    CHECK(pack.Rxy.is_zero());
    CHECK(pack.Ryz.is_zero());
}

TEST_CASE("build_scenario logarithmic d=12 default") {
    QQ q;
    SurfaceSpec spec{CaseKind::logarithmic, 12, default_deformation(CaseKind::logarithmic, 12)};
    auto pack = build_scenario(q, spec);
    CHECK(poly_text(q, pack.R, 2) ==
          "1 * x^12 y^0 + 1 * x^0 y^12 + 1 * x^6 y^0 + 1 * x^0 y^0");
    CHECK(poly_text(q, pack.Ry, 2) == "12 * x^0 y^11");
}

TEST_CASE("build_scenario compact d=5 deformation x^2") {
    QQ q;
    SurfaceSpec spec{CaseKind::compact, 5, {DeformTerm{Monomial(2, 0, 0), 1}}};
    auto pack = build_scenario(q, spec);
    CHECK(poly_text(q, pack.Ry, 3) == "5 * x^0 y^4 z^0");
}

TEST_CASE("deformation restrictions") {
    QQ q;
    SurfaceSpec with_y{CaseKind::compact, 7, {DeformTerm{Monomial(1, 2, 0), 1}}};
    CHECK_THROWS_AS(build_scenario(q, with_y), usage_error);
    SurfaceSpec with_z{CaseKind::compact, 7, {DeformTerm{Monomial(1, 0, 2), 1}}};
    CHECK_THROWS_AS(build_scenario(q, with_z), usage_error);
    SurfaceSpec too_big{CaseKind::logarithmic, 7, {DeformTerm{Monomial(7, 0, 0), 1}}};
    CHECK_THROWS_AS(build_scenario(q, too_big), usage_error);
    SurfaceSpec zero_coeff{CaseKind::logarithmic, 7, {DeformTerm{Monomial(3, 0, 0), 0}}};
    CHECK_THROWS_AS(build_scenario(q, zero_coeff), usage_error);
}

TEST_CASE("normal form single reduction") {
    QQ q;
    SurfaceSpec spec{CaseKind::compact, 17, default_deformation(CaseKind::compact, 17)};
    auto y17 = poly_monomial(q, Monomial(0, 17, 0), BigRat(1));
    auto red = normal_form(q, y17, spec);
    CHECK(poly_text(q, red, 3) ==
          "-1 * x^17 y^0 z^0 + -1 * x^0 y^0 z^17 + -1 * x^8 y^0 z^0 + -1 * x^0 y^0 z^0");
}

TEST_CASE("normal form squared relation") {
    QQ q;
    SurfaceSpec spec{CaseKind::compact, 17, default_deformation(CaseKind::compact, 17)};
    auto y34 = poly_monomial(q, Monomial(0, 34, 0), BigRat(1));
    auto red = normal_form(q, y34, spec);
    // oracle: (1 + x^17 + z^17 + x^8)^2 expanded
    auto base = poly_parse(q, "1 * x^0 y^0 z^0 + 1 * x^17 y^0 z^0 + 1 * x^0 y^0 z^17 + "
                              "1 * x^8 y^0 z^0", 3);
    CHECK(red.equal(q, poly_mul(q, base, base)));
}

TEST_CASE("normal form fixes reduced polynomials and is idempotent") {
    QQ q;
    SurfaceSpec spec{CaseKind::compact, 5, default_deformation(CaseKind::compact, 5)};
    Rng rng(404);
    for (int i = 0; i < 60; ++i) {
        auto low = random_small(q, rng, 3, 5, 7);  // y-degree < 5 already
        CHECK(normal_form(q, low, spec).equal(q, low));
        auto any = random_small(q, rng, 3, 17, 7);
        auto once = normal_form(q, any, spec);
        CHECK(once.degree_in(1) < 5);
        CHECK(normal_form(q, once, spec).equal(q, once));
    }
}

TEST_CASE("normal form difference lies in the ideal") {
    QQ q;
    SurfaceSpec spec{CaseKind::compact, 5, default_deformation(CaseKind::compact, 5)};
    Rng rng(505);
    for (int i = 0; i < 40; ++i) {
        auto g = random_small(q, rng, 3, 14, 6);
        auto diff = poly_sub(q, normal_form(q, g, spec), g);
        CHECK(divisible_by_R(q, diff, spec));
    }
}

TEST_CASE("normal form is a ring homomorphism up to normal form") {
    QQ q;
    SurfaceSpec spec{CaseKind::compact, 5, default_deformation(CaseKind::compact, 5)};
    Rng rng(606);
    for (int i = 0; i < 40; ++i) {
        auto a = random_small(q, rng, 3, 11, 5);
        auto b = random_small(q, rng, 3, 11, 5);
        auto lhs = normal_form(q, poly_mul(q, a, b), spec);
        auto rhs = normal_form(
            q, poly_mul(q, normal_form(q, a, spec), normal_form(q, b, spec)), spec);
        CHECK(lhs.equal(q, rhs));
    }
}

TEST_CASE("logarithmic normal form is the identity") {
    QQ q;
    SurfaceSpec spec{CaseKind::logarithmic, 12, default_deformation(CaseKind::logarithmic, 12)};
    auto p = poly_parse(q, "3 * x^2 y^30 + -1 * x^0 y^1", 2);
    CHECK(normal_form(q, p, spec).equal(q, p));
}

TEST_CASE("divides_power examples at d=17") {
    QQ q;
    SurfaceSpec spec{CaseKind::compact, 17, default_deformation(CaseKind::compact, 17)};
    auto a = poly_monomial(q, Monomial(1, 0, 32), BigRat(1));
    CHECK(divides_power(a, 2, spec));
    auto b = poly_monomial(q, Monomial(1, 0, 31), BigRat(1));
    CHECK_FALSE(divides_power(b, 2, spec));
    CHECK_THROWS_AS(divides_power(a, 0, spec), usage_error);
}

TEST_CASE("divides_power against planted quotient-ring instances") {
    QQ q;
    for (int d : {5, 7}) {
        SurfaceSpec spec{CaseKind::compact, d, default_deformation(CaseKind::compact, d)};
        Rng rng(700 + d);
        for (int trial = 0; trial < 100; ++trial) {
            int i = 1 + static_cast<int>(rng.below(3));
            // random quotient with y-degree < d and no z
            SparsePoly<QQ> g;
            {
                std::vector<std::pair<Monomial, BigRat>> terms;
                int n = 1 + static_cast<int>(rng.below(5));
                for (int k = 0; k < n; ++k)
                    terms.push_back({Monomial(static_cast<unsigned>(rng.below(6)),
                                              static_cast<unsigned>(rng.below(static_cast<std::uint64_t>(d)))),
                                     BigRat(rng.int_in(1, 9))});
                g = poly_from_terms(q, std::move(terms));
            }
            Monomial shift;
            shift.e[2] = static_cast<std::uint16_t>((d - 1) * i);
            auto divisible = normal_form(q, poly_shift(g, shift), spec);
            CHECK(divides_power(divisible, i, spec));
            // adding a sub-threshold term breaks divisibility (it cannot cancel:
            // the normal form is unique and the planted part has no low z-terms)
            auto spoiled = poly_add(
                q, divisible,
                poly_monomial(q, Monomial(0, 1, static_cast<unsigned>((d - 1) * i - 1)), BigRat(1)));
            CHECK_FALSE(divides_power(spoiled, i, spec));
        }
    }
}

TEST_CASE("divides_power invariant under x-scaling") {
    QQ q;
    SurfaceSpec spec{CaseKind::compact, 5, default_deformation(CaseKind::compact, 5)};
    Rng rng(808);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = random_small(q, rng, 3, 5, 6);
        if (g.is_zero()) continue;
        int i = 1 + static_cast<int>(rng.below(2));
        Monomial xshift(static_cast<unsigned>(1 + rng.below(4)), 0, 0);
        CHECK(divides_power(g, i, spec) == divides_power(poly_shift(g, xshift), i, spec));
    }
}

}  // TEST_SUITE
