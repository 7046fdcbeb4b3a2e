#include <doctest.h>

#include <set>

#include "jetvanish/ansatz.hpp"

using namespace jv;

TEST_SUITE("ansatz") {

TEST_CASE("degree bound rows, compact d=17 m=3 t=3") {
    SurfaceSpec spec{CaseKind::compact, 17, default_deformation(CaseKind::compact, 17)};
    CHECK(degree_bound(spec, 0, 0, 3, 3) == 39);  // 3*16 - 3*2 - 0 - 3
    CHECK(degree_bound(spec, 0, 3, 3, 3) == 39);  // compact bound has no j dependence
    CHECK(degree_bound(spec, 1, 0, 3, 3) == 10);  // 1*16 - 0*2 - 3 - 3
    CHECK_THROWS_AS(degree_bound(spec, 1, 1, 3, 3), usage_error);  // j > m-3k
    CHECK_THROWS_AS(degree_bound(spec, 4, 0, 12, 3), usage_error);  // family E is log-only
}

TEST_CASE("degree bound rows, logarithmic d=12 m=3 t=2") {
    SurfaceSpec spec{CaseKind::logarithmic, 12, default_deformation(CaseKind::logarithmic, 12)};
    for (int j = 0; j <= 3; ++j) CHECK(degree_bound(spec, 0, j, 3, 2) == 25 + j);
    CHECK(degree_bound(spec, 1, 0, 3, 2) == 5);
}

TEST_CASE("source denominator exponents match the printed propositions") {
    // compact: A/R^m, B/R^{m-2} (m=3: B at 1; m=4: B at 2, A at 4)
    CHECK(source_denominator_exponent({0, 0}, 3) == 3);
    CHECK(source_denominator_exponent({1, 0}, 3) == 1);
    CHECK(source_denominator_exponent({1, 1}, 4) == 2);
    CHECK(source_denominator_exponent({0, 2}, 4) == 4);
    // logarithmic: C at m-4, D at m-6, E at m-8
    CHECK(source_denominator_exponent({2, 0}, 10) == 6);
    CHECK(source_denominator_exponent({3, 0}, 12) == 6);
    CHECK(source_denominator_exponent({4, 0}, 14) == 6);
}

TEST_CASE("compact m=3 family structure") {
    GF f(10007);
    SurfaceSpec spec{CaseKind::compact, 17, default_deformation(CaseKind::compact, 17)};
    auto ansatz = build_ansatz(f, spec, 3, 3);
    REQUIRE(ansatz.terms.size() == 5);  // A_0..A_3 and B_0
    std::vector<JetTermKey> keys;
    for (auto& [k, p] : ansatz.terms) keys.push_back(k);
    CHECK(keys == std::vector<JetTermKey>{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 0}});
}

TEST_CASE("logarithmic d=12 m=3 t=2 unknown count") {
    GF f(10007);
    SurfaceSpec spec{CaseKind::logarithmic, 12, default_deformation(CaseKind::logarithmic, 12)};
    auto ansatz = build_ansatz(f, spec, 3, 2);
    // 351 + 378 + 406 + 435 + 21
    CHECK(ansatz.num_unknowns() == 1591);
    const ParamPoly<GF>* b0 = ansatz.find(JetTermKey{1, 0});
    REQUIRE(b0 != nullptr);
    CHECK(b0->size() == 21);
}

TEST_CASE("compact ansatz caps y-degree below d") {
    GF f(10007);
    SurfaceSpec spec{CaseKind::compact, 5, default_deformation(CaseKind::compact, 5)};
    auto ansatz = build_ansatz(f, spec, 3, 1);
    for (auto& u : ansatz.registry) CHECK(u.mono.e[1] < 5);
}

TEST_CASE("jet-order-1 ansatz keeps only family A") {
    GF f(10007);
    SurfaceSpec spec{CaseKind::compact, 17, default_deformation(CaseKind::compact, 17)};
    auto ansatz = build_ansatz(f, spec, 2, 0, 1);
    REQUIRE(ansatz.terms.size() == 3);  // A_0, A_1, A_2
    for (auto& [k, p] : ansatz.terms) CHECK(k.k == 0);
}

TEST_CASE("range and twist validation") {
    GF f(10007);
    SurfaceSpec cspec{CaseKind::compact, 17, default_deformation(CaseKind::compact, 17)};
    SurfaceSpec lspec{CaseKind::logarithmic, 12, default_deformation(CaseKind::logarithmic, 12)};
    CHECK_THROWS_AS(build_ansatz(f, cspec, 12, 3), usage_error);   // m > 11 compact
    CHECK_THROWS_AS(build_ansatz(f, lspec, 15, 3), usage_error);   // m > 14 logarithmic
    CHECK_THROWS_AS(build_ansatz(f, cspec, 3, 0), usage_error);    // t = 0 needs jet order 1
    CHECK_NOTHROW(build_ansatz(f, cspec, 1, 0, 1));
    CHECK_NOTHROW(build_ansatz(f, lspec, 14, 7));
}

TEST_CASE("registry is a bijection onto family-basis pairs") {
    GF f(10007);
    SurfaceSpec spec{CaseKind::logarithmic, 12, default_deformation(CaseKind::logarithmic, 12)};
    auto ansatz = build_ansatz(f, spec, 6, 3);
    // ids consecutive from zero
    for (std::size_t i = 0; i < ansatz.registry.size(); ++i)
        CHECK(ansatz.registry[i].id == i);
    // (key, monomial) pairs unique and consistent with the term polynomials
    std::set<std::tuple<int, int, std::uint64_t>> seen;
    for (auto& u : ansatz.registry)
        CHECK(seen.insert({u.key.k, u.key.j, u.mono.pack()}).second);
    std::size_t total = 0;
    for (auto& [key, poly] : ansatz.terms) {
        total += poly.size();
        for (auto& [mono, lf] : poly.terms) {
            REQUIRE(lf.size() == 1);
            auto id = lf.coeffs.front().first;
            CHECK(ansatz.registry[id].key == key);
            CHECK(ansatz.registry[id].mono == mono);
        }
    }
    CHECK(total == ansatz.num_unknowns());
}

TEST_CASE("weighted-degree split sums to m") {
    for (CaseKind kind : {CaseKind::compact, CaseKind::logarithmic}) {
        int m = 9;
        for (int k = 0; k <= 3; ++k)
            for (int j = 0; j <= m - 3 * k; ++j) {
                auto [a, b] = first_jet_split(kind, JetTermKey{k, j}, m);
                CHECK(a + b + 3 * k == m);
            }
    }
}

TEST_CASE("degree bounds decrease along the family hierarchy") {
    for (auto [kind, d] : std::vector<std::pair<CaseKind, int>>{{CaseKind::compact, 17},
                                                                {CaseKind::logarithmic, 12},
                                                                {CaseKind::logarithmic, 13}}) {
        SurfaceSpec spec{kind, d, default_deformation(kind, d)};
        for (int m = 3; m <= max_weighted_order(kind); ++m)
            for (int t = 1; t <= 7; ++t)
                for (int k = 0; k + 1 <= std::min(max_family(kind), m / 3); ++k)
                    for (int j = 0; j <= m - 3 * (k + 1); ++j)
                        CHECK(degree_bound(spec, k + 1, j, m, t) <
                              degree_bound(spec, k, j, m, t) + 2 * (d - 1));
    }
}

TEST_CASE("registry csv shape") {
    GF f(10007);
    SurfaceSpec spec{CaseKind::compact, 5, default_deformation(CaseKind::compact, 5)};
    auto ansatz = build_ansatz(f, spec, 3, 1);
    auto csv = registry_csv(ansatz, 3);
    CHECK(csv.rfind("id,family,j,e_x,e_y,e_z\n", 0) == 0);
    CHECK(csv.find("0,A,0,0,0,0") != std::string::npos);
}

}  // TEST_SUITE
