#include <doctest.h>

#include "jetvanish/param_poly.hpp"
#include "jetvanish/sparse_poly.hpp"

using namespace jv;

namespace {

// Random sparse polynomial for property tests.
template <class F>
SparsePoly<F> random_poly(const F& f, Rng& rng, int num_vars, int max_deg, int max_terms) {
    std::vector<std::pair<Monomial, typename F::elem>> terms;
    int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
    for (int i = 0; i < n; ++i) {
        Monomial m;
        int budget = max_deg;
        for (int v = 0; v < num_vars; ++v) {
            int e = static_cast<int>(rng.below(static_cast<std::uint64_t>(budget + 1)));
            m.e[v] = static_cast<std::uint16_t>(e);
            budget -= e;
        }
        terms.push_back({m, f.from_int(rng.int_in(-20, 20))});
    }
    return poly_from_terms(f, std::move(terms));
}

template <class F>
void ring_axioms(const F& f, std::uint64_t seed) {
    Rng rng(seed);
    for (int trial = 0; trial < 100; ++trial) {
        auto a = random_poly(f, rng, 3, 6, 8);
        auto b = random_poly(f, rng, 3, 6, 8);
        auto c = random_poly(f, rng, 3, 6, 8);
        // associativity and commutativity of *
        CHECK(poly_mul(f, poly_mul(f, a, b), c).equal(f, poly_mul(f, a, poly_mul(f, b, c))));
        CHECK(poly_mul(f, a, b).equal(f, poly_mul(f, b, a)));
        // distributivity
        CHECK(poly_mul(f, a, poly_add(f, b, c))
                  .equal(f, poly_add(f, poly_mul(f, a, b), poly_mul(f, a, c))));
        // additive structure
        CHECK(poly_add(f, a, poly_neg(f, a)).is_zero());
        CHECK(poly_add(f, a, b).equal(f, poly_add(f, b, a)));
    }
}

}  // namespace

TEST_SUITE("polycore") {

TEST_CASE("difference of squares") {
    QQ q;
    auto a = poly_parse(q, "1 * x^1 y^0 + 1 * x^0 y^1", 2);
    auto b = poly_parse(q, "1 * x^1 y^0 + -1 * x^0 y^1", 2);
    auto prod = poly_mul(q, a, b);
    CHECK(poly_text(q, prod, 2) == "1 * x^2 y^0 + -1 * x^0 y^2");
}

TEST_CASE("multiplicative identity") {
    GF f(10007);
    Rng rng(7);
    auto p = random_poly(f, rng, 3, 8, 12);
    auto one = poly_const(f, f.one());
    CHECK(poly_mul(f, p, one).equal(f, p));
}

TEST_CASE("pure power product over F_10007") {
    GF f(10007);
    auto a = poly_monomial(f, Monomial(0, 17, 0), f.one());
    auto b = poly_monomial(f, Monomial(0, 0, 16), f.one());
    auto prod = poly_mul(f, a, b);
    REQUIRE(prod.size() == 1);
    CHECK(prod.terms[0].first == Monomial(0, 17, 16));
    CHECK(prod.terms[0].second == 1);
}

TEST_CASE("term count bound") {
    GF f(10007);
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        auto a = random_poly(f, rng, 3, 5, 6);
        auto b = random_poly(f, rng, 3, 5, 6);
        CHECK(poly_mul(f, a, b).size() <= a.size() * b.size());
    }
}

TEST_CASE("ring axioms over F_p and Q") {
    ring_axioms(GF(10007), 101);
    ring_axioms(QQ{}, 202);
}

TEST_CASE("partial derivative examples") {
    QQ q;
    // d/dz of (1 + x^17 + y^17 + z^17 + x^8) = 17 z^16
    auto r = poly_parse(q, "1 * x^0 y^0 z^0 + 1 * x^17 y^0 z^0 + 1 * x^0 y^17 z^0 + "
                           "1 * x^0 y^0 z^17 + 1 * x^8 y^0 z^0", 3);
    CHECK(poly_text(q, poly_partial(q, r, 2), 3) == "17 * x^0 y^0 z^16");
    // d/dy of x^2 z = 0
    auto xz = poly_parse(q, "1 * x^2 y^0 z^1", 3);
    CHECK(poly_partial(q, xz, 1).is_zero());
    // d/dx of x^8 = 8 x^7
    auto x8 = poly_parse(q, "1 * x^8 y^0 z^0", 3);
    CHECK(poly_text(q, poly_partial(q, x8, 0), 3) == "8 * x^7 y^0 z^0");
}

TEST_CASE("partials commute") {
    GF f(65537);
    Rng rng(31);
    for (int i = 0; i < 60; ++i) {
        auto p = random_poly(f, rng, 3, 9, 14);
        auto xy = poly_partial(f, poly_partial(f, p, 0), 1);
        auto yx = poly_partial(f, poly_partial(f, p, 1), 0);
        CHECK(xy.equal(f, yx));
    }
}

TEST_CASE("monomial basis counts") {
    auto b6 = monomial_basis(2, 2);
    REQUIRE(b6.size() == 6);
    CHECK(b6.front() == Monomial(0, 0));
    CHECK(b6.back() == Monomial(2, 0));

    CHECK(monomial_basis(2, 25).size() == 351);  // (D+1)(D+2)/2 at D = 25

    // capped 3-variable count against brute-force enumeration
    std::vector<int> caps{-1, 16, -1};
    auto basis = monomial_basis(3, 39, &caps);
    std::size_t expect = 0;
    for (int ex = 0; ex <= 39; ++ex)
        for (int ey = 0; ey <= 16; ++ey)
            for (int ez = 0; ez <= 39; ++ez)
                if (ex + ey + ez <= 39) ++expect;
    CHECK(basis.size() == expect);
    for (auto& m : basis) CHECK(m.e[1] <= 16);
    // canonical order: strictly ascending packs
    for (std::size_t i = 1; i < basis.size(); ++i) CHECK(basis[i - 1].pack() < basis[i].pack());
}

TEST_CASE("canonical serialization is injective") {
    GF f(10007);
    Rng rng(77);
    for (int i = 0; i < 50; ++i) {
        auto p = random_poly(f, rng, 3, 7, 10);
        // rebuild from shuffled term list; serialization must match exactly
        auto terms = p.terms;
        std::reverse(terms.begin(), terms.end());
        auto p2 = poly_from_terms(f, std::move(terms));
        CHECK(poly_text(f, p, 3) == poly_text(f, p2, 3));
        auto q = poly_add(f, p, poly_monomial(f, Monomial(1, 2, 3), f.one()));
        CHECK(poly_text(f, p, 3) != poly_text(f, q, 3));
    }
}

TEST_CASE("parse round-trips canonical text") {
    QQ q;
    Rng rng(99);
    for (int i = 0; i < 30; ++i) {
        auto p = random_poly(q, rng, 2, 6, 8);
        CHECK(poly_parse(q, poly_text(q, p, 2), 2).equal(q, p));
    }
}

TEST_CASE("param_specialize basics") {
    QQ q;
    // single term x * (3 u_1), u_1 -> 2 gives 6x
    ParamPoly<QQ> pp;
    pp.terms.push_back({Monomial(1, 0), lin_single(q, 1, BigRat(3))});
    std::vector<BigRat> assign{BigRat(0), BigRat(2)};
    auto s = param_specialize(q, pp, assign);
    CHECK(poly_text(q, s, 2) == "6 * x^1 y^0");

    // all-zero assignment gives the zero polynomial
    std::vector<BigRat> zero{BigRat(0), BigRat(0)};
    CHECK(param_specialize(q, pp, zero).is_zero());
}

TEST_CASE("param_specialize distributes over param addition") {
    GF f(10007);
    Rng rng(123);
    for (int trial = 0; trial < 40; ++trial) {
        ParamPoly<GF> a, b;
        std::vector<std::pair<Monomial, LinForm<GF>>> ta, tb;
        for (int i = 0; i < 12; ++i) {
            Monomial m(static_cast<unsigned>(rng.below(4)), static_cast<unsigned>(rng.below(4)));
            ta.push_back({m, lin_single(f, static_cast<std::uint32_t>(rng.below(6)),
                                        f.from_int(rng.int_in(-9, 9)))});
            Monomial m2(static_cast<unsigned>(rng.below(4)), static_cast<unsigned>(rng.below(4)));
            tb.push_back({m2, lin_single(f, static_cast<std::uint32_t>(rng.below(6)),
                                         f.from_int(rng.int_in(-9, 9)))});
        }
        a = param_from_terms(f, std::move(ta));
        b = param_from_terms(f, std::move(tb));
        std::vector<std::uint64_t> assign(6);
        for (auto& v : assign) v = rng.below(f.p);
        auto lhs = param_specialize(f, param_add(f, a, b), assign);
        auto rhs = poly_add(f, param_specialize(f, a, assign), param_specialize(f, b, assign));
        CHECK(lhs.equal(f, rhs));
    }
}

TEST_CASE("param_specialize rejects missing unknowns") {
    QQ q;
    ParamPoly<QQ> pp;
    pp.terms.push_back({Monomial(1, 0), lin_single(q, 5, BigRat(1))});
    std::vector<BigRat> short_assign{BigRat(1)};
    CHECK_THROWS_AS(param_specialize(q, pp, short_assign), usage_error);
}

TEST_CASE("param_mul_poly matches specialize-then-multiply") {
    GF f(10007);
    Rng rng(321);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::pair<Monomial, LinForm<GF>>> ta;
        for (int i = 0; i < 10; ++i)
            ta.push_back({Monomial(static_cast<unsigned>(rng.below(5)),
                                   static_cast<unsigned>(rng.below(5))),
                          lin_single(f, static_cast<std::uint32_t>(rng.below(5)),
                                     f.from_int(rng.int_in(-9, 9)))});
        auto pp = param_from_terms(f, std::move(ta));
        auto s = random_poly(f, rng, 2, 4, 6);
        std::vector<std::uint64_t> assign(5);
        for (auto& v : assign) v = rng.below(f.p);
        auto lhs = param_specialize(f, param_mul_poly(f, pp, s), assign);
        auto rhs = poly_mul(f, param_specialize(f, pp, assign), s);
        CHECK(lhs.equal(f, rhs));
    }
}

TEST_CASE("rational reconstruction round-trip") {
    BigInt p("2147483647");
    Rng rng(555);
    for (int i = 0; i < 40; ++i) {
        BigInt num = rng.int_in(-30000, 30000);
        BigInt den = rng.int_in(1, 30000);
        BigInt g = boost::multiprecision::gcd(boost::multiprecision::abs(num), den);
        if (g != 0) { num /= g; den /= g; }
        // residue = num * den^{-1} mod p
        BigInt deninv = 1;
        {
            // Fermat inverse via GF
            GF f(2147483647ull);
            deninv = f.inv(f.from_bigint(den));
        }
        GF f(2147483647ull);
        BigInt residue = (f.mul(f.from_bigint(num), deninv.convert_to<std::uint64_t>()));
        BigRat out;
        REQUIRE(rational_reconstruct(residue, p, out));
        CHECK(out == BigRat(num, den));
    }
}

}  // TEST_SUITE
