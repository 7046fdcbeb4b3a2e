#include <doctest.h>

#include "jetvanish/linsolve.hpp"

using namespace jv;

namespace {

// Dense Gaussian elimination over the rationals; the independent rank oracle.
std::size_t dense_rank(std::vector<std::vector<BigRat>> m) {
    std::size_t rank = 0;
    std::size_t rows = m.size();
    if (rows == 0) return 0;
    std::size_t cols = m[0].size();
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][c] == 0) continue;
            BigRat factor = m[r][c] / m[rank][c];
            for (std::size_t k = c; k < cols; ++k) m[r][k] -= factor * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

ConstraintSystem<ZZ> system_from_dense(const std::vector<std::vector<std::int64_t>>& m,
                                       std::size_t cols) {
    ZZ zz;
    ConstraintSystem<ZZ> sys;
    sys.num_unknowns = cols;
    ConstraintBlock<ZZ> block;
    block.power = 1;
    for (auto& row : m) {
        LinForm<ZZ> lf;
        lf.constant = 0;
        for (std::size_t c = 0; c < cols; ++c)
            if (row[c] != 0) lf.coeffs.push_back({static_cast<std::uint32_t>(c), BigInt(row[c])});
        if (!lf.coeffs.empty()) block.rows.push_back(std::move(lf));
    }
    sys.total_rows = block.rows.size();
    sys.raw_rows = block.rows.size();
    sys.blocks.push_back(std::move(block));
    return sys;
}

std::vector<std::vector<std::int64_t>> random_int_matrix(Rng& rng, std::size_t rows,
                                                         std::size_t cols, int density_pct) {
    std::vector<std::vector<std::int64_t>> m(rows, std::vector<std::int64_t>(cols, 0));
    for (auto& row : m)
        for (auto& v : row)
            if (rng.below(100) < static_cast<std::uint64_t>(density_pct)) v = rng.int_in(-9, 9);
    return m;
}

}  // namespace

TEST_SUITE("linsolve") {

TEST_CASE("empty block leaves the state unchanged") {
    GF f(kDefaultPrime);
    EliminationState<GF> state(5);
    eliminate_block(f, state, {});
    CHECK(state.rank() == 0);
}

TEST_CASE("identity rows pivot every unknown") {
    GF f(kDefaultPrime);
    EliminationState<GF> state(4);
    std::vector<LinForm<GF>> rows;
    for (std::uint32_t c = 0; c < 4; ++c) rows.push_back(lin_single(f, c, f.from_int(3)));
    eliminate_block(f, state, rows);
    CHECK(state.rank() == 4);
    for (std::uint32_t c = 0; c < 4; ++c) CHECK(state.pivot_row_of_col[c] >= 0);
}

TEST_CASE("nullity of the zero matrix and the identity") {
    GF f(kDefaultPrime);
    ConstraintSystem<GF> zero_sys;
    zero_sys.num_unknowns = 3;
    CHECK(nullity_mod_p(zero_sys, f).nullity == 3);

    ConstraintSystem<GF> ident;
    ident.num_unknowns = 2;
    ConstraintBlock<GF> b;
    b.power = 1;
    b.rows.push_back(lin_single(f, 0, f.one()));
    b.rows.push_back(lin_single(f, 1, f.one()));
    ident.blocks.push_back(b);
    CHECK(nullity_mod_p(ident, f).nullity == 0);
}

TEST_CASE("rank agrees with the dense rational oracle") {
    Rng rng(2024);
    GF f(kDefaultPrime);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t rows = 20 + rng.below(31), cols = 30 + rng.below(51);
        auto m = random_int_matrix(rng, rows, cols, 12);
        std::vector<std::vector<BigRat>> mq(rows, std::vector<BigRat>(cols));
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) mq[r][c] = m[r][c];
        auto sys = system_from_dense(m, cols);
        auto modp = reduce_system_mod_p(sys, f);
        auto result = nullity_mod_p(modp, f);
        CHECK(result.rank == dense_rank(mq));
        CHECK(result.rank + result.nullity == cols);
    }
}

TEST_CASE("nullity matches across two large primes and the rationals") {
    Rng rng(9);
    for (int trial = 0; trial < 15; ++trial) {
        std::size_t rows = 15 + rng.below(20), cols = 20 + rng.below(30);
        auto m = random_int_matrix(rng, rows, cols, 15);
        auto sys = system_from_dense(m, cols);
        GF f1(kDefaultPrime), f2(kSecondaryPrime);
        auto n1 = nullity_mod_p(reduce_system_mod_p(sys, f1), f1);
        auto n2 = nullity_mod_p(reduce_system_mod_p(sys, f2), f2);
        auto nq = nullity_rational(sys);
        CHECK(n1.nullity == n2.nullity);
        CHECK(n1.nullity == nq.nullity);
    }
}

TEST_CASE("nullspace basis has zero residuals and the right size") {
    Rng rng(51);
    GF f(kDefaultPrime);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t rows = 10 + rng.below(10), cols = 15 + rng.below(15);
        auto m = random_int_matrix(rng, rows, cols, 20);
        auto sys = reduce_system_mod_p(system_from_dense(m, cols), f);
        auto [state, basis] = solve_system(f, sys);
        CHECK(basis.size() == cols - state.rank());
        // residuals are asserted inside nullspace_basis; nonzero free coords here
        for (auto& vec : basis) {
            bool nonzero = false;
            for (auto v : vec) nonzero = nonzero || v != 0;
            CHECK(nonzero);
        }
    }
}

TEST_CASE("single free column yields one unit basis vector") {
    GF f(kDefaultPrime);
    ConstraintSystem<GF> sys;
    sys.num_unknowns = 3;
    ConstraintBlock<GF> b;
    b.power = 1;
    // x0 + 2 x2 = 0, x1 - x2 = 0: free column is x2
    LinForm<GF> r1; r1.constant = 0;
    r1.coeffs = {{0, f.one()}, {2, f.from_int(2)}};
    LinForm<GF> r2; r2.constant = 0;
    r2.coeffs = {{1, f.one()}, {2, f.neg(f.one())}};
    b.rows = {r1, r2};
    sys.blocks.push_back(b);
    auto [state, basis] = solve_system(f, sys);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0][2] == 1);
    CHECK(basis[0][0] == f.neg(f.from_int(2)));
    CHECK(basis[0][1] == 1);
}

TEST_CASE("elimination is deterministic across thread counts") {
    Rng rng(321);
    GF f(kDefaultPrime);
    auto m = random_int_matrix(rng, 60, 80, 10);
    auto sys = reduce_system_mod_p(system_from_dense(m, 80), f);
    auto [s1, b1] = solve_system(f, sys, 1);
    auto [s4, b4] = solve_system(f, sys, 4);
    CHECK(s1.rank() == s4.rank());
    REQUIRE(b1.size() == b4.size());
    for (std::size_t i = 0; i < b1.size(); ++i) CHECK(b1[i] == b4[i]);
    REQUIRE(s1.echelon.size() == s4.echelon.size());
    for (std::size_t i = 0; i < s1.echelon.size(); ++i)
        CHECK(lin_equal(f, s1.echelon[i], s4.echelon[i]));
}

TEST_CASE("certify: zero nullity modulo one prime settles vanishing") {
    ConstraintSystem<ZZ> sys = system_from_dense({{1, 0}, {0, 1}}, 2);
    auto verdict = certify_rational(sys, {10007, 10009});
    CHECK(verdict.kind == RationalVerdictKind::VANISHES_OVER_Q);
}

TEST_CASE("plant-and-recover integer nullvectors") {
    Rng rng(777);
    for (int trial = 0; trial < 12; ++trial) {
        std::size_t n = 8 + rng.below(8);
        std::vector<std::int64_t> v(n);
        for (auto& x : v) x = rng.int_in(-20, 20);
        if (v[0] == 0) v[0] = 7;
        // rows of the form v_j e_i - v_i e_j are orthogonal to v; random
        // combinations of cross pairs span the orthogonal complement
        std::vector<std::vector<std::int64_t>> rows;
        for (int r = 0; r < static_cast<int>(3 * n); ++r) {
            std::size_t i = rng.below(n), j = rng.below(n);
            if (i == j || (v[i] == 0 && v[j] == 0)) continue;
            std::vector<std::int64_t> row(n, 0);
            row[i] += v[j];
            row[j] -= v[i];
            rows.push_back(std::move(row));
        }
        auto sys = system_from_dense(rows, n);
        auto nq = nullity_rational(sys);
        if (nq.nullity != 1) continue;  // degenerate draw; planted span not cut out
        auto verdict = certify_rational(sys, {kDefaultPrime, kSecondaryPrime});
        REQUIRE(verdict.kind == RationalVerdictKind::NONVANISHING_OVER_Q);
        REQUIRE(verdict.witness.has_value());
        // recovered witness must be proportional to v
        const auto& w = *verdict.witness;
        std::size_t anchor = 0;
        while (anchor < n && w[anchor] == 0) ++anchor;
        REQUIRE(anchor < n);
        REQUIRE(v[anchor] != 0);
        BigRat ratio = w[anchor] / BigRat(v[anchor]);
        CHECK(ratio != 0);
        for (std::size_t c = 0; c < n; ++c) CHECK(w[c] == ratio * BigRat(v[c]));
    }
}

TEST_CASE("disagreeing nullities across primes are reported without a Q-verdict") {
    // single row (p, p): vanishes mod p (row drops), stays rank 1 mod q and over Q
    std::int64_t p = 10007;
    ConstraintSystem<ZZ> sys = system_from_dense({{p, p}}, 2);
    auto verdict = certify_rational(sys, {static_cast<std::uint64_t>(p), 10009});
    REQUIRE(verdict.per_prime.size() == 2);
    CHECK(verdict.per_prime[0].nullity == 2);
    CHECK(verdict.per_prime[1].nullity == 1);
    // nullity over Q is 1: a genuine witness exists and reconstruction finds it
    CHECK(verdict.kind == RationalVerdictKind::NONVANISHING_OVER_Q);
    REQUIRE(verdict.witness.has_value());
    CHECK((*verdict.witness)[0] == -(*verdict.witness)[1]);
}

TEST_CASE("certify requires two primes") {
    ConstraintSystem<ZZ> sys = system_from_dense({{1, 1}}, 2);
    CHECK_THROWS_AS(certify_rational(sys, {10007}), usage_error);
}

}  // TEST_SUITE
