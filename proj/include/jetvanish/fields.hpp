// Exact coefficient arithmetic: prime fields with a dynamic word-sized
// modulus, arbitrary-precision rationals and integers, plus the small
// number-theoretic helpers the solver needs (primality, rational
// reconstruction, CRT).
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace jv {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Thrown on violated operation preconditions (bad arity, bad modulus, ...).
struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when an internal invariant breaks; never expected on valid input.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

// Prime field F_p. Elements are canonical residues in [0, p).
// Operations take the field object explicitly; elements are plain integers.
struct GF {
    using elem = std::uint64_t;
    std::uint64_t p;

    explicit GF(std::uint64_t modulus) : p(modulus) {
        if (!is_prime_u64(modulus)) throw usage_error("GF: modulus " + std::to_string(modulus) + " is not prime");
        if (modulus >= (1ull << 62)) throw usage_error("GF: modulus too large");
    }

    elem zero() const { return 0; }
    elem one() const { return 1 % p; }
    bool is_zero(elem a) const { return a == 0; }
    bool is_one(elem a) const { return a == 1 % p; }
    elem add(elem a, elem b) const { elem s = a + b; return s >= p ? s - p : s; }
    elem sub(elem a, elem b) const { return a >= b ? a - b : a + p - b; }
    elem neg(elem a) const { return a == 0 ? 0 : p - a; }
    elem mul(elem a, elem b) const { return mulmod_u64(a, b, p); }
    elem inv(elem a) const {
        if (a == 0) throw usage_error("GF: inverse of zero");
        return powmod_u64(a, p - 2, p);
    }
    elem from_int(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p);
        if (r < 0) r += static_cast<std::int64_t>(p);
        return static_cast<elem>(r);
    }
    elem from_bigint(const BigInt& v) const {
        BigInt r = v % BigInt(p);
        if (r < 0) r += p;
        return r.convert_to<std::uint64_t>();
    }
    std::string to_string(elem a) const { return std::to_string(a); }
    bool equal(elem a, elem b) const { return a == b; }
};

// Field of arbitrary-precision rationals.
struct QQ {
    using elem = BigRat;

    elem zero() const { return 0; }
    elem one() const { return 1; }
    bool is_zero(const elem& a) const { return a == 0; }
    bool is_one(const elem& a) const { return a == 1; }
    elem add(const elem& a, const elem& b) const { return a + b; }
    elem sub(const elem& a, const elem& b) const { return a - b; }
    elem neg(const elem& a) const { return -a; }
    elem mul(const elem& a, const elem& b) const { return a * b; }
    elem inv(const elem& a) const {
        if (a == 0) throw usage_error("QQ: inverse of zero");
        return 1 / a;
    }
    elem from_int(std::int64_t v) const { return elem(v); }
    elem from_bigint(const BigInt& v) const { return elem(v); }
    std::string to_string(const elem& a) const { return a.str(); }
    bool equal(const elem& a, const elem& b) const { return a == b; }
};

// Ring of arbitrary-precision integers (no inverses; elimination uses QQ or GF).
struct ZZ {
    using elem = BigInt;

    elem zero() const { return 0; }
    elem one() const { return 1; }
    bool is_zero(const elem& a) const { return a == 0; }
    bool is_one(const elem& a) const { return a == 1; }
    elem add(const elem& a, const elem& b) const { return a + b; }
    elem sub(const elem& a, const elem& b) const { return a - b; }
    elem neg(const elem& a) const { return -a; }
    elem mul(const elem& a, const elem& b) const { return a * b; }
    elem from_int(std::int64_t v) const { return elem(v); }
    elem from_bigint(const BigInt& v) const { return v; }
    std::string to_string(const elem& a) const { return a.str(); }
    bool equal(const elem& a, const elem& b) const { return a == b; }
};

// Default solve primes: the two largest primes below 2^31. The paper-sized
// small primes (17, 19) remain selectable through configs for cross-checks.
inline constexpr std::uint64_t kDefaultPrime = 2147483647ull;      // 2^31 - 1
inline constexpr std::uint64_t kSecondaryPrime = 2147483629ull;    // 2^31 - 19

// Rational reconstruction (Wang): given r mod m, find n/d with
// |n|, d <= sqrt(m/2), d > 0, gcd(d, m) = 1 and n = r d mod m.
// Returns false when no such fraction exists.
bool rational_reconstruct(const BigInt& r, const BigInt& m, BigRat& out);

// CRT lift of (r1 mod m1, r2 mod m2) with coprime moduli.
BigInt crt_pair(const BigInt& r1, const BigInt& m1, const BigInt& r2, const BigInt& m2);

// Deterministic splitmix64-based RNG; std distributions are not portable,
// so tests draw through this.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // Uniform in [0, n).
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
    std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
};

}  // namespace jv
