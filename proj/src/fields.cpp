#include "jetvanish/fields.hpp"

namespace jv {

bool rational_reconstruct(const BigInt& r, const BigInt& m, BigRat& out) {
    if (m <= 1) return false;
    BigInt bound;
    {
        // bound = floor(sqrt(m/2))
        BigInt half = m / 2;
        bound = boost::multiprecision::sqrt(half);
    }
    BigInt r0 = m, r1 = r % m;
    if (r1 < 0) r1 += m;
    BigInt t0 = 0, t1 = 1;
    while (r1 > bound) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        BigInt t2 = t0 - q * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    if (t1 == 0) return false;
    BigInt num = r1, den = t1;
    if (den < 0) { den = -den; num = -num; }
    if (den > bound) return false;
    if (boost::multiprecision::gcd(den, m) != 1) return false;
    out = BigRat(num, den);
    return true;
}

BigInt crt_pair(const BigInt& r1, const BigInt& m1, const BigInt& r2, const BigInt& m2) {
    // x = r1 + m1 * ((r2 - r1) * m1^{-1} mod m2)
    BigInt g, s, t;
    // extended gcd of m1, m2
    BigInt a = m1, b = m2, x0 = 1, x1 = 0;
    while (b != 0) {
        BigInt q = a / b;
        BigInt tmp = a - q * b; a = b; b = tmp;
        tmp = x0 - q * x1; x0 = x1; x1 = tmp;
    }
    if (a != 1) throw usage_error("crt_pair: moduli not coprime");
    BigInt inv = x0 % m2;
    if (inv < 0) inv += m2;
    BigInt diff = (r2 - r1) % m2;
    if (diff < 0) diff += m2;
    BigInt k = (diff * inv) % m2;
    return r1 + m1 * k;
}

}  // namespace jv
