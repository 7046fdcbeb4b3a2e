#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "jetvanish/fields.hpp"

namespace jv {

// Exponent tuple over at most 3 ambient variables (x, y, z); unused trailing
// variables stay at 0. Term order is graded lex with variable order (x, y, z):
// compare total degree first, then exponents of x, y, z.
struct Monomial {
    std::array<std::uint16_t, 3> e{0, 0, 0};

    Monomial() = default;
    Monomial(unsigned ex, unsigned ey, unsigned ez = 0)
        : e{static_cast<std::uint16_t>(ex), static_cast<std::uint16_t>(ey), static_cast<std::uint16_t>(ez)} {}

    unsigned total_degree() const { return unsigned(e[0]) + e[1] + e[2]; }

    // Order-preserving packing: total degree in the top bits, then x, y, z.
    std::uint64_t pack() const {
        return (std::uint64_t(total_degree()) << 48) | (std::uint64_t(e[0]) << 32) |
               (std::uint64_t(e[1]) << 16) | std::uint64_t(e[2]);
    }
    static Monomial unpack(std::uint64_t k) {
        Monomial m;
        m.e[0] = static_cast<std::uint16_t>((k >> 32) & 0xffff);
        m.e[1] = static_cast<std::uint16_t>((k >> 16) & 0xffff);
        m.e[2] = static_cast<std::uint16_t>(k & 0xffff);
        return m;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
        return a.pack() <=> b.pack();
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        for (int i = 0; i < 3; ++i) {
            unsigned s = unsigned(e[i]) + o.e[i];
            if (s > 0xffff) throw internal_error("Monomial: exponent overflow");
            r.e[i] = static_cast<std::uint16_t>(s);
        }
        return r;
    }
};

// All monomials in num_vars variables of total degree <= max_total_degree,
// optionally respecting per-variable exponent caps, in canonical order.
std::vector<Monomial> monomial_basis(int num_vars, int max_total_degree,
                                     const std::vector<int>* per_var_caps = nullptr);

std::string monomial_text(const Monomial& m, int num_vars);

}  // namespace jv
