#include <cctype>

#include "jetvanish/sparse_poly.hpp"

namespace jv {

std::vector<Monomial> monomial_basis(int num_vars, int max_total_degree,
                                     const std::vector<int>* per_var_caps) {
    if (num_vars < 1 || num_vars > 3) throw usage_error("monomial_basis: num_vars must be 1..3");
    if (max_total_degree < 0) throw usage_error("monomial_basis: negative degree bound");
    auto cap = [&](int v) {
        if (per_var_caps && v < static_cast<int>(per_var_caps->size()) && (*per_var_caps)[v] >= 0)
            return std::min((*per_var_caps)[v], max_total_degree);
        return max_total_degree;
    };
    std::vector<Monomial> out;
    for (int ex = 0; ex <= cap(0); ++ex) {
        if (num_vars == 1) {
            out.push_back(Monomial(ex, 0, 0));
            continue;
        }
        for (int ey = 0; ex + ey <= max_total_degree && ey <= cap(1); ++ey) {
            if (num_vars == 2) {
                out.push_back(Monomial(ex, ey, 0));
                continue;
            }
            for (int ez = 0; ex + ey + ez <= max_total_degree && ez <= cap(2); ++ez)
                out.push_back(Monomial(ex, ey, ez));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string monomial_text(const Monomial& m, int num_vars) {
    static const char* names[3] = {"x", "y", "z"};
    std::string out;
    for (int v = 0; v < num_vars; ++v) {
        if (v) out += " ";
        out += names[v];
        out += "^";
        out += std::to_string(m.e[v]);
    }
    return out;
}

namespace {

// Parses "c * x^a y^b [z^c]" terms joined by " + "; coefficients may be
// signed and, for the rational field, of the form "n/d".
template <class F>
SparsePoly<F> parse_impl(const F& f, const std::string& text, int num_vars) {
    auto fail = [&](const std::string& why) -> SparsePoly<F> {
        throw usage_error("poly_parse: " + why + " in \"" + text + "\"");
    };
    std::size_t pos = 0;
    auto skip_ws = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
    skip_ws();
    if (text.compare(pos, 1, "0") == 0 && pos + 1 >= text.size()) return {};
    std::vector<std::pair<Monomial, typename F::elem>> terms;
    while (pos < text.size()) {
        skip_ws();
        // coefficient: [-]digits[/digits]
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/')) ++pos;
        if (pos == start) return fail("expected coefficient");
        std::string coeff_str = text.substr(start, pos - start);
        typename F::elem coeff;
        {
            auto slash = coeff_str.find('/');
            if (slash == std::string::npos) {
                coeff = f.from_bigint(BigInt(coeff_str));
            } else {
                BigInt num(coeff_str.substr(0, slash));
                BigInt den(coeff_str.substr(slash + 1));
                if (den == 0) return fail("zero denominator");
                // num/den in the field
                if constexpr (std::is_same_v<F, QQ>) {
                    coeff = BigRat(num, den);
                } else if constexpr (std::is_same_v<F, GF>) {
                    auto d = f.from_bigint(den);
                    coeff = f.mul(f.from_bigint(num), f.inv(d));
                } else {
                    if (num % den != 0) return fail("non-integer coefficient");
                    coeff = f.from_bigint(num / den);
                }
            }
        }
        skip_ws();
        if (pos >= text.size() || text[pos] != '*') return fail("expected '*'");
        ++pos;
        Monomial m;
        for (int v = 0; v < num_vars; ++v) {
            skip_ws();
            static const char* names = "xyz";
            if (pos >= text.size() || text[pos] != names[v]) return fail("expected variable");
            ++pos;
            if (pos >= text.size() || text[pos] != '^') return fail("expected '^'");
            ++pos;
            std::size_t es = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == es) return fail("expected exponent");
            m.e[v] = static_cast<std::uint16_t>(std::stoul(text.substr(es, pos - es)));
        }
        terms.push_back({m, coeff});
        skip_ws();
        if (pos >= text.size()) break;
        if (text[pos] != '+') return fail("expected '+'");
        ++pos;
    }
    return poly_from_terms(f, std::move(terms));
}

}  // namespace

template <class F>
SparsePoly<F> poly_parse(const F& f, const std::string& text, int num_vars) {
    return parse_impl(f, text, num_vars);
}

template SparsePoly<GF> poly_parse<GF>(const GF&, const std::string&, int);
template SparsePoly<QQ> poly_parse<QQ>(const QQ&, const std::string&, int);
template SparsePoly<ZZ> poly_parse<ZZ>(const ZZ&, const std::string&, int);

}  // namespace jv
