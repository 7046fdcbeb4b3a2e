#include "jetvanish/constraints.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

namespace jv {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = kFnvOffset) {
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

}  // namespace

template <class F, class Carrier>
std::pair<Carrier, Carrier> truncate(const Carrier& numerator, int i, const SurfaceSpec& spec) {
    if (i < 1) throw usage_error("truncate: power must be >= 1");
    const int v = spec.constrained_var();
    const int threshold = (spec.d - 1) * i;
    Carrier violating, quotient;
    for (auto& term : numerator.terms) {
        if (static_cast<int>(term.first.e[v]) < threshold) {
            violating.terms.push_back(term);
        } else {
            auto t = term;
            t.first.e[v] = static_cast<std::uint16_t>(t.first.e[v] - threshold);
            quotient.terms.push_back(t);
        }
    }
    return {std::move(violating), std::move(quotient)};
}

template <class F>
LinForm<F> normalize_row(const F& f, const LinForm<F>& row) {
    if (!f.is_zero(row.constant))
        throw internal_error("normalize_row: system must be homogeneous");
    if (row.coeffs.empty()) return row;
    LinForm<F> out = row;
    if constexpr (std::is_same_v<F, ZZ>) {
        BigInt g = 0;
        for (auto& [id, c] : out.coeffs) g = boost::multiprecision::gcd(g, c);
        if (g != 0) {
            bool flip = out.coeffs.front().second < 0;
            for (auto& [id, c] : out.coeffs) {
                c /= g;
                if (flip) c = -c;
            }
        }
    } else {
        auto lead = out.coeffs.front().second;
        if (!f.is_one(lead)) {
            auto inv = f.inv(lead);
            for (auto& [id, c] : out.coeffs) c = f.mul(c, inv);
        }
    }
    return out;
}

template <class F>
std::string row_text(const F& f, const LinForm<F>& row) {
    std::string s;
    for (auto& [id, c] : row.coeffs) {
        s += std::to_string(id);
        s += ':';
        s += f.to_string(c);
        s += ' ';
    }
    return s;
}

namespace {

// Total order on normalized rows: lexicographic over (id, coefficient) pairs,
// shorter prefix first. Deterministic and allocation-free.
template <class F>
bool row_lt(const LinForm<F>& a, const LinForm<F>& b) {
    std::size_t n = std::min(a.coeffs.size(), b.coeffs.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.coeffs[i].first != b.coeffs[i].first) return a.coeffs[i].first < b.coeffs[i].first;
        if (a.coeffs[i].second != b.coeffs[i].second) return a.coeffs[i].second < b.coeffs[i].second;
    }
    return a.coeffs.size() < b.coeffs.size();
}

template <class F>
std::uint64_t row_hash(const F& f, const LinForm<F>& row) {
    std::uint64_t h = kFnvOffset;
    for (auto& [id, c] : row.coeffs) {
        h ^= id;
        h *= kFnvPrime;
        h = fnv1a(f.to_string(c), h);
    }
    return h;
}

}  // namespace

template <class F>
void SystemBuilder<F>::add(const TransitionTerm<F, ParamPoly<F>>& term) {
    int i = term.required_power;
    if (i <= 0) return;
    auto violating = truncate<F, ParamPoly<F>>(term.numerator, i, spec_).first;
    auto& st = staged_[i];
    for (auto& [mono, lf] : violating.terms) {
        ++raw_;
        if (!f_.is_zero(lf.constant))
            throw internal_error("assemble: row with nonzero constant term");
        LinForm<F> row = normalize_row(f_, lf);
        std::uint64_t h = row_hash(f_, row);
        auto& bucket = st.buckets[h];
        bool dup = false;
        for (std::size_t idx : bucket)
            if (lin_equal(f_, st.rows[idx].first, row)) { dup = true; break; }
        if (dup) continue;
        bucket.push_back(st.rows.size());
        st.rows.push_back({std::move(row), RowProvenance{term.jet, mono}});
    }
}

template <class F>
ConstraintSystem<F> SystemBuilder<F>::finalize(std::size_t num_unknowns) {
    ConstraintSystem<F> out;
    out.num_unknowns = num_unknowns;
    out.raw_rows = raw_;
    for (auto& [power, st] : staged_) {
        std::vector<std::size_t> order(st.rows.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return row_lt<F>(st.rows[a].first, st.rows[b].first);
        });
        ConstraintBlock<F> block;
        block.power = power;
        block.rows.reserve(order.size());
        block.provenance.reserve(order.size());
        for (std::size_t idx : order) {
            block.rows.push_back(std::move(st.rows[idx].first));
            block.provenance.push_back(st.rows[idx].second);
        }
        out.total_rows += block.rows.size();
        out.blocks.push_back(std::move(block));
    }
    staged_.clear();
    raw_ = 0;
    return out;
}

template <class F>
ConstraintSystem<F> assemble(const F& f,
                             const std::vector<TransitionTerm<F, ParamPoly<F>>>& terms,
                             const SurfaceSpec& spec, std::size_t num_unknowns) {
    SystemBuilder<F> builder(f, spec);
    for (auto& term : terms) builder.add(term);
    return builder.finalize(num_unknowns);
}

template <class F>
std::string export_system(const F& f, const ConstraintSystem<F>& system, const SurfaceSpec& spec,
                          int m, int t, std::uint64_t prime) {
    std::ostringstream os;
    os << "jetvanish-system v1\n";
    os << "case " << (spec.kind == CaseKind::compact ? "compact" : "logarithmic") << " d " << spec.d
       << " m " << m << " t " << t << " prime " << prime << " unknowns " << system.num_unknowns
       << " rows " << system.total_rows << "\n";
    std::size_t row_index = 0;
    for (auto& block : system.blocks) {
        os << "block " << block.power << " rows " << block.rows.size() << "\n";
        for (auto& row : block.rows) {
            for (auto& [col, c] : row.coeffs)
                os << row_index << " " << col << " " << f.to_string(c) << "\n";
            ++row_index;
        }
    }
    return os.str();
}

namespace {

template <class F>
ConstraintSystem<F> parse_impl(const F& f, const std::string& text, std::uint64_t* prime_out) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "jetvanish-system v1")
        throw usage_error("parse_system: bad magic line");
    if (!std::getline(is, line)) throw usage_error("parse_system: missing header");
    std::istringstream hs(line);
    std::string word, kindw;
    int d = 0, m = 0, t = 0;
    std::uint64_t prime = 0;
    std::size_t unknowns = 0, rows = 0;
    hs >> word >> kindw;
    while (hs >> word) {
        if (word == "d") hs >> d;
        else if (word == "m") hs >> m;
        else if (word == "t") hs >> t;
        else if (word == "prime") hs >> prime;
        else if (word == "unknowns") hs >> unknowns;
        else if (word == "rows") hs >> rows;
    }
    if (prime_out) *prime_out = prime;
    ConstraintSystem<F> out;
    out.num_unknowns = unknowns;
    ConstraintBlock<F>* current = nullptr;
    std::size_t block_start = 0, block_rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string first;
        ls >> first;
        if (first == "block") {
            int power;
            std::string rw;
            ls >> power >> rw >> block_rows;
            out.blocks.push_back({});
            current = &out.blocks.back();
            current->power = power;
            current->rows.resize(block_rows);
            current->provenance.resize(block_rows);
            for (auto& r : current->rows) r.constant = f.zero();
            block_start = out.total_rows;
            out.total_rows += block_rows;
            continue;
        }
        if (!current) throw usage_error("parse_system: entry before block header");
        std::size_t row = std::stoull(first);
        std::uint32_t col;
        std::string value;
        ls >> col >> value;
        if (row < block_start || row >= block_start + block_rows)
            throw usage_error("parse_system: row index outside current block");
        current->rows[row - block_start].coeffs.push_back({col, f.from_bigint(BigInt(value))});
    }
    out.raw_rows = out.total_rows;
    for (auto& b : out.blocks)
        for (auto& r : b.rows)
            std::sort(r.coeffs.begin(), r.coeffs.end(),
                      [](const auto& a, const auto& c) { return a.first < c.first; });
    return out;
}

}  // namespace

ConstraintSystem<GF> parse_system_gf(const std::string& text, std::uint64_t* prime_out) {
    std::uint64_t prime = 0;
    {
        // peek the header for the modulus before constructing the field
        std::istringstream is(text);
        std::string line;
        std::getline(is, line);
        std::getline(is, line);
        auto pos = line.find("prime ");
        if (pos == std::string::npos) throw usage_error("parse_system: no prime in header");
        prime = std::stoull(line.substr(pos + 6));
    }
    if (prime == 0) throw usage_error("parse_system: expected a modular system");
    GF f(prime);
    if (prime_out) *prime_out = prime;
    return parse_impl(f, text, nullptr);
}

ConstraintSystem<ZZ> parse_system_zz(const std::string& text) {
    ZZ f;
    return parse_impl(f, text, nullptr);
}

template <class F>
std::uint64_t system_hash(const F& f, const ConstraintSystem<F>& system) {
    std::uint64_t h = kFnvOffset;
    h = fnv1a("unknowns " + std::to_string(system.num_unknowns), h);
    for (auto& block : system.blocks) {
        h = fnv1a("block " + std::to_string(block.power), h);
        for (auto& row : block.rows) h = fnv1a(row_text(f, row), h);
    }
    return h;
}

// Explicit instantiations.
template std::pair<ParamPoly<GF>, ParamPoly<GF>> truncate<GF, ParamPoly<GF>>(const ParamPoly<GF>&, int, const SurfaceSpec&);
template std::pair<ParamPoly<QQ>, ParamPoly<QQ>> truncate<QQ, ParamPoly<QQ>>(const ParamPoly<QQ>&, int, const SurfaceSpec&);
template std::pair<ParamPoly<ZZ>, ParamPoly<ZZ>> truncate<ZZ, ParamPoly<ZZ>>(const ParamPoly<ZZ>&, int, const SurfaceSpec&);
template std::pair<SparsePoly<GF>, SparsePoly<GF>> truncate<GF, SparsePoly<GF>>(const SparsePoly<GF>&, int, const SurfaceSpec&);
template std::pair<SparsePoly<QQ>, SparsePoly<QQ>> truncate<QQ, SparsePoly<QQ>>(const SparsePoly<QQ>&, int, const SurfaceSpec&);
template std::pair<SparsePoly<ZZ>, SparsePoly<ZZ>> truncate<ZZ, SparsePoly<ZZ>>(const SparsePoly<ZZ>&, int, const SurfaceSpec&);
template LinForm<GF> normalize_row<GF>(const GF&, const LinForm<GF>&);
template LinForm<QQ> normalize_row<QQ>(const QQ&, const LinForm<QQ>&);
template LinForm<ZZ> normalize_row<ZZ>(const ZZ&, const LinForm<ZZ>&);
template std::string row_text<GF>(const GF&, const LinForm<GF>&);
template std::string row_text<QQ>(const QQ&, const LinForm<QQ>&);
template std::string row_text<ZZ>(const ZZ&, const LinForm<ZZ>&);
template class SystemBuilder<GF>;
template class SystemBuilder<QQ>;
template class SystemBuilder<ZZ>;
template ConstraintSystem<GF> assemble<GF>(const GF&, const std::vector<TransitionTerm<GF, ParamPoly<GF>>>&, const SurfaceSpec&, std::size_t);
template ConstraintSystem<QQ> assemble<QQ>(const QQ&, const std::vector<TransitionTerm<QQ, ParamPoly<QQ>>>&, const SurfaceSpec&, std::size_t);
template ConstraintSystem<ZZ> assemble<ZZ>(const ZZ&, const std::vector<TransitionTerm<ZZ, ParamPoly<ZZ>>>&, const SurfaceSpec&, std::size_t);
template std::string export_system<GF>(const GF&, const ConstraintSystem<GF>&, const SurfaceSpec&, int, int, std::uint64_t);
template std::string export_system<ZZ>(const ZZ&, const ConstraintSystem<ZZ>&, const SurfaceSpec&, int, int, std::uint64_t);
template std::uint64_t system_hash<GF>(const GF&, const ConstraintSystem<GF>&);
template std::uint64_t system_hash<QQ>(const QQ&, const ConstraintSystem<QQ>&);
template std::uint64_t system_hash<ZZ>(const ZZ&, const ConstraintSystem<ZZ>&);

}  // namespace jv
