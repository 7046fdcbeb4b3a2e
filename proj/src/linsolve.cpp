#include "jetvanish/linsolve.hpp"

#include <algorithm>
#include <chrono>
#include <queue>

#include "jetvanish/parallel.hpp"

namespace jv {

namespace {

// axpy: a - a.lead * pivot, where pivot has leading coefficient one and
// pivot.lead == a.lead. Merge of sorted sparse rows.
template <class F>
LinForm<F> cancel_leading(const F& f, const LinForm<F>& a, const LinForm<F>& pivot) {
    LinForm<F> out;
    out.constant = f.zero();
    out.coeffs.reserve(a.coeffs.size() + pivot.coeffs.size() - 2);
    auto factor = a.coeffs.front().second;  // pivot normalized: leading is one
    std::size_t i = 1, j = 1;               // both leading entries cancel
    while (i < a.coeffs.size() && j < pivot.coeffs.size()) {
        std::uint32_t ca = a.coeffs[i].first, cp = pivot.coeffs[j].first;
        if (ca < cp) {
            out.coeffs.push_back(a.coeffs[i++]);
        } else if (cp < ca) {
            auto v = f.neg(f.mul(factor, pivot.coeffs[j].second));
            if (!f.is_zero(v)) out.coeffs.push_back({cp, v});
            ++j;
        } else {
            auto v = f.sub(a.coeffs[i].second, f.mul(factor, pivot.coeffs[j].second));
            if (!f.is_zero(v)) out.coeffs.push_back({ca, v});
            ++i; ++j;
        }
    }
    for (; i < a.coeffs.size(); ++i) out.coeffs.push_back(a.coeffs[i]);
    for (; j < pivot.coeffs.size(); ++j) {
        auto v = f.neg(f.mul(factor, pivot.coeffs[j].second));
        if (!f.is_zero(v)) out.coeffs.push_back({pivot.coeffs[j].first, v});
    }
    return out;
}

template <class F>
void normalize_leading(const F& f, LinForm<F>& row) {
    if (row.coeffs.empty()) return;
    auto lead = row.coeffs.front().second;
    if (f.is_one(lead)) return;
    auto inv = f.inv(lead);
    for (auto& [id, c] : row.coeffs) c = f.mul(c, inv);
}

}  // namespace

template <class F>
LinForm<F> reduce_row(const F& f, const EliminationState<F>& state, LinForm<F> row,
                      std::uint64_t* axpy_count) {
    while (!row.coeffs.empty()) {
        std::uint32_t lead = row.coeffs.front().first;
        std::int64_t pr = state.pivot_row_of_col[lead];
        if (pr < 0) break;
        row = cancel_leading(f, row, state.echelon[static_cast<std::size_t>(pr)]);
        if (axpy_count) ++*axpy_count;
    }
    return row;
}

template <class F>
void eliminate_block(const F& f, EliminationState<F>& state, const std::vector<LinForm<F>>& rows,
                     int threads) {
    state.stats.rows_seen += rows.size();

    // Wave: reduce all incoming rows against the frozen echelon in parallel.
    std::vector<LinForm<F>> pending(rows.size());
    std::vector<std::uint64_t> axpy(rows.size(), 0);
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        pending[i] = reduce_row(f, state, rows[i], &axpy[i]);
    });
    for (auto a : axpy) state.stats.axpy_ops += a;

    // Serial commits under the pivot rule: minimal current length, then lowest
    // leading column, then arrival order. Entries with stale keys are
    // re-reduced lazily against pivots committed inside this block.
    struct Key {
        std::size_t len;
        std::uint32_t lead;
        std::size_t seq;
        bool operator>(const Key& o) const {
            if (len != o.len) return len > o.len;
            if (lead != o.lead) return lead > o.lead;
            return seq > o.seq;
        }
    };
    std::priority_queue<Key, std::vector<Key>, std::greater<Key>> heap;
    for (std::size_t i = 0; i < pending.size(); ++i)
        if (!pending[i].coeffs.empty())
            heap.push({pending[i].coeffs.size(), pending[i].coeffs.front().first, i});

    while (!heap.empty()) {
        Key k = heap.top();
        heap.pop();
        LinForm<F>& row = pending[k.seq];
        if (row.coeffs.empty()) continue;
        if (row.coeffs.size() != k.len || row.coeffs.front().first != k.lead)
            continue;  // stale heap entry; the fresh one is queued
        if (state.pivot_row_of_col[row.coeffs.front().first] >= 0) {
            row = reduce_row(f, state, std::move(row), &state.stats.axpy_ops);
            if (!row.coeffs.empty())
                heap.push({row.coeffs.size(), row.coeffs.front().first, k.seq});
            continue;
        }
        normalize_leading(f, row);
        state.pivot_row_of_col[row.coeffs.front().first] =
            static_cast<std::int64_t>(state.echelon.size());
        state.stats.echelon_entries += row.coeffs.size();
        state.echelon.push_back(std::move(row));
        row.coeffs.clear();
        ++state.stats.pivots;
    }
}

namespace {

template <class F>
NullspaceResult run_blocks(const F& f, const ConstraintSystem<F>& system, int threads,
                           std::uint64_t prime) {
    auto start = std::chrono::steady_clock::now();
    EliminationState<F> state(system.num_unknowns);
    NullspaceResult out;
    out.prime = prime;
    for (auto& block : system.blocks) {
        eliminate_block(f, state, block.rows, threads);
        out.rows_per_block.push_back(block.rows.size());
    }
    out.rank = state.rank();
    out.nullity = system.num_unknowns - out.rank;
    out.stats = state.stats;
    out.stats.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace

NullspaceResult nullity_mod_p(const ConstraintSystem<GF>& system, const GF& f, int threads,
                              const SurfaceSpec* spec) {
    if (spec) {
        if (f.p % static_cast<std::uint64_t>(spec->d) == 0)
            throw usage_error("nullity: prime divides the scenario degree d");
        for (auto& t : spec->deformation) {
            std::int64_t c = t.coeff % static_cast<std::int64_t>(f.p);
            if (c == 0)
                throw usage_error("nullity: prime divides a deformation coefficient");
        }
    }
    return run_blocks(f, system, threads, f.p);
}

NullspaceResult nullity_rational(const ConstraintSystem<ZZ>& system, int threads) {
    // Eliminate over Q after mapping the integer rows.
    QQ q;
    ConstraintSystem<QQ> sys;
    sys.num_unknowns = system.num_unknowns;
    sys.total_rows = system.total_rows;
    sys.raw_rows = system.raw_rows;
    for (auto& block : system.blocks) {
        ConstraintBlock<QQ> b;
        b.power = block.power;
        b.provenance = block.provenance;
        for (auto& row : block.rows) {
            LinForm<QQ> r;
            r.constant = 0;
            r.coeffs.reserve(row.coeffs.size());
            for (auto& [id, c] : row.coeffs) r.coeffs.push_back({id, BigRat(c)});
            b.rows.push_back(std::move(r));
        }
        sys.blocks.push_back(std::move(b));
    }
    return run_blocks(q, sys, threads, 0);
}

template <class F>
std::vector<std::vector<typename F::elem>> nullspace_basis(const F& f,
                                                           const EliminationState<F>& state,
                                                           const std::vector<LinForm<F>>& all_rows) {
    std::vector<std::vector<typename F::elem>> basis;
    // Pivot rows sorted by decreasing leading column for back-substitution.
    std::vector<std::size_t> order;
    order.reserve(state.echelon.size());
    for (std::size_t i = 0; i < state.echelon.size(); ++i) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return state.echelon[a].coeffs.front().first > state.echelon[b].coeffs.front().first;
    });

    for (std::size_t col = 0; col < state.num_cols; ++col) {
        if (state.pivot_row_of_col[col] >= 0) continue;
        std::vector<typename F::elem> vec(state.num_cols, f.zero());
        vec[col] = f.one();
        for (std::size_t idx : order) {
            const LinForm<F>& row = state.echelon[idx];
            std::uint32_t lead = row.coeffs.front().first;
            auto acc = f.zero();
            for (std::size_t i = 1; i < row.coeffs.size(); ++i)
                acc = f.add(acc, f.mul(row.coeffs[i].second, vec[row.coeffs[i].first]));
            vec[lead] = f.neg(acc);
        }
        basis.push_back(std::move(vec));
    }

    for (auto& vec : basis)
        for (auto& row : all_rows)
            if (!f.is_zero(lin_eval(f, row, vec)))
                throw internal_error("nullspace_basis: residual check failed");
    return basis;
}

template <class F>
std::pair<EliminationState<F>, std::vector<std::vector<typename F::elem>>>
solve_system(const F& f, const ConstraintSystem<F>& system, int threads) {
    EliminationState<F> state(system.num_unknowns);
    std::vector<LinForm<F>> all_rows;
    for (auto& block : system.blocks) {
        eliminate_block(f, state, block.rows, threads);
        for (auto& r : block.rows) all_rows.push_back(r);
    }
    auto basis = nullspace_basis(f, state, all_rows);
    return {std::move(state), std::move(basis)};
}

ConstraintSystem<GF> reduce_system_mod_p(const ConstraintSystem<ZZ>& system, const GF& f) {
    ConstraintSystem<GF> out;
    out.num_unknowns = system.num_unknowns;
    out.raw_rows = system.raw_rows;
    for (auto& block : system.blocks) {
        ConstraintBlock<GF> b;
        b.power = block.power;
        b.provenance = block.provenance;
        for (auto& row : block.rows) {
            LinForm<GF> r;
            r.constant = 0;
            r.coeffs.reserve(row.coeffs.size());
            for (auto& [id, c] : row.coeffs) {
                auto v = f.from_bigint(c);
                if (v != 0) r.coeffs.push_back({id, v});
            }
            if (!r.coeffs.empty()) b.rows.push_back(std::move(r));
        }
        out.total_rows += b.rows.size();
        out.blocks.push_back(std::move(b));
    }
    return out;
}

RationalVerdict certify_rational(const ConstraintSystem<ZZ>& system,
                                 const std::vector<std::uint64_t>& primes, int threads) {
    if (primes.size() < 2) throw usage_error("certify_rational: need at least two primes");
    RationalVerdict out;
    out.kind = RationalVerdictKind::NONTRIVIAL_MOD_ALL;

    struct PrimeRun {
        std::uint64_t p;
        EliminationState<GF> state;
        std::vector<std::vector<std::uint64_t>> basis;
    };
    std::vector<PrimeRun> runs;
    for (auto p : primes) {
        GF f(p);
        auto sys = reduce_system_mod_p(system, f);
        auto [state, basis] = solve_system(f, sys, threads);
        out.per_prime.push_back({p, state.rank(), system.num_unknowns - state.rank()});
        if (state.rank() == system.num_unknowns) {
            out.kind = RationalVerdictKind::VANISHES_OVER_Q;
            return out;
        }
        runs.push_back({p, std::move(state), std::move(basis)});
    }

    // Rational witness attempt. Anchor on the prime of minimal nullity (by
    // rank semicontinuity the most faithful to the rational rank); the first
    // basis vector's defining free column has entry one by construction.
    std::vector<std::size_t> order(runs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return runs[a].basis.size() < runs[b].basis.size();
    });
    const PrimeRun& first = runs[order.front()];
    const auto& anchor = first.basis.front();
    std::size_t n = anchor.size();
    std::size_t free_col = 0;
    for (std::size_t c = 0; c < n; ++c)
        if (first.state.pivot_row_of_col[c] < 0) { free_col = c; break; }

    std::vector<BigInt> residues(n);
    for (std::size_t c = 0; c < n; ++c) residues[c] = anchor[c];
    BigInt modulus = first.p;

    auto try_reconstruct = [&](std::string& why) -> std::optional<std::vector<BigRat>> {
        std::vector<BigRat> cand(n);
        for (std::size_t c = 0; c < n; ++c) {
            if (!rational_reconstruct(residues[c], modulus, cand[c])) {
                why = "rational reconstruction failed at column " + std::to_string(c) +
                      " with modulus " + modulus.str();
                return std::nullopt;
            }
        }
        // exact verification against the integer rows
        for (auto& block : system.blocks)
            for (auto& row : block.rows) {
                BigRat acc = 0;
                for (auto& [id, coeff] : row.coeffs) acc += BigRat(coeff) * cand[id];
                if (acc != 0) {
                    why = "reconstructed vector has nonzero residual";
                    return std::nullopt;
                }
            }
        return cand;
    };

    std::string why;
    auto cand = try_reconstruct(why);
    std::size_t next = 1;
    while (!cand && next < order.size()) {
        // Lift with the next prime: find its nullvector with the same free
        // column nonzero, scale that entry to one, CRT with the current lift.
        auto& run = runs[order[next]];
        GF f(run.p);
        const std::vector<std::uint64_t>* match = nullptr;
        for (auto& vec : run.basis)
            if (vec[free_col] != 0) { match = &vec; break; }
        if (!match) {
            why = "no matching nullvector modulo " + std::to_string(run.p);
            break;
        }
        std::uint64_t scale = f.inv((*match)[free_col]);
        for (std::size_t c = 0; c < n; ++c) {
            std::uint64_t rc = f.mul((*match)[c], scale);
            residues[c] = crt_pair(residues[c], modulus, BigInt(rc), BigInt(run.p));
        }
        modulus *= run.p;
        ++next;
        cand = try_reconstruct(why);
    }

    if (cand) {
        out.kind = RationalVerdictKind::NONVANISHING_OVER_Q;
        out.witness = std::move(*cand);
        out.note = "witness reconstructed from modulus " + modulus.str();
    } else {
        out.note = why;
    }
    return out;
}

// Explicit instantiations.
template LinForm<GF> reduce_row<GF>(const GF&, const EliminationState<GF>&, LinForm<GF>, std::uint64_t*);
template LinForm<QQ> reduce_row<QQ>(const QQ&, const EliminationState<QQ>&, LinForm<QQ>, std::uint64_t*);
template void eliminate_block<GF>(const GF&, EliminationState<GF>&, const std::vector<LinForm<GF>>&, int);
template void eliminate_block<QQ>(const QQ&, EliminationState<QQ>&, const std::vector<LinForm<QQ>>&, int);
template std::vector<std::vector<GF::elem>> nullspace_basis<GF>(const GF&, const EliminationState<GF>&, const std::vector<LinForm<GF>>&);
template std::vector<std::vector<QQ::elem>> nullspace_basis<QQ>(const QQ&, const EliminationState<QQ>&, const std::vector<LinForm<QQ>>&);
template std::pair<EliminationState<GF>, std::vector<std::vector<GF::elem>>> solve_system<GF>(const GF&, const ConstraintSystem<GF>&, int);
template std::pair<EliminationState<QQ>, std::vector<std::vector<QQ::elem>>> solve_system<QQ>(const QQ&, const ConstraintSystem<QQ>&, int);

}  // namespace jv
