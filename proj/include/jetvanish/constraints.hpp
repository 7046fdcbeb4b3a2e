// Converts transitioned numerators and their required divisibility powers
// into homogeneous linear rows over the unknowns, organized into per-power
// blocks for the inductive elimination schedule.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "jetvanish/jettrans.hpp"

namespace jv {

struct RowProvenance {
    JetMonomial jet;
    Monomial mono;
};

template <class F>
struct ConstraintBlock {
    int power = 0;
    std::vector<LinForm<F>> rows;          // normalized, deduplicated, canonically ordered
    std::vector<RowProvenance> provenance; // aligned with rows
};

template <class F>
struct ConstraintSystem {
    std::vector<ConstraintBlock<F>> blocks;  // ascending power; empty blocks omitted
    std::size_t num_unknowns = 0;
    std::size_t total_rows = 0;  // after deduplication
    std::size_t raw_rows = 0;    // before deduplication

    std::uint64_t total_entries() const {
        std::uint64_t n = 0;
        for (auto& b : blocks)
            for (auto& r : b.rows) n += r.size();
        return n;
    }
};

// Splits a numerator at the divisibility threshold: the violating part holds
// every term with constrained-variable exponent < (d-1) * i (these must
// vanish); the quotient part holds the remaining terms divided exactly by the
// constrained power. violating + quotient * v^{(d-1)i} reassembles the input.
template <class F, class Carrier>
std::pair<Carrier, Carrier> truncate(const Carrier& numerator, int i, const SurfaceSpec& spec);

// Scales a row so its leading (lowest-id) coefficient is one over a field, or
// divides by the content and fixes the sign over ZZ. Zero constant asserted.
template <class F>
LinForm<F> normalize_row(const F& f, const LinForm<F>& row);

template <class F>
std::string row_text(const F& f, const LinForm<F>& row);

// Incremental row accumulator: transitioned numerators can be fed one target
// at a time and released, keeping the peak footprint at a single numerator.
template <class F>
class SystemBuilder {
  public:
    SystemBuilder(const F& f, const SurfaceSpec& spec) : f_(f), spec_(spec) {}

    void add(const TransitionTerm<F, ParamPoly<F>>& term);
    ConstraintSystem<F> finalize(std::size_t num_unknowns);

  private:
    struct Staged {
        std::vector<std::pair<LinForm<F>, RowProvenance>> rows;
        std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
    };
    const F& f_;
    SurfaceSpec spec_;
    std::map<int, Staged> staged_;
    std::size_t raw_ = 0;
};

// One row per (jet monomial, violating monomial) pair; block i collects all
// jet monomials with required power i. Deterministic: assembling twice yields
// identical serialized systems.
template <class F>
ConstraintSystem<F> assemble(const F& f,
                             const std::vector<TransitionTerm<F, ParamPoly<F>>>& terms,
                             const SurfaceSpec& spec, std::size_t num_unknowns);

// Plain-text sparse export: a fixed header, per-block row counts, then
// "row col value" triples with global row indices in block order. `prime` is
// 0 for integer systems.
template <class F>
std::string export_system(const F& f, const ConstraintSystem<F>& system, const SurfaceSpec& spec,
                          int m, int t, std::uint64_t prime);

// Reads the export format back (block structure and rows; provenance lost).
ConstraintSystem<GF> parse_system_gf(const std::string& text, std::uint64_t* prime_out = nullptr);
ConstraintSystem<ZZ> parse_system_zz(const std::string& text);

// FNV-1a over the serialized system; reproducibility hash for reports.
template <class F>
std::uint64_t system_hash(const F& f, const ConstraintSystem<F>& system);

}  // namespace jv
