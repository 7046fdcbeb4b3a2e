// Exact rank/nullspace computation: sparse Gaussian elimination over F_p or
// the rationals with the per-block inductive schedule, plus multi-prime
// certification with rational witness reconstruction.
//
// Soundness rule used throughout: for an integer matrix, rank over F_p never
// exceeds rank over Q, so nullity 0 modulo any admissible prime certifies
// nullity 0 over the rationals.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jetvanish/constraints.hpp"

namespace jv {

struct SolveStats {
    std::uint64_t pivots = 0;
    std::uint64_t rows_seen = 0;
    std::uint64_t axpy_ops = 0;        // row combinations performed
    std::uint64_t echelon_entries = 0; // fill-in: entries stored in the echelon
    double elapsed_s = 0.0;
};

// Row-echelon state. Echelon rows are normalized (leading coefficient one)
// and indexed by their leading column; the solved-substitution view of an
// unknown is its pivot row read as unknown = -(tail of the row).
template <class F>
struct EliminationState {
    std::size_t num_cols = 0;
    std::vector<LinForm<F>> echelon;
    std::vector<std::int64_t> pivot_row_of_col;  // -1 when the column is free so far
    SolveStats stats;

    explicit EliminationState(std::size_t cols) : num_cols(cols), pivot_row_of_col(cols, -1) {}
    std::size_t rank() const { return echelon.size(); }
};

// Reduces a row against the echelon (leading-entry cancellations only);
// returns the reduced row, possibly empty.
template <class F>
LinForm<F> reduce_row(const F& f, const EliminationState<F>& state, LinForm<F> row,
                      std::uint64_t* axpy_count = nullptr);

// Eliminates one block: a parallel wave reduces every incoming row against
// the frozen echelon, then pivots are committed serially by the deterministic
// rule (minimal current length, then lowest leading column, then arrival
// order). Deterministic in the thread count.
template <class F>
void eliminate_block(const F& f, EliminationState<F>& state, const std::vector<LinForm<F>>& rows,
                     int threads = 1);

struct NullspaceResult {
    std::uint64_t prime = 0;  // 0 for rational runs
    std::size_t rank = 0;
    std::size_t nullity = 0;
    std::vector<std::size_t> rows_per_block;
    SolveStats stats;
};

// Per-block elimination of a full system; checks the spec preconditions on p
// against (d, deformation) when a scenario is supplied.
NullspaceResult nullity_mod_p(const ConstraintSystem<GF>& system, const GF& f, int threads = 1,
                              const SurfaceSpec* spec = nullptr);
NullspaceResult nullity_rational(const ConstraintSystem<ZZ>& system, int threads = 1);

// Basis of the nullspace as full assignment vectors; every vector is
// re-verified against all rows (internal error on failure). One vector per
// free column, that column set to one.
template <class F>
std::vector<std::vector<typename F::elem>> nullspace_basis(const F& f,
                                                           const EliminationState<F>& state,
                                                           const std::vector<LinForm<F>>& all_rows);

// Convenience: eliminate + basis for a system over one field.
template <class F>
std::pair<EliminationState<F>, std::vector<std::vector<typename F::elem>>>
solve_system(const F& f, const ConstraintSystem<F>& system, int threads = 1);

enum class RationalVerdictKind { VANISHES_OVER_Q, NONVANISHING_OVER_Q, NONTRIVIAL_MOD_ALL };

struct PrimeOutcome {
    std::uint64_t prime;
    std::size_t rank;
    std::size_t nullity;
};

struct RationalVerdict {
    RationalVerdictKind kind;
    std::vector<PrimeOutcome> per_prime;
    std::optional<std::vector<BigRat>> witness;  // exact nullvector when reconstructed
    std::string note;                            // reconstruction diagnostics
};

// Runs the system modulo each prime. Any nullity 0 certifies vanishing over
// Q. Otherwise a mod-p nullvector is lifted by rational reconstruction (CRT
// over as many of the supplied primes as needed) and verified exactly against
// the integer rows; success upgrades the verdict to NONVANISHING_OVER_Q.
// Reconstruction failure is reported in `note`, not fatal.
RationalVerdict certify_rational(const ConstraintSystem<ZZ>& system,
                                 const std::vector<std::uint64_t>& primes, int threads = 1);

// Reduces an integer system modulo p.
ConstraintSystem<GF> reduce_system_mod_p(const ConstraintSystem<ZZ>& system, const GF& f);

}  // namespace jv
