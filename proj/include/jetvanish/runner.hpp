// Case orchestration: configuration, the scenario -> ansatz -> transition ->
// constraints -> linsolve pipeline, reporting, witness verification, and the
// batch driver for the shipped target tables.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jetvanish/linsolve.hpp"

namespace jv {

inline constexpr const char* kArtifactVersion = "jetvanish 0.1.0";

// Exit codes: 0 vanishing certified, 10 nonvanishing with verified witness,
// 20 inconclusive, >= 64 errors.
enum ExitCode : int {
    kExitVanishes = 0,
    kExitNonvanishing = 10,
    kExitInconclusive = 20,
    kExitConfigError = 64,
    kExitInternalError = 65,
    kExitIoError = 66,
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RunMode { nullity, certify, witness };

struct CaseConfig {
    SurfaceSpec scenario{CaseKind::logarithmic, 12, {}};
    int m = 3;
    int t = 1;
    int jet_order = 2;
    std::vector<std::uint64_t> primes{kDefaultPrime, kSecondaryPrime};
    RunMode mode = RunMode::nullity;
    std::string output_path;  // report destination ("" = stdout only)
    int threads = 1;
};

CaseConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const CaseConfig& config);
CaseConfig load_config(const std::string& path);
// FNV-1a over the canonical dump; identical configs hash identically.
std::uint64_t config_hash(const CaseConfig& config);

// Validates ansatz range limits, prime admissibility and mode coherence
// before any heavy work. Throws config_error.
void validate_config(const CaseConfig& config);

struct PrimeReport {
    NullspaceResult result;
    std::uint64_t system_hash = 0;
};

struct WitnessReport {
    std::vector<BigRat> assignment;
    bool verified = false;
    bool degenerate = false;
    std::string transcript;
};

struct RunReport {
    CaseConfig config;
    std::uint64_t config_hash_value = 0;
    std::size_t unknown_count = 0;
    std::vector<std::pair<int, std::size_t>> rows_per_block;  // (power, rows)
    std::vector<PrimeReport> primes;
    std::string verdict;  // VANISHES_OVER_Q | NONVANISHING_OVER_Q | INCONCLUSIVE
    int exit_code = kExitInconclusive;
    double scenario_s = 0, ansatz_s = 0, transition_s = 0, assemble_s = 0, solve_s = 0;
    std::optional<WitnessReport> witness;
    std::string note;
};

nlohmann::json report_to_json(const RunReport& report);
// Canonical dump with the timing fields removed; reruns of the same config
// must produce identical bytes irrespective of the thread count.
std::string report_stable_text(const RunReport& report);

RunReport run_case(const CaseConfig& config);

struct Witness {
    CaseConfig config;
    std::vector<BigRat> assignment;  // indexed by unknown id
};

struct VerifyOutcome {
    bool ok = false;
    bool degenerate = false;  // zero witness: satisfies everything, certifies nothing
    std::string transcript;
};

// Independent re-check: specializes the families at the witness, re-runs the
// scalar transition over exact rationals, and tests every divisibility
// constraint at its required power. No solver state is trusted.
VerifyOutcome verify_witness(const Witness& witness, int threads = 1);

nlohmann::json witness_to_json(const Witness& witness, const VerifyOutcome& outcome);
Witness witness_from_json(const nlohmann::json& j);

// Exports the mod-p system for a config without solving.
std::string export_case_system(const CaseConfig& config, std::uint64_t prime);

// Ordered unknown-registry CSV for a config.
std::string case_registry_csv(const CaseConfig& config);

struct BatchPreset {
    std::string name;
    std::string description;
    std::vector<CaseConfig> cases;
    std::vector<std::pair<int, int>> blocked;  // (m, t) beyond the proved structure range
};

const std::vector<BatchPreset>& builtin_presets();
const BatchPreset* find_preset(const std::string& name);

struct BatchCaseOutcome {
    CaseConfig config;
    std::string verdict;  // or ERROR: <what>
    std::size_t unknown_count = 0;
    std::vector<std::size_t> nullities;
    double elapsed_s = 0;
    bool skipped = false;  // completion marker found
};

struct BatchSummary {
    std::string preset;
    std::vector<BatchCaseOutcome> outcomes;
    std::vector<std::pair<int, int>> blocked;
};

// Runs a preset; per-case reports land in out_dir and act as resumable
// completion markers. Individual case errors do not abort the batch.
BatchSummary run_batch(const BatchPreset& preset, const std::string& out_dir,
                       const std::vector<std::uint64_t>& prime_override, int threads);

std::string batch_summary_text(const BatchSummary& summary);
nlohmann::json batch_summary_json(const BatchSummary& summary);

}  // namespace jv
