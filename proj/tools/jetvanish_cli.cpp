// Command-line driver: run single cases, batches of shipped target tables,
// witness verification, and sparse-system export.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "jetvanish/runner.hpp"

namespace {

void apply_overrides(jv::CaseConfig& config, const std::vector<std::uint64_t>& primes,
                     int threads, const std::string& report_path) {
    if (!primes.empty()) config.primes = primes;
    if (threads > 0) config.threads = threads;
    if (!report_path.empty()) config.output_path = report_path;
}

int write_or_print(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text << "\n";
        return 0;
    }
    std::ofstream out(path);
    if (!out) {
        std::cerr << "cannot write " << path << "\n";
        return jv::kExitIoError;
    }
    out << text << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"jetvanish: exact linear-system engine for negatively twisted invariant "
                 "2-jet differentials on Fermat-type surfaces and plane-curve complements"};
    app.require_subcommand(1);

    std::string config_path, report_path, out_path, witness_path, preset_name, out_dir;
    std::vector<std::uint64_t> primes;
    int threads = 0;
    std::uint64_t export_prime = 0;
    bool verbose = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--prime", primes, "override the prime list (repeatable)");
        cmd->add_option("--threads", threads, "worker threads");
        cmd->add_flag("-v,--verbose", verbose, "verbose progress output");
    };

    auto* run = app.add_subcommand("run", "run one case from a JSON config");
    run->add_option("--config", config_path, "case config file")->required();
    run->add_option("--report", report_path, "write the JSON report here");
    add_common(run);

    auto* batch = app.add_subcommand("batch", "run a shipped preset table");
    batch->add_option("--preset", preset_name, "preset name (see --list)")->required();
    batch->add_option("--out", out_dir, "directory for per-case reports / resume markers");
    add_common(batch);

    auto* list = app.add_subcommand("list-presets", "list shipped presets");

    auto* verify = app.add_subcommand("verify", "re-verify a witness file exactly");
    verify->add_option("--witness", witness_path, "witness JSON file")->required();
    verify->add_option("--config", config_path, "config file overriding the embedded one");
    add_common(verify);

    auto* exp = app.add_subcommand("export-system", "assemble and export the sparse system");
    exp->add_option("--config", config_path, "case config file")->required();
    exp->add_option("--out", out_path, "output file")->required();
    exp->add_option("--prime", export_prime, "modulus for the exported system");
    exp->add_option("--threads", threads, "worker threads");

    auto* reg = app.add_subcommand("export-registry", "dump the unknown registry CSV");
    reg->add_option("--config", config_path, "case config file")->required();
    reg->add_option("--out", out_path, "output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            jv::CaseConfig config = jv::load_config(config_path);
            apply_overrides(config, primes, threads, report_path);
            jv::RunReport report = jv::run_case(config);
            std::string text = jv::report_to_json(report).dump(2);
            if (!config.output_path.empty()) {
                int rc = write_or_print(config.output_path, text);
                if (rc != 0) return rc;
                std::cout << "verdict " << report.verdict << " (report: " << config.output_path
                          << ")\n";
            } else {
                std::cout << text << "\n";
            }
            if (config.mode == jv::RunMode::witness && report.witness &&
                !config.output_path.empty()) {
                jv::Witness witness{config, report.witness->assignment};
                jv::VerifyOutcome outcome{report.witness->verified, report.witness->degenerate,
                                          report.witness->transcript};
                std::string wpath = config.output_path + ".witness.json";
                int rc = write_or_print(wpath, jv::witness_to_json(witness, outcome).dump(2));
                if (rc != 0) return rc;
                std::cout << "witness written to " << wpath << "\n";
            }
            return report.exit_code;
        }
        if (batch->parsed()) {
            const jv::BatchPreset* preset = jv::find_preset(preset_name);
            if (!preset) {
                std::cerr << "unknown preset: " << preset_name << " (try list-presets)\n";
                return jv::kExitConfigError;
            }
            auto summary = jv::run_batch(*preset, out_dir, primes, threads > 0 ? threads : 1);
            std::cout << jv::batch_summary_text(summary);
            if (!out_dir.empty()) {
                int rc = write_or_print(out_dir + "/" + preset->name + "-summary.json",
                                        jv::batch_summary_json(summary).dump(2));
                if (rc != 0) return rc;
            }
            for (auto& o : summary.outcomes)
                if (o.verdict.rfind("ERROR:", 0) == 0) return jv::kExitInternalError;
            return 0;
        }
        if (list->parsed()) {
            for (auto& p : jv::builtin_presets())
                std::cout << p.name << "  (" << p.cases.size() << " cases"
                          << (p.blocked.empty() ? "" : ", " + std::to_string(p.blocked.size()) +
                                                           " blocked on theory")
                          << ")  " << p.description << "\n";
            return 0;
        }
        if (verify->parsed()) {
            std::ifstream in(witness_path);
            if (!in) {
                std::cerr << "cannot open witness file\n";
                return jv::kExitIoError;
            }
            nlohmann::json j;
            in >> j;
            jv::Witness witness = jv::witness_from_json(j);
            if (!config_path.empty()) witness.config = jv::load_config(config_path);
            apply_overrides(witness.config, primes, threads, "");
            auto outcome = jv::verify_witness(witness, witness.config.threads);
            std::cout << outcome.transcript;
            if (outcome.ok && outcome.degenerate) {
                std::cout << "witness verifies but is DEGENERATE\n";
                return jv::kExitInconclusive;
            }
            std::cout << (outcome.ok ? "witness verified\n" : "witness FAILED verification\n");
            return outcome.ok ? jv::kExitVanishes : jv::kExitInternalError;
        }
        if (exp->parsed()) {
            jv::CaseConfig config = jv::load_config(config_path);
            if (threads > 0) config.threads = threads;
            std::uint64_t prime = export_prime ? export_prime : config.primes.front();
            return write_or_print(out_path, jv::export_case_system(config, prime));
        }
        if (reg->parsed()) {
            jv::CaseConfig config = jv::load_config(config_path);
            return write_or_print(out_path, jv::case_registry_csv(config));
        }
    } catch (const jv::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return jv::kExitConfigError;
    } catch (const jv::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return jv::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return jv::kExitInternalError;
    }
    return jv::kExitConfigError;
}
