// Python bindings for the main operations: polynomial arithmetic on the
// canonical text format, ansatz inspection, case runs, witness verification,
// and solving exported systems.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jetvanish/runner.hpp"

namespace py = pybind11;

namespace {

jv::SurfaceSpec spec_from_args(const std::string& case_kind, int d,
                               const std::optional<std::vector<std::pair<std::vector<int>, long long>>>& deformation) {
    jv::SurfaceSpec spec;
    if (case_kind == "compact") spec.kind = jv::CaseKind::compact;
    else if (case_kind == "logarithmic") spec.kind = jv::CaseKind::logarithmic;
    else throw jv::usage_error("case_kind must be compact or logarithmic");
    spec.d = d;
    if (deformation) {
        for (auto& [exps, coeff] : *deformation) {
            jv::DeformTerm t;
            for (std::size_t v = 0; v < exps.size() && v < 3; ++v)
                t.mono.e[v] = static_cast<std::uint16_t>(exps[v]);
            t.coeff = coeff;
            spec.deformation.push_back(t);
        }
    } else {
        spec.deformation = jv::default_deformation(spec.kind, d);
    }
    return spec;
}

std::string run_case_json(const std::string& config_json) {
    auto config = jv::config_from_json(nlohmann::json::parse(config_json));
    auto report = jv::run_case(config);
    return jv::report_to_json(report).dump();
}

std::string verify_witness_json(const std::string& witness_json) {
    auto witness = jv::witness_from_json(nlohmann::json::parse(witness_json));
    auto outcome = jv::verify_witness(witness, witness.config.threads);
    nlohmann::json j;
    j["ok"] = outcome.ok;
    j["degenerate"] = outcome.degenerate;
    j["transcript"] = outcome.transcript;
    return j.dump();
}

}  // namespace

PYBIND11_MODULE(_jetvanish, m) {
    m.doc() = "exact linear-system engine for negatively twisted invariant 2-jet differentials";

    m.def("poly_mul", [](const std::string& a, const std::string& b, int num_vars) {
        jv::QQ q;
        auto pa = jv::poly_parse(q, a, num_vars);
        auto pb = jv::poly_parse(q, b, num_vars);
        return jv::poly_text(q, jv::poly_mul(q, pa, pb), num_vars);
    }, py::arg("a"), py::arg("b"), py::arg("num_vars") = 2,
       "exact product of two polynomials in canonical text form");

    m.def("poly_partial", [](const std::string& a, int var, int num_vars) {
        jv::QQ q;
        return jv::poly_text(q, jv::poly_partial(q, jv::poly_parse(q, a, num_vars), var), num_vars);
    }, py::arg("a"), py::arg("var"), py::arg("num_vars") = 2,
       "formal partial derivative (0=x, 1=y, 2=z)");

    m.def("normal_form",
          [](const std::string& a, const std::string& case_kind, int d,
             const std::optional<std::vector<std::pair<std::vector<int>, long long>>>& deformation) {
              jv::QQ q;
              auto spec = spec_from_args(case_kind, d, deformation);
              jv::validate_spec(spec);
              auto p = jv::poly_parse(q, a, spec.num_vars());
              return jv::poly_text(q, jv::normal_form(q, p, spec), spec.num_vars());
          },
          py::arg("a"), py::arg("case_kind"), py::arg("d"), py::arg("deformation") = std::nullopt,
          "unique representative with y-degree < d modulo the defining equation");

    m.def("divides_power",
          [](const std::string& a, int i, const std::string& case_kind, int d,
             const std::optional<std::vector<std::pair<std::vector<int>, long long>>>& deformation) {
              jv::QQ q;
              auto spec = spec_from_args(case_kind, d, deformation);
              auto p = jv::poly_parse(q, a, spec.num_vars());
              return jv::divides_power(p, i, spec);
          },
          py::arg("a"), py::arg("i"), py::arg("case_kind"), py::arg("d"),
          py::arg("deformation") = std::nullopt);

    m.def("degree_bound",
          [](const std::string& case_kind, int d, const std::string& family, int j, int m, int t) {
              auto spec = spec_from_args(case_kind, d, std::nullopt);
              if (family.size() != 1 || family[0] < 'A' || family[0] > 'E')
                  throw jv::usage_error("family must be one of A..E");
              return jv::degree_bound(spec, family[0] - 'A', j, m, t);
          },
          py::arg("case_kind"), py::arg("d"), py::arg("family"), py::arg("j"), py::arg("m"),
          py::arg("t"));

    m.def("monomial_count", [](int num_vars, int max_degree, std::optional<std::vector<int>> caps) {
        auto basis = jv::monomial_basis(num_vars, max_degree, caps ? &*caps : nullptr);
        return basis.size();
    }, py::arg("num_vars"), py::arg("max_degree"), py::arg("caps") = std::nullopt);

    m.def("ansatz_summary", [](const std::string& config_json) {
        auto config = jv::config_from_json(nlohmann::json::parse(config_json));
        jv::validate_config(config);
        jv::GF f(config.primes.front());
        auto ansatz = jv::build_ansatz(f, config.scenario, config.m, config.t, config.jet_order);
        nlohmann::json j;
        j["unknowns"] = ansatz.num_unknowns();
        nlohmann::json fams;
        for (auto& [key, poly] : ansatz.terms) {
            std::string name = std::string(1, jv::family_letter(key.k)) + "_" + std::to_string(key.j);
            fams[name] = poly.size();
        }
        j["families"] = fams;
        return j.dump();
    });

    m.def("run_case", &run_case_json, py::arg("config_json"),
          "run the full pipeline; returns the JSON report as a string");

    m.def("verify_witness", &verify_witness_json, py::arg("witness_json"),
          "exact independent witness verification; returns JSON {ok, degenerate, transcript}");

    m.def("export_system", [](const std::string& config_json, std::uint64_t prime) {
        auto config = jv::config_from_json(nlohmann::json::parse(config_json));
        return jv::export_case_system(config, prime ? prime : config.primes.front());
    }, py::arg("config_json"), py::arg("prime") = 0);

    m.def("nullity_of_system", [](const std::string& system_text, int threads) {
        std::uint64_t prime = 0;
        auto system = jv::parse_system_gf(system_text, &prime);
        jv::GF f(prime);
        auto result = jv::nullity_mod_p(system, f, threads);
        nlohmann::json j;
        j["prime"] = result.prime;
        j["rank"] = result.rank;
        j["nullity"] = result.nullity;
        return j.dump();
    }, py::arg("system_text"), py::arg("threads") = 1);

    m.def("presets", [] {
        nlohmann::json j = nlohmann::json::array();
        for (auto& p : jv::builtin_presets()) {
            nlohmann::json e;
            e["name"] = p.name;
            e["cases"] = p.cases.size();
            e["description"] = p.description;
            j.push_back(e);
        }
        return j.dump();
    });

    m.attr("default_prime") = jv::kDefaultPrime;
    m.attr("secondary_prime") = jv::kSecondaryPrime;
    m.attr("__version__") = "0.1.0";
}
