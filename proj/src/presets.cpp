#include "jetvanish/runner.hpp"

namespace jv {

namespace {

CaseConfig make_case(CaseKind kind, int d, int m, int t, RunMode mode = RunMode::nullity,
                     std::vector<DeformTerm> deformation = {}) {
    CaseConfig c;
    c.scenario.kind = kind;
    c.scenario.d = d;
    c.scenario.deformation = deformation.empty() ? default_deformation(kind, d) : deformation;
    c.m = m;
    c.t = t;
    c.mode = mode;
    return c;
}

std::vector<BatchPreset> make_presets() {
    std::vector<BatchPreset> out;

    {
        BatchPreset p;
        p.name = "lemma-1.1-d17";
        p.description = "compact surfaces, d=17, deformation x^8";
        for (auto [m, t] : std::vector<std::pair<int, int>>{{3, 3}, {4, 4}, {5, 5}, {6, 6}, {7, 7}})
            p.cases.push_back(make_case(CaseKind::compact, 17, m, t));
        out.push_back(p);
    }
    {
        BatchPreset p;
        p.name = "lemma-1.2-d12";
        p.description = "plane-curve complements, d=12, deformation x^6";
        for (auto [m, t] : std::vector<std::pair<int, int>>{{3, 2}, {4, 2}, {5, 3}, {6, 3},
                                                            {7, 4}, {8, 4}, {9, 5}, {10, 5},
                                                            {11, 6}, {12, 6}, {13, 7}, {14, 7}})
            p.cases.push_back(make_case(CaseKind::logarithmic, 12, m, t));
        out.push_back(p);
    }
    {
        BatchPreset p;
        p.name = "lemma-1.2-d13";
        p.description = "plane-curve complements, d=13, deformation x^6";
        for (auto [m, t] : std::vector<std::pair<int, int>>{{3, 3}, {4, 4}, {5, 5}, {6, 6},
                                                            {7, 7}, {8, 7}})
            p.cases.push_back(make_case(CaseKind::logarithmic, 13, m, t));
        out.push_back(p);
    }
    {
        BatchPreset p;
        p.name = "remark-d18";
        p.description = "compact surfaces, d=18";
        for (auto [m, t] : std::vector<std::pair<int, int>>{{3, 5}, {4, 6}, {5, 7}})
            p.cases.push_back(make_case(CaseKind::compact, 18, m, t));
        out.push_back(p);
    }
    {
        BatchPreset p;
        p.name = "remark-d19";
        p.description = "compact surfaces, d=19";
        for (auto [m, t] : std::vector<std::pair<int, int>>{{3, 6}, {4, 7}})
            p.cases.push_back(make_case(CaseKind::compact, 19, m, t));
        out.push_back(p);
    }
    {
        BatchPreset p;
        p.name = "remark-d20";
        p.description = "compact surfaces, d=20";
        p.cases.push_back(make_case(CaseKind::compact, 20, 3, 7));
        out.push_back(p);
    }
    {
        BatchPreset p;
        p.name = "remark-log-d14";
        p.description = "plane-curve complements, d=14";
        for (auto [m, t] : std::vector<std::pair<int, int>>{{3, 4}, {4, 5}, {5, 7}})
            p.cases.push_back(make_case(CaseKind::logarithmic, 14, m, t));
        out.push_back(p);
    }
    {
        BatchPreset p;
        p.name = "remark-log-d15";
        p.description = "plane-curve complements, d=15";
        for (auto [m, t] : std::vector<std::pair<int, int>>{{3, 5}, {4, 7}})
            p.cases.push_back(make_case(CaseKind::logarithmic, 15, m, t));
        out.push_back(p);
    }
    {
        BatchPreset p;
        p.name = "remark-log-d16";
        p.description = "plane-curve complements, d=16";
        p.cases.push_back(make_case(CaseKind::logarithmic, 16, 3, 6));
        out.push_back(p);
    }
    {
        BatchPreset p;
        p.name = "remark-log-d17";
        p.description = "plane-curve complements, d=17";
        p.cases.push_back(make_case(CaseKind::logarithmic, 17, 3, 7));
        out.push_back(p);
    }
    {
        BatchPreset p;
        p.name = "challenge-d16";
        p.description = "compact surfaces, d=16 (open list)";
        for (auto [m, t] : std::vector<std::pair<int, int>>{{3, 3}, {4, 3}, {5, 4}, {6, 4},
                                                            {7, 5}, {8, 5}, {9, 6}, {10, 7},
                                                            {11, 7}})
            p.cases.push_back(make_case(CaseKind::compact, 16, m, t));
        out.push_back(p);
    }
    {
        BatchPreset p;
        p.name = "challenge-d15";
        p.description = "compact surfaces, d=15, t = ceil(17m/66) (open list; in-range prefix)";
        for (int m = 3; m <= 27; ++m) {
            int t = (17 * m + 65) / 66;
            if (m <= 11) p.cases.push_back(make_case(CaseKind::compact, 15, m, t));
            else p.blocked.push_back({m, t});
        }
        out.push_back(p);
    }
    {
        BatchPreset p;
        p.name = "challenge-log-d11";
        p.description = "plane-curve complements, d=11, t = ceil(13m/96) (open list; in-range prefix)";
        for (int m = 3; m <= 51; ++m) {
            int t = (13 * m + 95) / 96;
            if (m <= 14) p.cases.push_back(make_case(CaseKind::logarithmic, 11, m, t));
            else p.blocked.push_back({m, t});
        }
        out.push_back(p);
    }
    {
        BatchPreset p;
        p.name = "fermat-d17-positive-control";
        p.description = "compact pure Fermat d=17 (no deformation): witness-integrity sweep";
        for (auto [m, t] : std::vector<std::pair<int, int>>{{3, 3}, {4, 4}, {5, 5}, {6, 6}, {7, 7}}) {
            CaseConfig c;
            c.scenario.kind = CaseKind::compact;
            c.scenario.d = 17;
            c.scenario.deformation.clear();  // pure Fermat
            c.m = m;
            c.t = t;
            c.mode = RunMode::witness;
            p.cases.push_back(c);
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace

const std::vector<BatchPreset>& builtin_presets() {
    static const std::vector<BatchPreset> presets = make_presets();
    return presets;
}

const BatchPreset* find_preset(const std::string& name) {
    for (auto& p : builtin_presets())
        if (p.name == name) return &p;
    return nullptr;
}

}  // namespace jv
