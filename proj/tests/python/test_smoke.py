import json

import jetvanish as jv


def test_poly_ops():
    prod = jv.poly_mul("1 * x^1 y^0 + 1 * x^0 y^1", "1 * x^1 y^0 + -1 * x^0 y^1")
    assert prod == "1 * x^2 y^0 + -1 * x^0 y^2"
    assert jv.poly_partial("1 * x^8 y^0", 0) == "8 * x^7 y^0"


def test_normal_form_and_divisibility():
    red = jv.normal_form("1 * x^0 y^17 z^0", "compact", 17)
    assert red == ("-1 * x^17 y^0 z^0 + -1 * x^0 y^0 z^17 + "
                   "-1 * x^8 y^0 z^0 + -1 * x^0 y^0 z^0")
    assert jv.divides_power("1 * x^1 y^0 z^32", 2, "compact", 17)
    assert not jv.divides_power("1 * x^1 y^0 z^31", 2, "compact", 17)


def test_degree_bounds():
    assert jv.degree_bound("compact", 17, "A", 0, 3, 3) == 39
    assert jv.degree_bound("compact", 17, "B", 0, 3, 3) == 10
    assert jv.degree_bound("logarithmic", 12, "A", 2, 3, 2) == 27
    assert jv.degree_bound("logarithmic", 12, "B", 0, 3, 2) == 5


def test_monomial_count():
    assert jv.monomial_count(2, 25) == 351
    assert jv.monomial_count(2, 2) == 6


def test_ansatz_summary():
    config = {"case_kind": "logarithmic", "d": 12, "m": 3, "t": 2}
    summary = json.loads(jv.ansatz_summary(json.dumps(config)))
    assert summary["unknowns"] == 1591
    assert summary["families"]["B_0"] == 21


def test_run_small_case():
    config = {
        "case_kind": "logarithmic",
        "d": 12,
        "m": 3,
        "t": 2,
        "primes": [jv.default_prime],
        "mode": "nullity",
    }
    report = json.loads(jv.run_case(json.dumps(config)))
    assert report["verdict"] == "VANISHES_OVER_Q"
    assert report["unknown_count"] == 1591
    assert report["primes"][0]["nullity"] == 0


def test_one_jet_sanity():
    config = {
        "case_kind": "compact",
        "d": 17,
        "m": 1,
        "t": 0,
        "jet_order": 1,
        "primes": [jv.default_prime],
    }
    report = json.loads(jv.run_case(json.dumps(config)))
    assert report["verdict"] == "VANISHES_OVER_Q"


def test_export_and_solve_round_trip():
    config = {
        "case_kind": "compact",
        "d": 5,
        "m": 3,
        "t": 1,
        "primes": [10007],
    }
    text = jv.export_system(json.dumps(config), 10007)
    assert text.startswith("jetvanish-system v1")
    result = json.loads(jv.nullity_of_system(text))
    assert result["prime"] == 10007
    assert result["rank"] + result["nullity"] > 0


def test_presets_listed():
    names = {p["name"] for p in json.loads(jv.presets())}
    assert "lemma-1.1-d17" in names
    assert "lemma-1.2-d12" in names
    assert "challenge-log-d11" in names
