import csv
import io
import json
import subprocess
import sys

import pytest

from cvrecon.report import load_document

from conftest import GOLDEN


def test_analyze_twenty_db(run_json):
    doc = run_json("analyze", "--transmission", 0.01, "--mod-var", 100, "--beta-fail", 1e-7, "--headroom", 1.0)
    assert doc["info"]["delta_i"] == pytest.approx(0.00718, abs=1e-5)
    assert doc["plan"]["digits_per_element"] == 4
    assert 2.7e6 <= doc["bound"]["m_min"] <= 3.1e6
    assert set(doc) == {"channel", "info", "plan", "bound", "complexity"}


def test_analyze_distance_equals_transmission(run_json):
    by_eta = run_json("analyze", "--transmission", 0.01)
    by_km = run_json("analyze", "--distance", 100, "--atten", 0.2, "--mod-var", 100)
    assert by_km["channel"]["distance_km"] == 100
    by_km["channel"]["distance_km"] = None
    assert by_km == by_eta


def test_analyze_defaults_follow_running_example(run_json):
    doc = run_json("analyze", "--transmission", 0.01)
    assert doc["channel"]["mod_variance"] == 100
    assert doc["bound"]["beta_fail"] == 1e-7
    assert doc["bound"]["headroom"] == 0.5
    assert doc["bound"]["m_min"] > 1e7


def test_analyze_infeasible(run_cli):
    code, out, _ = run_cli("analyze", "--transmission", 0.9999, "--mod-var", 0)
    assert code == 3
    assert json.loads(out)["reason"] == "no_secret_rate"


@pytest.mark.parametrize(
    "argv",
    [
        ("analyze",),
        ("analyze", "--transmission", 0.1, "--distance", 10),
        ("analyze", "--transmission", 1.5),
        ("analyze", "--transmission", 0.1, "--headroom", 0),
        ("sweep", "--start", 50, "--end", 10),
        ("montecarlo", "--m", 10, "--ber", 0.1),
        ("montecarlo", "--m", 10, "--ber", 0.1, "--erec", 0.2, "--seed", -3),
        ("bogus",),
    ],
)
def test_argument_errors_exit_2(run_cli, argv):
    code, _, _ = run_cli(*argv)
    assert code == 2


def test_analyze_csv_single_row(run_cli):
    code, out, _ = run_cli("analyze", "--transmission", 0.1, "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert int(rows[0]["plan.digits_per_element"]) == 4


def test_sweep_csv_header_is_frozen(run_cli):
    code, out, _ = run_cli("sweep", "--format", "csv")
    assert code == 0
    header = out.splitlines()[0] + "\n"
    assert header == (GOLDEN / "sweep_header.csv").read_text()
    data = [line for line in out.splitlines()[1:] if not line.startswith("#")]
    assert len(data) == 86
    assert out.splitlines()[-1].startswith("# fit slope_per_km=0.1842")


def test_sweep_csv_full_precision(run_cli):
    _, out, _ = run_cli("sweep", "--start", 100, "--end", 101, "--format", "csv")
    row = next(csv.DictReader(line for line in io.StringIO(out) if not line.startswith("#")))
    assert float(row["delta_i"]) == 0.007177646488534861


def test_sweep_single_point_exit_3(run_cli):
    code, out, _ = run_cli("sweep", "--start", 40, "--end", 40)
    assert code == 3
    doc = json.loads(out)
    assert doc["fit"] is None and len(doc["sweep"]) == 1


def test_sweep_json_fit(run_json):
    doc = run_json("sweep", "--start", 15, "--end", 100)
    assert doc["fit"]["slope_per_km"] == pytest.approx(0.1842, abs=2e-3)
    assert doc["fit"]["mode"] == "power_law_eta4"


def test_montecarlo_report(run_json):
    doc = run_json("montecarlo", "--m", 10000, "--ber", 0.29, "--erec", 0.30, "--trials", 100000, "--seed", 7)
    mc = doc["montecarlo"]
    assert abs(mc["beta_hat"] - mc["beta_exact"]) <= 4 * mc["std_error"]
    assert mc["beta_exact"] == pytest.approx(0.986, abs=1e-3)
    assert mc["seed"] == 7 and mc["generator_id"]


def test_montecarlo_full_threshold(run_json):
    doc = run_json("montecarlo", "--m", 1000, "--ber", 0.3, "--erec", 1.0, "--trials", 100)
    assert doc["montecarlo"]["beta_hat"] == 1


def test_montecarlo_large_seed(run_json):
    doc = run_json("montecarlo", "--m", 100, "--ber", 0.3, "--erec", 0.3, "--trials", 100, "--seed", 2**64 - 1)
    assert doc["montecarlo"]["seed"] == 2**64 - 1


def test_montecarlo_workers_identical(run_cli):
    base = ("montecarlo", "--m", 2000, "--ber", 0.2, "--erec", 0.21, "--trials", 300000, "--seed", 11)
    c1, one, _ = run_cli(*base, "--workers", 1)
    c8, eight, _ = run_cli(*base, "--workers", 8)
    assert c1 == c8 == 0
    assert one == eight


def test_montecarlo_resource_cap(run_cli, monkeypatch):
    monkeypatch.setenv("CVRECON_MC_WORK_CAP", "10")
    code, out, _ = run_cli("montecarlo", "--m", 1000, "--ber", 0.1, "--erec", 0.2, "--trials", 100)
    assert code == 4
    assert json.loads(out)["error"] == "resource_cap"


def test_audit_default(run_json):
    audit = run_json("audit")["audit"]
    assert [audit[k] for k in ("elements_per_secret_bit", "digits_total", "leak_min_bits", "eve_budget_bits", "total_digits_plus_leak")] == [143, 572, 500, 501, 1072]
    assert audit["required_efficiency"] == pytest.approx(1.002, abs=1e-4)
    assert audit["required_gap_db"] == pytest.approx(0.0040, abs=2e-4)
    assert audit["ldpc_reference_gap_db"] == 0.0045


def test_audit_override(run_json):
    doc = run_json("audit", "--mod-var", 100, "--transmission", 0.1)
    assert doc["audit"]["elements_per_secret_bit"] == 14
    assert doc["audit"]["secret_per_element"] == pytest.approx(doc["info"]["delta_i"])


def test_audit_csv_matches_golden(run_cli):
    code, out, _ = run_cli("audit", "--format", "csv")
    assert code == 0
    assert out == (GOLDEN / "audit_default.csv").read_text()


def test_audit_csv_equals_json(run_cli, run_json):
    audit = run_json("audit")["audit"]
    _, out, _ = run_cli("audit", "--format", "csv")
    row = next(csv.DictReader(io.StringIO(out)))
    for key, value in audit.items():
        assert float(row[key]) == pytest.approx(value, rel=1e-5)


def test_audit_infeasible_override(run_cli):
    code, _, _ = run_cli("audit", "--transmission", 0.5, "--mod-var", 0)
    assert code == 3


@pytest.mark.parametrize(
    "argv",
    [
        ("analyze", "--transmission", 0.01),
        ("analyze", "--distance", 70, "--headroom", 0.8, "--mode", "power_law_eta4"),
        ("audit",),
        ("audit", "--transmission", 0.1),
        ("montecarlo", "--m", 5000, "--ber", 0.29, "--erec", 0.3, "--trials", 20000, "--seed", 3),
    ],
)
def test_json_round_trip_revalidates(run_cli, argv):
    code, out, _ = run_cli(*argv)
    assert code == 0
    doc = load_document(out)
    for key in ("channel", "info", "plan", "bound", "complexity", "montecarlo", "audit"):
        if key in json.loads(out):
            assert hasattr(doc[key], "check")


def test_tampered_document_is_rejected(run_cli):
    _, out, _ = run_cli("audit")
    raw = json.loads(out)
    raw["audit"]["eve_budget_bits"] = 510
    with pytest.raises(ValueError):
        load_document(json.dumps(raw))


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cvrecon", "audit", "--format", "csv"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "audit_default.csv").read_text()
