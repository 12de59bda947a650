import math

import pytest

from ballm import exact
from ballm.cli import EXIT_OK, EXIT_VERIFY, main
from ballm.geometry import Measures
from ballm.verify import run_verify, worst

MEASURE_FUNCTIONS = [
    "dihedron_measures",
    "trihedron_measures",
    "reuleaux_tetrahedron_measures",
    "meissner_measures",
    "lens_measures",
    "capped_cylinder_measures",
    "symmetric_segment_measures",
    "cap_body_measures",
    "unit_ball_measures",
]


def test_fast_suite_passes(capsys):
    assert main(["verify", "--samples", "2000"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert "checks passed" in out


def test_check_bookkeeping():
    checks = run_verify(samples=1000)
    names = [c.name for c in checks]
    assert len(names) == len(set(names))
    assert {c.method for c in checks} <= {"closed-form", "skeleton", "quadrature", "monte-carlo"}
    assert worst(checks).severity <= 1


def test_tampered_dihedron_volume(monkeypatch, capsys):
    m = exact.dihedron_measures()
    monkeypatch.setattr(exact, "dihedron_measures", lambda: Measures(5 * math.pi / 11, m.surface_area, m.mean_width))
    assert main(["verify", "--samples", "1000"]) == EXIT_VERIFY
    out = capsys.readouterr().out
    assert "FAIL  dihedron VL quadrature" in out
    assert "worst:" in out


def _perturbed(fn, field):
    def wrapped(*args, **kwargs):
        m = fn(*args, **kwargs)
        values = dict(volume=m.volume, surface_area=m.surface_area, mean_width=m.mean_width)
        values[field] *= 1.01
        return Measures(**values)

    return wrapped


@pytest.mark.parametrize("field", ["volume", "surface_area", "mean_width"])
@pytest.mark.parametrize("name", MEASURE_FUNCTIONS)
def test_one_percent_mutation_detected(monkeypatch, capsys, name, field):
    monkeypatch.setattr(exact, name, _perturbed(getattr(exact, name), field))
    assert main(["verify", "--samples", "1000"]) == EXIT_VERIFY
    capsys.readouterr()


def test_delta_formula_mutation_detected(monkeypatch, capsys):
    fn = exact.lens_volume_from_delta
    monkeypatch.setattr(exact, "lens_volume_from_delta", lambda d: 1.01 * fn(d))
    assert main(["verify", "--samples", "1000"]) == EXIT_VERIFY
    capsys.readouterr()


def test_json_report(capsys):
    import json

    assert main(["verify", "--samples", "1000", "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["passed"] is True and len(data["checks"]) > 100
