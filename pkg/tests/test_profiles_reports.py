import json
import math

import numpy as np
import pytest

from depthsep.errors import DomainError
from depthsep.profiles import eval_expr, parse_profile
from depthsep.reports import make_report, sanitize, to_csv, to_json


def test_eval_expr():
    assert eval_expr("pi*d**3", 3) == pytest.approx(27 * math.pi)
    assert eval_expr("-2/4 + e") == pytest.approx(math.e - 0.5)
    with pytest.raises(DomainError):
        eval_expr("__import__('os')")
    with pytest.raises(DomainError):
        eval_expr("d + 1")


def test_builtin_profiles():
    x = np.linspace(-1, 1, 11)
    assert np.allclose(parse_profile("identity")(x), x)
    assert np.allclose(parse_profile("abs")(x), np.abs(x))
    s = parse_profile("sine(3)")
    assert s.lipschitz == 3.0 and np.allclose(s(x), np.sin(3 * x))
    e1 = parse_profile("example1", 3)
    assert e1.omega == pytest.approx(27 * math.pi)
    p = parse_profile("poly(1, -2, 3)")
    assert p.lipschitz == 8.0 and p.degree == 2
    assert parse_profile("sine(3)", L=5).lipschitz == 5


def test_q_profile_value_at_one():
    from depthsep.special_fn import dimension_exact

    q = parse_profile("q(3)", 5)
    assert q(np.array([1.0]))[0] == pytest.approx(math.sqrt(dimension_exact(5, 3)))


def test_tabulated_profile(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("x,y\n-1,0\n0,0.5\n1,0\n")
    p = parse_profile(f"@{path}")
    assert p(np.array([0.5]))[0] == pytest.approx(0.25)
    assert p.lipschitz == pytest.approx(0.5)
    path.write_text("-0.5,0\n1,0\n")
    with pytest.raises(DomainError):
        parse_profile(f"@{path}")


@pytest.mark.parametrize("spec", ["nope", "sine", "sine(1,2)", "q(1.5)", "example1", "q(-1)"])
def test_bad_profiles(spec):
    with pytest.raises(DomainError):
        parse_profile(spec)


def test_sanitize_and_encodings():
    rep = make_report("x", {"a": np.int64(3)}, {"v": np.float64(0.1), "big": math.inf,
                                               "arr": np.array([1.5, math.nan]), "ok": np.bool_(True)})
    assert rep["result"] == {"v": 0.1, "big": "inf", "arr": [1.5, "nan"], "ok": True}
    doc = json.loads(to_json(rep))
    assert doc["schema_version"] == 1 and doc["config"]["a"] == 3
    text = to_csv(rep)
    assert "result.arr.1,nan" in text and "result.ok,true" in text
    assert sanitize((1, 2)) == [1, 2]
