"""Smoke test for the `pappus` extension module.

Build and install first:  pip install --no-build-isolation -e crates/py
Run with pytest or directly: python python/smoke_test.py
"""

import math
from fractions import Fraction

import numpy as np

import pappus


def test_exact_box_relations():
    b = pappus.Box.from_moduli("1/2", Fraction(1, 3))
    assert b.moduli() == ("1/2", "1/3")
    assert b.is_convex()
    assert all(b.relations(u="2/3", v=3).values())
    assert not all(b.relations(u="2/3", v=3, mutate=True).values())
    # i is an involution for every deformation.
    assert b.i(u="5/7", v="3/2").i(u="5/7", v="3/2").eq_marked(b)


def det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def test_box_points_are_exact_strings():
    t = pappus.Box.from_moduli(0, 0).tau1(u="3/2", v="2/5")
    pts = [[Fraction(x) for x in p] for p in t.points()]
    # t lies on pq and b on rs, exactly.
    assert det3([pts[0], pts[1], pts[4]]) == 0
    assert det3([pts[2], pts[3], pts[5]]) == 0
    assert det3([pts[0], pts[1], pts[2]]) != 0


def test_representation_against_numpy():
    r = pappus.Representation("1/2", "1/3", eps=-0.2, delta=0)
    assert r.in_region_interior()
    a, b = (np.array(m) for m in r.matrices())
    word = "I R I R"
    # R maps to A and I R I to B, so I R I R maps to B A.
    img = np.array(r.evaluate(word))
    assert np.allclose(img, b @ a, rtol=1e-12, atol=1e-12)
    longer = np.array(r.evaluate("R I Rr I R"))
    assert np.allclose(longer, a @ b @ b @ a, rtol=1e-12, atol=1e-12)
    mods = sorted(abs(np.linalg.eigvals(img)))
    assert np.allclose(mods, r.spectrum(word), rtol=1e-10)
    lp = r.limit_point(word)
    w, v = np.linalg.eig(img)
    top = np.real(v[:, np.argmax(abs(w))])
    x = np.array(lp["point"])
    sin = np.linalg.norm(np.cross(top, x)) / (np.linalg.norm(top) * np.linalg.norm(x))
    assert sin < 1e-9
    assert lp["flag_residual"] < 1e-9


def test_anosov_diagnostics():
    r = pappus.Representation("1/2", "1/3", eps=-0.2)
    assert r.constant_c(16, 16, 2) > 1.0
    scan = r.loxodromy_scan(4)
    assert scan["non_loxodromic"] == [] and scan["min_gap"] > 1.0
    assert all(r.nesting().values())
    boundary = pappus.Representation("1/2", "1/3")
    assert "I R I R" in boundary.loxodromy_scan(4)["non_loxodromic"]


def test_hilbert_metric_closed_form():
    q = pappus.Quad([(0, 0), (1, 0), (1, 1), (0, 1)])
    # Along the midline the chord is [0, 1]: d = 1/2 log cross-ratio.
    d = q.hilbert_distance((0.5, 0.5), (0.25, 0.5))
    assert math.isclose(d, 0.5 * math.log(3.0), rel_tol=1e-12)
    # Norm at the center along an axis: (1/t+ + 1/t-) / 2 with t+- = 1/2.
    assert math.isclose(q.hilbert_norm((0.5, 0.5), (1.0, 0.0)), 2.0, rel_tol=1e-12)
    inner = pappus.Quad([(0.25, 0.25), (0.75, 0.25), (0.75, 0.75), (0.25, 0.75)])
    assert q.contains_quad(inner, True)
    assert inner.distortion(q, 16, 16, 2) > 1.0


def test_curve_and_precision():
    d = pappus.solve_delta_h("1/2", "1/3", "-0.05")
    assert d < 0 and abs(d) < 1e-3
    assert pappus.solve_delta_h("1/2", "1/3", 0) == 0.0
    old = pappus.precision()
    pappus.set_precision(256)
    assert pappus.precision() == 256
    pappus.set_precision(old)


def test_errors_are_value_errors():
    try:
        pappus.Box.from_moduli(1, 0)
    except ValueError as e:
        assert isinstance(e, pappus.PappusError)
    else:
        raise AssertionError("invalid moduli accepted")
    assert pappus.normal_form("R R R I I") == ""


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok  {name}")
