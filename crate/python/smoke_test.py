"""Smoke test for the kstab extension module.

Build and install with `pip install --no-build-isolation -e crates/python`,
then run `python python/smoke_test.py` or `pytest python/`.
"""

import json
from fractions import Fraction

import kstab


def test_catalog():
    assert "F1" in kstab.catalog_names()
    p2 = kstab.ToricFano.catalog("P2")
    assert p2.degree == 9
    assert p2.barycenter == [0, 0]
    assert p2.delta()[0] == 1
    assert p2.uniform_margin()[0] == 0
    assert p2.verdict(3) == "KSemistableEquivariant"


def test_f1_invariants():
    f1 = kstab.ToricFano([[1, 0], [0, 1], [-1, -1], [1, 1]], name="F1")
    assert f1.dim == 2
    assert f1.degree == 8
    assert f1.barycenter == [Fraction(1, 12), Fraction(1, 12)]
    value, witness = f1.delta()
    assert value == Fraction(6, 7)
    assert witness == [1, 1]
    assert f1.verdict() == "NotKSemistable"
    assert f1.delta_k(1, 3) == (Fraction(9, 11), [1, 1])
    assert f1.n_k(2) == 25
    sc = f1.scalars([1, 1])
    assert sc["A"] == 1 and sc["S"] == Fraction(7, 6)


def test_profile_and_curve():
    p2 = kstab.ToricFano.catalog("P2")
    prof = p2.profile([1, 0])
    assert prof["tau"] == 3
    lo, hi, coeffs = prof["curve"][0]
    assert coeffs == [9, -6, 1]
    check = p2.okounkov_check([1, 0], "1/2")
    assert check["slice_identity_ok"]
    doc = json.loads(p2.curve_json([1, 0]))
    assert doc["okounkov"]["b1"] == "1"


def test_documents_and_errors():
    f1 = kstab.ToricFano.catalog("F1")
    again = kstab.ToricFano.from_json(f1.to_json())
    assert again.rays == f1.rays
    report = json.loads(f1.report(search_radius=3))
    assert report["delta"]["value"] == "6/7"
    assert f1.report(3, "csv").startswith("field,ray,value\n")
    try:
        kstab.ToricFano([[1, 0], [0, 1]])
    except kstab.NotFanoError:
        pass
    else:
        raise AssertionError("expected NotFanoError")
    try:
        f1.profile([2, 0])
    except kstab.KstabError:
        pass
    else:
        raise AssertionError("expected KstabError")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok {name}")
