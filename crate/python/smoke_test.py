"""Smoke test for the Python bindings. Run after `pip install ./crates/py`."""

import cluster_sing_py as cs


def main():
    s = cs.Seed.of_type("A", n=3).with_principal_coefficients()
    assert s.n == 3 and s.vars[3] == "c1", s.vars
    t, rel = s.mutate(2)
    assert "x2'" in rel, rel
    back, _ = t.mutate(2)
    assert back.matrix == s.matrix

    pres = s.presentation()
    assert len(pres.generators) == 3

    assert cs.verify_reduction("D", n=5)
    red = cs.reduced_presentation("A", n=3)
    names, pts = red.singular_points(5, [2, 1, 3])
    assert pts == [[0] * len(names)], pts

    r = cs.classify("A", 5, [2, 1, 3], n=3)
    assert r.summary == "isolated A1 at origin", r.summary
    assert r.hessian_certified() is True
    assert r.to_json()["stratum"] == r.stratum

    assert cs.classify("F4", 7, [1, 1, 1, 1]).kind == "regular"
    assert len(cs.stratify("C", 2, n=3)) == 3

    d = cs.diff_against_classifier("G2", 3)
    assert d["summary"] == "4/4 eta agree", d["summary"]

    assert cs.continuant(2) == "1 * y1 * y2 - 1"

    try:
        cs.classify("A", 5, [2, 0, 3], n=3)
    except ValueError:
        pass
    else:
        raise AssertionError("zero residue accepted")
    print("python smoke test ok")


if __name__ == "__main__":
    main()
