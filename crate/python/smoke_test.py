"""Quick end-to-end check of the shecke_py extension module."""

import shecke_py as sh

TREFOIL = "2*t^2 + -1*t^4 + 1*t^2*x^2"


def main():
    b = sh.Braid("s1^3")
    assert (b.strands, b.degree, b.epsilon, b.components()) == (2, 0, 3, 1)
    assert sh.invariant(b) == TREFOIL
    assert sh.invariant("trefoil") == TREFOIL
    assert sh.invariant("unknot") == "1"
    assert sh.invariant("t1", form="resolution") == "X: 1 ; Y: 1*t^-1*x^-1 + -1*t*x^-1"
    assert sh.invariant_terms("t1 s1") == [
        (1, 0, "1*t*x^-1 + -1*t^3*x^-1 + 1*t*x"),
        (0, 1, "1"),
    ]
    assert sh.trace_vector("t1") == ["1", "1*z"]
    assert len(sh.basis_invariants("t1 t2")) == 3
    assert sh.markov_class_eq("s1 t1", "t1 s1")
    assert not sh.markov_class_eq("t1", "t1 s1")

    w = sh.Braid("t1 s2' s1", strands=3)
    v = w.markov_walk(5, 11)
    assert sh.invariant(w, form="raw") == sh.invariant(v, form="raw")
    assert len(w.resolutions()) == 2

    s1 = sh.Hecke.generator(2, 1)
    assert str(s1 * s1) == "(-1 + 1*q) * s1 + 1*q * 1"
    assert sh.normal_form("s1 s1") == str(s1 * s1)
    assert (s1 * s1).trace() == sh.Hecke.from_word("s1 s1").trace()

    ok, report = sh.run_suite("independence", d=3)
    assert ok, report

    names = [entry[0] for entry in sh.catalog()]
    assert "trefoil" in names and "singular-trefoil" in names

    try:
        sh.Braid("s1 x2")
    except ValueError:
        pass
    else:
        raise AssertionError("bad word accepted")

    print("smoke test ok:", len(names), "catalog entries")


if __name__ == "__main__":
    main()
