"""Smoke test for the nontrans extension module.

Builds the extension with cargo, loads it from a temporary directory and
checks the three-recognizer cycle on the 25-pattern universe.

    python3 crates/python/python/smoke_test.py
"""

import shutil
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parents[3]


def load():
    subprocess.run(
        ["cargo", "build", "--offline", "-p", "nontrans-py"], cwd=ROOT, check=True
    )
    lib = ROOT / "target" / "debug" / "libnontrans.so"
    tmp = Path(tempfile.mkdtemp())
    shutil.copy(lib, tmp / "nontrans.so")
    sys.path.insert(0, str(tmp))
    import nontrans

    return nontrans


def main():
    nt = load()
    u = nt.Universe.theorem1()
    assert len(u) == 25, len(u)
    assert u.image_sizes() == [8, 8, 8, 1]

    a, b, c = (nt.Tree.builtin(name) for name in "ABC")
    assert nt.Tree.parse("(P1 a0 (P2 a1 (P3 a2 a3)))", u) == a
    assert a.format(u) == "(P1 a0 (P2 a1 (P3 a2 a3)))"
    assert a.classify("000000000") == (3, 3)

    for x, y in [(a, b), (b, c), (c, a)]:
        assert nt.pairwise_wins(x, y, u) == (16, 8)
    assert nt.compare(a, b, u)["outcome"] == "first_better"
    assert nt.verify_cycle([("A", a), ("B", b), ("C", c)], u)
    assert nt.time_table([("A", a), ("B", b), ("C", c)], u) == [
        ["1", "2", "3"],
        ["2", "3", "1"],
        ["3", "1", "2"],
        ["3", "3", "3"],
    ]

    assert nt.expected_wins(a, b, u, 100) == Fraction(64)
    report = nt.simulate(a, b, u, 10_000, seed=7)
    assert abs(report["empirical_win_fraction"] - 0.64) <= 0.0144, report

    margin, witness, _ = nt.max_margin_vs(a, u)
    assert margin == 8 and witness.is_correct(u)
    worst, margins, _ = nt.max_min_margin([a, b, c], u)
    assert (worst, margins) == (0, [0, 0, 0])
    assert nt.count_reduced_trees(u) == 2249032383

    passed, _ = nt.verify_theorem1()
    assert passed
    passed, _ = nt.verify_theorem2(10, "image-level")
    assert passed

    try:
        nt.pairwise_wins(a, nt.Tree.builtin("C-misprinted"), u)
    except nt.IncorrectTreeError:
        pass
    else:
        raise AssertionError("misprinted tree accepted")
    try:
        nt.Tree.parse("(P1 a0", u)
    except nt.NontransError as e:
        assert "syntax" in str(e)
    else:
        raise AssertionError("bad DSL accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
