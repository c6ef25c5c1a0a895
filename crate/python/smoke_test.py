"""Smoke test for the Python extension.

Build it with `cargo build -p superint-py --release`, copy
target/release/libsuperint_py.so to python/superint.so, then run this script.
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import superint  # noqa: E402


def main():
    a = superint.Matrix.parse("domain: nat\n3 | 5 1 12 | 10 1 0 2\n")
    assert a.shape == (1, 8)
    assert a.col_cuts == [1, 4]
    assert a.shape_kind == "row-matrix"
    assert str(a @ a.transpose()) == "[284]"
    assert superint.major_product(a, a.transpose()).endpoints() == [["284"]]

    x = superint.Matrix("nat", [[8, 3], [4, 1]], col_cuts=[1])
    y = superint.Matrix("nat", [[1, 2], [3, 4]])
    try:
        x @ y
    except ValueError:
        pass
    else:
        raise AssertionError("unconformable major product accepted")
    assert x.extended(y).endpoints() == [["17", "28"], ["7", "12"]]

    s = superint.Matrix("nat", [[3, 2, 1, 5, 1]], col_cuts=[2])
    t = superint.Matrix("nat", [[8, 1, 3, 1, 4]], col_cuts=[2])
    assert str(s + t) == "[11 3 | 4 6 5]"
    assert str(s.hadamard(t)) == "[24 2 | 3 5 4]"
    assert str(s.scalar_mul(2)) == "[6 4 | 2 10 2]"
    assert superint.Matrix.parse(s.to_text()) == s

    q = superint.Matrix("qplus", [["3/2"], ["5"]], row_cuts=[1])
    assert q.scalar_mul("2/3").endpoints() == [["1"], ["10/3"]]

    assert superint.count_partitions(3, 2) == "7"
    assert len(superint.enumerate_partitions(2, 2)) == 3

    f = superint.Matrix("unit", [["0.5", "0.2"], ["0.7", "1"]], col_cuts=[1])
    assert superint.scalar_min("0.31", f).endpoints() == [["31/100", "1/5"], ["31/100", "31/100"]]
    assert superint.fuzzify(s).endpoints() == [["1/3", "1/2", "1", "1/5", "1"]]
    g = superint.fuzzy_max(f, superint.scalar_max("0.6", f))
    assert g.endpoints() == [["3/5", "3/5"], ["7/10", "1"]]

    holds, text = superint.check("group", 'domain = "z6"\nrows = 1\ncols = 3\ncol_cuts = [1]\nop = "add"\n')
    assert holds, text
    holds, text = superint.check("eta", 'domain = "z12"\nrows = 1\ncols = 1\n[eta]\nrule = "reciprocal"\n')
    assert not holds
    holds, text = superint.check("subgroup", 'domain = "z12"\nrows = 1\ncols = 2\nop = "hadamard"\n')
    assert holds and "1 5 7 11" in text, text
    print("python smoke test passed")


if __name__ == "__main__":
    main()
