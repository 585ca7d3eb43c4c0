# Copyright 2026 The meminv Authors
# SPDX-License-Identifier: Apache-2.0

import math
from fractions import Fraction

import pytest

import meminv


def test_oracle_matches_ceiling_division():
    for a in range(1, 16):
        for c in range(a):
            sol = meminv.oracle_divide(a, c, 4)
            assert sol["b_hat"] == -(-(c << 8) // a)
            assert a * sol["b_hat"] == (c << 8) + sol["c_f"]


def test_headline_oracle():
    sol = meminv.oracle_divide(10, 1, 5, 5)
    assert sol == {"b_hat": 103, "b_bits": "00011", "b_f": 7, "c_f": 6}


def test_census_closed_form():
    for n in range(2, 6):
        for nb in range(n + 1):
            m = n + nb
            assert meminv.gate_census(n, nb)["total"] == 6 * n * m - 3 * n - 5 * m


def test_netlist_roundtrip_and_determinism():
    text = meminv.export_netlist(3, 2, a=5, c=3)
    assert text.startswith("solc v1\n")
    assert "clamp" in text
    assert meminv.roundtrip_netlist(text) == text
    assert meminv.export_netlist(3, 2, a=5, c=3) == text


def test_assignments_match_enumeration():
    assert meminv.count_assignments(3, 1, 3, 3) == len(meminv.enumerate_solutions(3, 1, 3, 3)) == 2
    assert meminv.count_assignments(3, 1, 3, 0) == 0


def test_invert_converges():
    r = meminv.invert("3", "1", n=3, seed=1)
    assert r["converged"] and r["identity_ok"] and r["verified"]
    assert r["decoded"]["b_bits"] == "010"
    assert r["final_c"] <= 0.01
    ts = [t for t, _ in r["trace"]]
    assert ts == sorted(ts)


def test_invert_unsat_reports_nonconvergence():
    r = meminv.invert("3", "1", n=3, n_b=0, t_max=500)
    assert not r["converged"]
    assert r["decoded"] is None


def test_errors_raise():
    with pytest.raises(meminv.MeminvError):
        meminv.oracle_divide(0, 1, 3)
    with pytest.raises(ValueError):
        meminv.invert("5", "6", n=3)


def test_invert_matrix():
    r = meminv.invert_matrix([2, 1, 1, 1], n=3)
    x = [[Fraction(v) for v in row] for row in r["x"]]
    assert x == [[1, -1], [-1, 2]]
    assert Fraction(r["residual"]) == 0
    assert r["residual_ok"]
    assert math.isfinite(r["columns"][0]["t_c"])
