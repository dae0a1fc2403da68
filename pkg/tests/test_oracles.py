"""Regression locks on the independent oracle layer itself.

These tests pin the numbers the oracles produced when the catalog data was
first fixed; if an oracle or a builder drifts, the frozen constants here
catch it.  The oracles deliberately re-derive everything with explicit
loops, so agreement with the package code elsewhere is meaningful.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

import oracles
from bimodfusion.catalog import CATALOG_NAMES, catalog_document
from conftest import load_fixture

PHI = (1 + math.sqrt(5)) / 2


def test_catalog_documents_pass_oracle_axioms():
    for name in CATALOG_NAMES:
        rc = oracles.RawCat(catalog_document(name))
        assert oracles.pentagon_residual(rc) < 1e-12, name
        assert oracles.hexagon_residual(rc, inverse=False) < 1e-12, name
        assert oracles.hexagon_residual(rc, inverse=True) < 1e-12, name
        assert oracles.ribbon_residual(rc) < 1e-12, name


def test_fibonacci_pentagon_solver_finds_golden_solution():
    invariants = oracles.solve_fibonacci_pentagon(n_starts=12)
    # gauge-invariant tuple (F00, F11, F01*F10, G) of the nondegenerate solution
    assert (0.61803399, -0.61803399, 0.61803399, 1.0) in invariants


def test_fibonacci_hexagon_branches():
    phi = PHI
    F2 = np.array([[1 / phi, 1 / math.sqrt(phi)], [1 / math.sqrt(phi), -1 / phi]])
    sols = oracles.solve_hexagon_rank2(F2, 1.0)
    angles = sorted(
        (round(cmath.phase(r1) / math.pi, 6), round(cmath.phase(rt) / math.pi, 6))
        for r1, rt in sols
    )
    assert angles == [(-0.8, 0.6), (0.8, -0.6)]


def test_ising_flipped_sign_breaks_pentagon():
    doc = catalog_document("ising")
    for ent in doc["F"]:
        if (ent["a"], ent["b"], ent["c"], ent["d"]) == ("psi", "sigma", "psi", "sigma"):
            ent["val"] = [-ent["val"][0], 0.0]
    rc = oracles.RawCat(doc)
    assert oracles.pentagon_residual(rc) > 1e-3


def test_closed_form_smatrices_match_backspin():
    closed = {
        "fibonacci": oracles.smatrix_fibonacci(),
        "toric_code": oracles.smatrix_toric(),
        "vec_z2": oracles.smatrix_vec_zn(2), "vec_z3": oracles.smatrix_vec_zn(3),
        "vec_z4": oracles.smatrix_vec_zn(4), "vec_z5": oracles.smatrix_vec_zn(5),
        "su2_1": oracles.smatrix_su2k(1), "su2_2": oracles.smatrix_su2k(2),
        "su2_3": oracles.smatrix_su2k(3), "su2_4": oracles.smatrix_su2k(4),
    }
    for name, want in closed.items():
        rc = oracles.RawCat(catalog_document(name))
        got = oracles.backspin_smatrix(rc.N, rc.twist, oracles.pf_dims(rc.N))
        np.testing.assert_allclose(got, want, atol=1e-10, err_msg=name)


def test_ising_backspin_smatrix_value():
    rc = oracles.RawCat(catalog_document("ising"))
    got = oracles.backspin_smatrix(rc.N, rc.twist, oracles.pf_dims(rc.N))
    r2 = math.sqrt(2)
    want = np.array([[1, r2, 1], [r2, 0, -r2], [1, -r2, 1]], dtype=complex)
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_su2_recoupling_spot_values():
    rc = oracles.RawCat(catalog_document("su2_2"))
    _, _, f1111 = rc.fmat(1, 1, 1, 1)
    isq = 1 / math.sqrt(2)
    np.testing.assert_allclose(
        f1111, np.array([[-isq, isq], [isq, isq]]), atol=1e-12
    )
    rc3 = oracles.RawCat(catalog_document("su2_3"))
    _, _, f2222 = rc3.fmat(2, 2, 2, 2)
    sphi = 1 / math.sqrt(PHI)
    np.testing.assert_allclose(
        f2222, np.array([[1 / PHI, -sphi], [-sphi, -1 / PHI]]), atol=1e-8
    )
    rc4 = oracles.RawCat(catalog_document("su2_4"))
    assert abs(rc4.f(4, 4, 4, 4, 0, 0) - 1.0) < 1e-12


def test_su2_2_r_symbols():
    rc = oracles.RawCat(catalog_document("su2_2"))
    assert abs(rc.r(1, 1, 0) - cmath.exp(5j * math.pi / 8)) < 1e-12
    assert abs(rc.r(1, 1, 2) - cmath.exp(1j * math.pi / 8)) < 1e-12


def test_algebra_fixture_ze_solves_axioms():
    rc = oracles.RawCat(catalog_document("toric_code"))
    mult, m, eta = oracles.toric_group_algebra(rc)
    doc = load_fixture("ze.alg.json")
    fmult, fm, feta = oracles.parse_algebra_doc(doc, rc)
    assert fmult == mult and feta == eta
    assert fm == m
    assert oracles.algebra_assoc_residual(rc, fmult, fm, feta) < 1e-12
    assert oracles.algebra_unit_residual(rc, fmult, fm, feta) < 1e-12


def test_algebra_fixture_su2_4_deven_solves_axioms():
    rc = oracles.RawCat(catalog_document("su2_4"))
    mult, m, eta = oracles.solve_su2_4_dtype(rc)
    doc = load_fixture("su2_4_deven.alg.json")
    fmult, fm, feta = oracles.parse_algebra_doc(doc, rc)
    assert fmult == mult and feta == eta and fm == m
    assert oracles.algebra_assoc_residual(rc, fmult, fm, feta) < 1e-12
    assert oracles.algebra_unit_residual(rc, fmult, fm, feta) < 1e-12


def test_perron_frobenius_dims():
    rc = oracles.RawCat(catalog_document("su2_4"))
    np.testing.assert_allclose(
        oracles.pf_dims(rc.N), [1.0, math.sqrt(3), 2.0, math.sqrt(3), 1.0], atol=1e-10
    )
    rc = oracles.RawCat(catalog_document("ising"))
    np.testing.assert_allclose(oracles.pf_dims(rc.N), [1.0, math.sqrt(2), 1.0], atol=1e-10)
