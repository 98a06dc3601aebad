"""Koszul cohomology engine: cells, tables, checks, and the blocked path."""

from math import comb

import numpy as np
import pytest

from modbetti import koszul
from modbetti.gfp import FieldContext
from modbetti.gradedring import IdealPresentation, ring_from_ideal, ring_from_parametrization
from modbetti.instances import build_ring, gen_rnc, gen_tandev, generate, hyperplane_section
from modbetti.koszul import (
    ChainConditionError,
    betti_table,
    euler_strand_check,
    gorenstein_duality_check,
    koszul_dim,
    lefschetz_compare,
    strand_complete,
    verify_green,
)


def _rnc_ring(n, qmax=3):
    return build_ring(gen_rnc(n), qmax=qmax)


# ---------------------------------------------------------------------------
# closed forms and blocked/dense agreement

@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_rnc_closed_form(n):
    ring = _rnc_ring(n)
    for p in range(0, n + 2):
        assert koszul_dim(ring, p, 1) == p * comb(n, p + 1)
        assert koszul_dim(ring, p, 2) == 0


def test_closed_form_brute_forced_through_degree_five():
    # independent dense recomputation of the n = 5 table, no shared code
    from modbetti import oracle

    ring = _rnc_ring(5)
    for p in range(0, 7):
        for q in (1, 2):
            want = p * comb(5, p + 1) if q == 1 else 0
            assert oracle.kappa_naive(ring, p, q) == want, (p, q)


def test_blocked_and_dense_paths_agree(monkeypatch):
    ring = _rnc_ring(4)
    blocked = betti_table(ring)
    assert blocked.meta["blocked"] is True
    monkeypatch.setenv("MODBETTI_NO_WEIGHTS", "1")
    dense = betti_table(ring)
    assert dense.meta["blocked"] is False
    assert blocked.kappa == dense.kappa
    for b, d in zip(blocked.cells, dense.cells):
        assert (b.rank_in, b.rank_out) == (d.rank_in, d.rank_out)


def test_weight_blocks_partition_the_differential():
    # blocked rank sums must reproduce the dense matrix rank map by map
    ring = _rnc_ring(3)
    ctx = ring.ctx
    for p, q in ((1, 1), (2, 1), (3, 1), (2, 2)):
        dense = koszul.assemble_differential(ring, p, q)
        blocks = list(koszul._iter_weight_blocks(ring, p, q))
        total = sum(
            koszul.MatrixGF(blk, ctx, reduce=False).rank() for _, blk in blocks
        )
        assert dense.rank() == total


# ---------------------------------------------------------------------------
# tables

def test_betti_table_structure_and_grid():
    table = betti_table(_rnc_ring(3))
    assert table.kappa == [[1, 0, 0], [0, 3, 0], [0, 2, 0], [0, 0, 0]]
    assert table.cell(2, 1) == 2
    assert table.grid() == (
        "       0 1 2 3\n"
        "total: 1 3 2 .\n"
        "    0: 1 . . .\n"
        "    1: . 3 2 .\n"
        "    2: . . . ."
    )


def test_betti_table_json_round_shape():
    table = betti_table(_rnc_ring(2))
    doc = table.to_json_dict()
    assert set(doc) == {"cells", "kappa", "meta", "pmax", "qmax"}
    assert doc["kappa"] == table.kappa
    for cell in doc["cells"]:
        assert set(cell) == {
            "chain", "dim_in", "dim_mid", "dim_out",
            "kappa", "p", "q", "rank_in", "rank_out", "seconds",
        }
    assert doc["meta"]["prime"] == 31991


def test_betti_table_range_validation():
    ring = _rnc_ring(2)
    with pytest.raises(ValueError, match="pmax"):
        betti_table(ring, pmax=99)
    with pytest.raises(ValueError, match="qmax"):
        betti_table(ring, qmax=7)


def test_structural_zero_rows_and_corner():
    table = betti_table(_rnc_ring(4))
    assert table.kappa[0][0] == 1
    assert all(table.kappa[0][q] == 0 for q in range(1, table.qmax + 1))
    assert all(table.kappa[p][0] == 0 for p in range(1, table.pmax + 1))


def test_cell_argument_validation():
    ring = _rnc_ring(2)
    with pytest.raises(ValueError, match="outside the constructed range"):
        koszul_dim(ring, 1, 9)
    with pytest.raises(ValueError, match="outside the constructed range"):
        koszul_dim(ring, -1, 1)


# ---------------------------------------------------------------------------
# chain condition enforcement

def _corrupt(ring):
    # break commutativity of the first coordinate on degree-1 inputs
    ring.mult[0][1][:, 0] = (ring.mult[0][1][:, 0] + 1) % ring.ctx.p


def test_chain_check_catches_corrupted_multiplication():
    ctx = FieldContext(31991)
    ring = ring_from_ideal(IdealPresentation(3, ()), ctx, qmax=3)
    _corrupt(ring)
    with pytest.raises(ChainConditionError):
        betti_table(ring, pmax=2, qmax=2)


def test_probe_chain_check_mode(monkeypatch):
    # force the flop limit to zero so dense checks fall back to probing
    monkeypatch.setattr(koszul, "CHAIN_FULL_LIMIT", 0)
    monkeypatch.setenv("MODBETTI_NO_WEIGHTS", "1")
    table = betti_table(_rnc_ring(3))
    modes = {c.chain for c in table.cells}
    assert "probe" in modes and "full" not in modes and "blocked" not in modes


def test_probe_chain_check_still_catches_corruption(monkeypatch):
    monkeypatch.setattr(koszul, "CHAIN_FULL_LIMIT", 0)
    ctx = FieldContext(31991)
    ring = ring_from_ideal(IdealPresentation(3, ()), ctx, qmax=3)
    _corrupt(ring)
    with pytest.raises(ChainConditionError):
        betti_table(ring, pmax=2, qmax=2)


def test_blocked_cells_report_blocked_chain():
    table = betti_table(_rnc_ring(4))
    assert {c.chain for c in table.cells if c.rank_in and c.rank_out} == {"blocked"}


# ---------------------------------------------------------------------------
# derived checks

def test_verify_green_requires_even_genus():
    ring = _rnc_ring(4)
    with pytest.raises(ValueError, match="even genus"):
        verify_green(ring, genus=5)
    bare = ring_from_parametrization(gen_rnc(4).payload, FieldContext(31991), qmax=2)
    with pytest.raises(ValueError, match="genus unknown"):
        verify_green(bare)


def test_verify_green_report_fields():
    ring = build_ring(generate("curve-ci23-g4", seed=1), qmax=2)
    rep = verify_green(ring)
    assert rep.genus == 4 and rep.k == 2
    assert rep.kappa == 0 and rep.passed
    assert rep.dim_mid == comb(4, 2) * 4
    assert rep.rank_out + rep.rank_in == rep.dim_mid
    assert set(rep.to_dict()) >= {"genus", "k", "kappa", "passed", "rank_in", "rank_out"}


def test_strand_completeness_bounds():
    ring = _rnc_ring(3)
    table = betti_table(ring)  # pmax 3, qmax 2
    assert strand_complete(table, ring, 1)
    assert strand_complete(table, ring, 3)
    assert not strand_complete(table, ring, 4)  # q = 3 row not computed
    assert not strand_complete(table, ring, 0)


def test_euler_strand_sums():
    ring = _rnc_ring(4)
    table = betti_table(ring)
    for m in range(1, 6):
        assert euler_strand_check(table, ring, m)


def test_euler_check_detects_wrong_table():
    ring = _rnc_ring(4)
    table = betti_table(ring)
    table.kappa[1][1] += 1
    assert not euler_strand_check(table, ring, 2)


def test_gorenstein_duality_on_genus_four_curve():
    ring = build_ring(generate("curve-ci23-g4", seed=2), qmax=3)
    table = betti_table(ring)
    assert gorenstein_duality_check(table, 4)
    with pytest.raises(ValueError, match="genus"):
        gorenstein_duality_check(table, 3)
    thin = betti_table(ring, qmax=1)
    with pytest.raises(ValueError, match="cover"):
        gorenstein_duality_check(thin, 4)


def test_lefschetz_restriction_genus_four():
    k3_spec = generate("k3-ci23-g4", seed=1)
    surface = build_ring(k3_spec, qmax=2)
    curve = build_ring(hyperplane_section(k3_spec, seed=11), qmax=2)
    for p in (1, 2):
        assert lefschetz_compare(surface, curve, p)


def test_tandev_vanishing_smallest_case():
    ring = build_ring(gen_tandev(4), qmax=2)
    rep = verify_green(ring)
    assert rep.passed and rep.chain == "blocked"
