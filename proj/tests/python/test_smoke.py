import json
import math
import os
import random

import numpy as np
import pytest

import szl

SEED = int(os.environ.get("SZL_SEED", "42"))


def hexahedron():
    g = szl.generate("hypercube", n=3)
    return g, szl.homogeneous_walk(g), szl.distance_partition(g, "000")


def test_generators():
    assert len(szl.generate("dodecahedron")) == 20
    assert len(szl.generate("free_ball", generators=2, radius=3)) == 1 + 4 + 12 + 36
    assert szl.canonical_root("icosahedron") == "12"
    with pytest.raises(szl.SzlError) as info:
        szl.generate("nonagon")
    assert info.value.kind == "InvalidParams"


def test_lumped_hexahedron():
    _, p, part = hexahedron()
    lumped = szl.lump(p, part)
    expected = np.array([[0, 3, 0, 0], [1, 0, 2, 0], [0, 2, 0, 1], [0, 0, 3, 0]]) / 3
    assert np.abs(lumped.to_dense() - expected).max() <= 1e-12
    assert lumped.vertices == ["0", "1", "2", "3"]


def test_not_lumpable():
    _, p, _ = hexahedron()
    part = szl.Partition([["001", "010"], ["000", "011", "110", "101"], ["100", "111"]])
    with pytest.raises(szl.SzlError) as info:
        szl.lump(p, part)
    assert info.value.kind == "NotLumpable"


def test_both_routes_agree():
    _, p, part = hexahedron()
    full = szl.SzegedyOperator(p)
    lumped = szl.SzegedyOperator(szl.lump(p, part))
    expected = [0, -1 / 3, 0, 1 / 3, 0, 1]
    assert np.allclose(szl.verblunsky(lumped, "0"), expected, atol=1e-9)
    assert np.allclose(szl.verblunsky(full, "000"), expected, atol=1e-9)
    _, c = szl.cmv_orthonormalize(full, full.phi("000"))
    assert np.allclose(szl.verblunsky_from_cmv_matrix(c), expected, atol=1e-9)


def test_aggregation_residuals():
    _, p, part = hexahedron()
    op = szl.SzegedyOperator(p)
    assert szl.check_conditions(p, part)["all_passed"]
    agg = szl.aggregate(op, part)
    assert len(agg["states"]) == 6
    assert max(agg["residuals"].values()) < 1e-10
    assert agg["linking"][("001", "2")] == pytest.approx(1 / math.sqrt(2))


def test_unitarity_random_states():
    op = szl.SzegedyOperator(szl.homogeneous_walk(szl.generate("icosahedron")))
    rng = np.random.default_rng(SEED)
    for _ in range(20):
        s = rng.normal(size=len(op.arcs))
        s /= np.linalg.norm(s)
        assert abs(np.linalg.norm(op.apply_U(s)) - 1) <= 1e-12
        assert np.abs(op.apply_U_inverse(op.apply_U(s)) - s).max() <= 1e-12


def test_cmv_structure_and_geronimus():
    rng = random.Random(SEED)
    for _ in range(20):
        n = rng.randint(1, 12)
        alphas = [rng.uniform(-0.99, 0.99) for _ in range(n - 1)] + [rng.choice([-1.0, 1.0])]
        c = szl.build_cmv_matrix(alphas)
        big_l, big_m = szl.cmv_factors(alphas)
        assert np.abs(c @ c.T - np.eye(n)).max() <= 1e-10
        assert np.abs(c - big_l @ big_m).max() <= 1e-12
        assert np.allclose(szl.verblunsky_from_cmv_matrix(c), alphas, atol=1e-9)
    p, q, r = szl.geronimus_pqr([0, 1 / 9, 0, 3 / 5, 0, 1])
    assert np.allclose(p, [1, 4 / 9, 1 / 5, 0], atol=1e-12)
    assert np.allclose(q, [0, 5 / 9, 4 / 5, 1], atol=1e-12)
    assert np.allclose(szl.verblunsky_from_pqr(p, q, r), [0, 1 / 9, 0, 3 / 5, 0, 1], atol=1e-12)


def test_entropy():
    _, p, part = hexahedron()
    op = szl.SzegedyOperator(p)
    agg = szl.aggregate(op, part)
    bc = dict(agg["states"])[("1", "2")]
    positions, rho = szl.reduce_density_coin(op, bc)
    assert positions == ["001", "010", "100"]
    assert np.allclose(np.linalg.eigvalsh(rho), [1 / 6, 1 / 6, 2 / 3], atol=1e-10)
    assert szl.von_neumann_entropy(rho, bits=True) == pytest.approx(math.log2(3) - 1 / 3, abs=1e-10)


def test_simulate():
    op = szl.SzegedyOperator(szl.StochasticMatrix(["a", "b"], np.array([[0.0, 1.0], [1.0, 0.0]])))
    series = szl.simulate(op, op.phi("a"), 4)
    assert series.shape == (5, 2)
    assert np.allclose(series[:, 0], [1, 0, 1, 0, 1])


def test_cli_verify():
    status, out, _ = szl.run_cli(["verify"])
    assert status == 0
    assert json.loads(out)["passed"] is True
    status, _, err = szl.run_cli(["gen"])
    assert status == 2 and "usage" in err
