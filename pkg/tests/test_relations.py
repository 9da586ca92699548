# tests/test_relations.py

import json
from fractions import Fraction

import mpmath as mp
import pytest

from app.core import relations
from app.core.catalog import load_chains
from app.core.convert import face_plans
from app.core.cyclotomic import INFINITY, ONE, ZERO, CycNum
from app.core.errors import (
    EndpointMismatch,
    InconsistentInput,
    InconsistentLinearTerms,
    NotUnital,
    UnknownGenerator,
    WeightMismatch,
)
from app.core.expr import TWOPI, CmzvExpr, cmzv, zeta
from app.core.geometry import MobiusMap, RationalMap
from app.core.numeric import eval_expr
from app.core.relations import (
    RelationSystem,
    build_system,
    catalog_nonstandard_relations,
    check_generators,
    check_rows,
    deligne_bound,
    deligne_series,
    dimension_report,
    distribution_relations,
    enumerate_monomials,
    indecomposable_dims,
    load_table,
    log_coefficients,
    nonstandard_relations,
    quasi_shuffle,
    raw_indices,
    reduce,
    shuffle_relations,
    stuffle_relations,
    symmetry_relations,
    table_path,
    twopi_relations,
)

LOG2 = -cmzv(2, (1,), (1,))


# ========== DIMENSIONS ==========


def test_deligne_bound_examples():
    assert deligne_bound(4, 2) == 5
    assert deligne_bound(1, 1) == 0
    assert deligne_bound(3, 6) == 21
    assert deligne_bound(0, 7) == 1


def test_deligne_series_level_one():
    assert deligne_series(6, 1) == [1, 0, 1, 1, 1, 2, 2]


def test_deligne_powers_of_two():
    assert [deligne_bound(w, 3) for w in range(1, 5)] == [2, 4, 8, 16]
    assert [deligne_bound(w, 4) for w in range(1, 5)] == [2, 4, 8, 16]


def test_indecomposables():
    assert indecomposable_dims([1, 2, 3, 5])[1] == 1
    assert indecomposable_dims([0, 1, 1, 1, 2, 2]) == [0, 1, 1, 0, 1, 0]
    assert log_coefficients([1, 2])[1] == Fraction(3, 2)


# ========== MONOMIALS ==========


def test_raw_indices_skip_divergent():
    assert len(raw_indices(2, 2)) == 4
    assert all(not (p[0][0] == 1 and p[0][1] == 0) for p in raw_indices(3, 3))


def test_monomial_columns_put_twopi_last():
    monomials = enumerate_monomials(1, 2)
    assert len(monomials) == 2
    assert monomials[-1] == (TWOPI, TWOPI)


# ========== FAMILIES ==========


def test_quasi_shuffle_depth_one():
    terms = dict(quasi_shuffle(((1, 1),), ((1, 1),), 2))
    assert terms == {((1, 1), (1, 1)): 2, ((2, 0),): 1}


def test_stuffle_rows_hold_numerically(cfg):
    assert check_rows(stuffle_relations(2, 2), cfg) == []


def test_shuffle_rows_hold_numerically(cfg):
    assert check_rows(shuffle_relations(2, 2), cfg) == []


def test_distribution_rows_hold_numerically(cfg):
    rows = distribution_relations(4, 2)
    assert rows
    assert check_rows(rows, cfg) == []


def test_distribution_needs_divisor():
    with pytest.raises(InconsistentInput):
        distribution_relations(4, 2, d=3)
    assert distribution_relations(4, 2, d=1) == []
    assert distribution_relations(1, 3) == []


def test_twopi_rows(cfg):
    rows = twopi_relations(3, 1) + twopi_relations(1, 2)
    assert len(rows) == 2
    assert check_rows(rows, cfg) == []


def test_check_generators():
    assert check_generators(["stuffle", " shuffle", ""]) == ("shuffle", "stuffle")
    with pytest.raises(UnknownGenerator) as exc:
        check_generators(["shuffle", "duality"])
    assert exc.value.exit_code == 2


# ========== NONSTANDARD ==========


def test_identical_chains_give_no_rows():
    identity = RationalMap.identity()
    assert nonstandard_relations([identity], [identity], 1, 2) == []


def test_chains_must_share_endpoints():
    flip = MobiusMap.create(-1, 1, 0, 1).to_rational()
    with pytest.raises(EndpointMismatch):
        nonstandard_relations([RationalMap.identity()], [flip], 1, 2)


def test_chains_must_be_unital():
    square = RationalMap.create((0, 0, 1), (1,))
    with pytest.raises(NotUnital):
        nonstandard_relations([square], [square], 1, 2)


def test_shipped_chain_pairs_load():
    pairs = {p.id: p for p in load_chains()}
    assert {"six-third", "six-one", "eight-infinity"} <= set(pairs)
    pair = pairs["six-third"]
    assert pair.chain_r[0](ZERO) == pair.chain_t[0](ZERO)
    assert pair.chain_r[-1](ONE) == pair.chain_t[-1](ONE)


def test_nonstandard_rows_vanish_numerically(cfg):
    pair = next(p for p in load_chains() if p.id == "six-one")
    rows = nonstandard_relations(pair.chain_r, pair.chain_t, 6, 2, cfg, verify=False)
    assert check_rows(rows, cfg) == []


def test_nonvanishing_row_names_its_chain_pair(monkeypatch):
    monkeypatch.setattr(relations, "check_rows", lambda rows, cfg=None: [(0, mp.mpf("1e-3"))])
    with pytest.raises(InconsistentLinearTerms) as exc:
        catalog_nonstandard_relations(6, 2)
    assert exc.value.detail["chain"] in {p.id for p in load_chains() if 6 % p.level == 0}
    assert exc.value.exit_code == 3


def test_level_eight_corner_at_infinity(cfg):
    pair = next(p for p in load_chains() if p.id == "eight-infinity")
    lay_r = relations._layout(pair.chain_r, True)
    lay_t = relations._layout(pair.chain_t, False)
    assert [v for _, v in lay_r.corners] == [INFINITY]
    assert lay_t.corners == ()
    const_r, const_t = relations._solve_corners(lay_r, lay_t, 8, cfg)
    assert const_t == []
    with mp.workdps(cfg.dps):
        assert abs(eval_expr(const_r[0], cfg) + mp.mpc(0, 3 * mp.pi / 4)) < mp.mpf(10) ** -25


# ========== SYMMETRY ==========


def test_empty_faces_by_level():
    assert face_plans(1) == ()
    assert face_plans(2) == ()
    faces = face_plans(4)
    assert len(faces) == 4
    for direct, detour in faces:
        assert len(direct.steps) == 1 and len(detour.steps) == 2
        assert direct.start == detour.start
        assert direct.end == detour.end


def test_symmetry_rows_hold_numerically(cfg):
    rows = symmetry_relations(4, 2)
    assert rows
    assert check_rows(rows, cfg) == []
    assert symmetry_relations(2, 3) == []


# ========== SYSTEMS ==========


def test_level_one_weight_two(cache_dir):
    system = build_system(1, 2, cache_dir=cache_dir)
    assert system.dimension == 1
    assert system.basis_monomials == [(zeta(2).atoms().pop(),)]
    assert system.reduce(CmzvExpr.atom(TWOPI) ** 2) == zeta(2) * -24


def test_level_one_weight_three(cache_dir):
    system = build_system(1, 3, cache_dir=cache_dir)
    assert system.dimension == 1
    assert system.reduce(zeta(2, 1) - zeta(3)).is_zero()


def test_level_two_weight_two(cache_dir):
    system = build_system(2, 2, cache_dir=cache_dir)
    assert system.dimension == deligne_bound(2, 2) == 2
    relation = LOG2**2 - cmzv(2, (1, 1), (1, 1)) * 2 - zeta(2)
    assert reduce(relation, system).is_zero()


def test_level_two_weight_three_reduction(cache_dir):
    system = build_system(2, 3, cache_dir=cache_dir)
    assert system.dimension == 3
    # Li_{1,1,1}(-1, -1, 1) has exponents (1, 1, 0) at level 2
    lhs = cmzv(2, (1, 1, 1), (1, 1, 0))
    rhs = zeta(3) * Fraction(-7, 8) - LOG2**3 * Fraction(1, 6) + zeta(2) * LOG2 * Fraction(1, 2)
    assert system.reduce(lhs) == system.reduce(rhs)
    assert system.coordinates(lhs) == system.coordinates(rhs)


def test_vector_rejects_wrong_weight(cache_dir):
    system = RelationSystem(2, 2)
    with pytest.raises(WeightMismatch):
        system.vector(zeta(3))
    with pytest.raises(InconsistentInput):
        system.vector(cmzv(3, (2,), (1,)))


def test_irrational_rows_are_rejected():
    system = RelationSystem(3, 1)
    with pytest.raises(InconsistentInput) as exc:
        system.add(CmzvExpr.atom(TWOPI, CycNum.mu(3)))
    assert exc.value.exit_code == 3
    assert system.rank == 0
    assert system.offered == 0


# ========== CACHE ==========


def test_table_cache_round_trip(cache_dir):
    system = build_system(2, 2, cache_dir=cache_dir)
    path = table_path(2, 2, ("distribution", "shuffle", "stuffle", "symmetry"), cache_dir)
    assert path.exists()
    assert path.parent.name == "relations"
    table = load_table(path)
    assert table is not None and table.checksum == table.digest()
    restored = RelationSystem.from_table(table)
    assert restored.basis == system.basis
    assert restored.dimension == system.dimension


def test_corrupted_cache_is_ignored(cache_dir):
    build_system(1, 2, cache_dir=cache_dir)
    path = table_path(1, 2, ("distribution", "shuffle", "stuffle", "symmetry"), cache_dir)
    data = json.loads(path.read_text())
    data["basis"] = [1]
    path.write_text(json.dumps(data))
    assert load_table(path) is None
    path.write_text("{not json")
    assert load_table(path) is None


def test_dimension_report(cache_dir):
    report = dimension_report(2, 4, cache_dir=cache_dir)
    assert report.deligne_bound == 5
    assert report.computed is None
    build_system(1, 2, cache_dir=cache_dir)
    assert dimension_report(1, 2, cache_dir=cache_dir).computed == 1
