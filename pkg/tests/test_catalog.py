# tests/test_catalog.py

import json

import pytest

from app.core.catalog import build_entry, load_catalog, load_chains, load_identities, run_regressions
from app.core.cyclotomic import INFINITY, ONE, ZERO
from app.core.errors import SchemaError, ValidationFailed
from app.schemas.catalog import CatalogEntrySchema


def write_identities(tmp_path, records):
    path = tmp_path / "identities.json"
    path.write_text(json.dumps({"identities": records}))
    return path


# ========== CATALOG ==========


def test_shipped_catalog_loads():
    entries = load_catalog()
    ids = [e.id for e in entries]
    assert "anharmonic-2-invert" in ids
    assert len(ids) == len(set(ids))
    for e in entries:
        assert {ZERO, ONE, INFINITY} <= set(e.image)


def test_entry_json():
    entry = next(e for e in load_catalog() if e.id == "anharmonic-2-reflect")
    data = entry.to_json()
    assert data["level"] == 2
    assert "2" in data["image"]


def test_invariant_entries_are_rational_maps():
    invariant = [e for e in load_catalog() if e.kind == "invariant"]
    assert invariant
    assert all(e.transform.degree >= 2 for e in invariant)


def test_unclosed_entry_rejected():
    schema = CatalogEntrySchema(id="bad", level=1, kind="mobius", preimages=["2", "0", "inf"])
    with pytest.raises(ValidationFailed):
        build_entry(schema)


def test_declared_image_is_checked():
    schema = CatalogEntrySchema(
        id="reflect", level=2, kind="mobius", preimages=["1", "0", "inf"], image=["0", "1", "inf"]
    )
    with pytest.raises(ValidationFailed):
        build_entry(schema)


def test_schema_errors(tmp_path):
    path = tmp_path / "catalog.json"
    path.write_text('{"entries": [{"id": "x", "level": 0, "kind": "mobius"}]}')
    with pytest.raises(SchemaError):
        load_catalog(path)
    path.write_text("[")
    with pytest.raises(SchemaError):
        load_catalog(path)
    with pytest.raises(SchemaError):
        load_catalog(tmp_path / "missing.json")


def test_chain_pairs_are_unital():
    for pair in load_chains():
        assert pair.level in (6, 8)
        assert pair.chain_r and pair.chain_t


# ========== IDENTITIES ==========


def test_shipped_identities_parse():
    records = load_identities()
    ids = {r.id for r in records}
    assert {"li2-half", "apery", "binom-1-2", "watson-7"} <= ids
    assert any(r.status == "conjecture" for r in records)


def test_identity_parse_error(tmp_path):
    path = write_identities(tmp_path, [{"id": "broken", "lhs": "Li[2](1/2", "rhs": "0"}])
    with pytest.raises(SchemaError):
        load_identities(path)


def test_regressions_pass_and_fail(tmp_path, cfg):
    path = write_identities(
        tmp_path,
        [
            {"id": "euler", "lhs": "zeta(2,1)", "rhs": "zeta(3)"},
            {"id": "basel", "lhs": "zeta(2)", "rhs": "pi^2/6"},
            {"id": "corrupted", "lhs": "zeta(2)", "rhs": "pi^2/7"},
        ],
    )
    report = run_regressions(load_identities(path), cfg)
    assert [r.passed for r in report.results] == [True, True, False]
    assert not report.ok
    assert [r.id for r in report.failures] == ["corrupted"]
    assert report.summary() == {"theorems": 3, "passed": 2, "failed": 1, "conjectures": 0}


def test_convert_check(tmp_path, cfg):
    path = write_identities(
        tmp_path,
        [{"id": "li2-half", "lhs": "Li[2](1/2)", "rhs": "pi^2/12 - log(2)^2/2", "check": "convert"}],
    )
    report = run_regressions(load_identities(path), cfg)
    assert report.ok
    assert report.results[0].residual < 1e-20


def test_domain_errors_are_reported(tmp_path, cfg):
    path = write_identities(tmp_path, [{"id": "no-entry", "lhs": "Li[2](1/7)", "check": "convert"}])
    report = run_regressions(load_identities(path), cfg)
    result = report.results[0]
    assert result.passed is False
    assert result.error.startswith("NoCatalogEntry")


def test_conjecture_relation(tmp_path, cfg):
    path = write_identities(
        tmp_path,
        [{"id": "log-four", "lhs": "log(4)", "status": "conjecture", "basis": ["log(2)"]}],
    )
    report = run_regressions(load_identities(path), cfg)
    result = report.results[0]
    assert result.status == "conjecture"
    assert report.ok
    assert result.relation is not None
    assert abs(result.relation[0]) == 1 and abs(result.relation[1]) == 2


@pytest.mark.slow
def test_shipped_ladders_and_notebook_entries_hold(cfg):
    wanted = {"coxeter-ladder-3", "rho-ladder-3", "ramanujan-minus-half"}
    records = [r for r in load_identities() if r.id in wanted]
    assert {r.id for r in records} == wanted
    report = run_regressions(records, cfg)
    assert [r.id for r in report.failures] == []
    assert all(r.residual < 1e-20 for r in report.results)
