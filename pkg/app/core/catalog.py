# app/core/catalog.py

"""
Shipped data: support transforms used by the converter, unital chain pairs for the
nonstandard relations, and the identity regression suite with its conjecture watchlist.
"""

import json
import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path

from mpmath import mp
from pydantic import ValidationError

from app.core.cyclotomic import INFINITY, ONE, ZERO, ExtPoint
from app.core.errors import CmzvError, ParseError, SchemaError, ValidationFailed
from app.core.expr import CmzvExpr
from app.core.geometry import (
    MobiusMap,
    RationalMap,
    check_closed,
    image_support,
    invariant_map,
    is_unital,
    level_support,
    mobius_from_triple,
)
from app.core.numeric import EvalConfig, eval_expr, pslq, verify_identity
from app.core.parsing import parse_cycnum, parse_expression, parse_point
from app.schemas.catalog import (
    CatalogEntrySchema,
    CatalogFileSchema,
    ChainPairSchema,
    IdentityFileSchema,
    MapSchema,
)
from app.schemas.report import RegressionReport, RegressionResult

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
CATALOG_PATH = DATA_DIR / "catalog.json"
IDENTITIES_PATH = DATA_DIR / "identities.json"


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    level: int
    kind: str
    transform: MobiusMap | RationalMap
    image: tuple[ExtPoint, ...]
    provenance: str = ""

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "level": self.level,
            "kind": self.kind,
            "transform": self.transform.to_rational().to_json()
            if isinstance(self.transform, MobiusMap)
            else self.transform.to_json(),
            "image": [p.to_text() for p in self.image],
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class ChainPair:
    id: str
    level: int
    chain_r: tuple[RationalMap, ...]
    chain_t: tuple[RationalMap, ...]
    provenance: str = ""


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    lhs: CmzvExpr
    rhs: CmzvExpr | None = None
    status: str = "theorem"
    check: str = "value"
    provenance: str = ""
    basis: tuple[CmzvExpr, ...] = field(default_factory=tuple)


# ========== FILE LOADING ==========


def _read_json(path: Path, schema):
    try:
        raw = json.loads(path.read_text(encoding="utf-8")) if path.stat().st_size else {}
    except FileNotFoundError as e:
        raise SchemaError(f"data file not found: {path}", path=str(path)) from e
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path} is not valid JSON: {e}", path=str(path)) from e
    try:
        return schema.model_validate(raw)
    except ValidationError as e:
        raise SchemaError(f"{path} does not match its schema", errors=e.errors(include_url=False)) from e


def _build_map(schema: MapSchema) -> RationalMap:
    if schema.divisor is not None:
        d = schema.divisor
        return RationalMap.from_divisor(
            [(parse_point(p), m) for p, m in d.zeros],
            [(parse_point(p), m) for p, m in d.poles],
            parse_point(d.one_at),
        )
    return RationalMap.create(
        [parse_cycnum(c) for c in schema.numerator],
        [parse_cycnum(c) for c in schema.denominator],
    )


def _matrix(values: list[str]) -> MobiusMap:
    return MobiusMap.create(*(parse_cycnum(v) for v in values))


def _build_transform(schema: CatalogEntrySchema) -> MobiusMap | RationalMap:
    if schema.kind == "mobius":
        return mobius_from_triple([parse_point(p) for p in schema.preimages], [ZERO, ONE, INFINITY])
    if schema.kind == "rational":
        return _build_map(schema.map)
    h = invariant_map([_matrix(g) for g in schema.group], _matrix(schema.base))
    targets = [h(parse_point(s)) for s in schema.normalize]
    return h.compose_mobius(mobius_from_triple(targets, [ZERO, ONE, INFINITY]))


def build_entry(schema: CatalogEntrySchema) -> CatalogEntry:
    """Construct the transform and re-run the closure and image checks."""
    try:
        transform = _build_transform(schema)
    except ParseError:
        raise
    except CmzvError as e:
        raise ValidationFailed(f"{schema.id}: {e}", entry_id=schema.id) from e
    support = level_support(schema.level)
    if not check_closed(transform, support):
        raise ValidationFailed(f"{schema.id}: transform is not closed on the level-{schema.level} support", entry_id=schema.id)
    image = tuple(image_support(transform, support))
    missing = [p for p in (ZERO, ONE, INFINITY) if p not in image]
    if missing:
        raise ValidationFailed(f"{schema.id}: image support misses {', '.join(p.to_text() for p in missing)}", entry_id=schema.id)
    if schema.image is not None and {parse_point(p) for p in schema.image} != set(image):
        raise ValidationFailed(f"{schema.id}: declared image support differs from the computed one", entry_id=schema.id)
    return CatalogEntry(schema.id, schema.level, schema.kind, transform, image, schema.provenance)


def build_chain(schema: ChainPairSchema) -> ChainPair:
    chain_r = tuple(_build_map(m) for m in schema.R)
    chain_t = tuple(_build_map(m) for m in schema.T)
    for name, chain in (("R", chain_r), ("T", chain_t)):
        for k, r in enumerate(chain):
            if not is_unital(r, schema.level):
                raise ValidationFailed(f"{schema.id}: {name}{k + 1} is not {schema.level}-unital", entry_id=schema.id)
    return ChainPair(schema.id, schema.level, chain_r, chain_t, schema.provenance)


def load_catalog(path: Path | str | None = None) -> list[CatalogEntry]:
    """Support transforms, validated on load."""
    if path is None:
        return list(_default_catalog())
    return _load_catalog(Path(path))


def _load_catalog(path: Path) -> list[CatalogEntry]:
    data = _read_json(path, CatalogFileSchema)
    entries = [build_entry(e) for e in data.entries]
    logger.info(f"loaded {len(entries)} catalog entries from {path.name}")
    return entries


@lru_cache(maxsize=1)
def _default_catalog() -> tuple[CatalogEntry, ...]:
    return tuple(_load_catalog(CATALOG_PATH))


def load_chains(path: Path | str | None = None) -> list[ChainPair]:
    data = _read_json(Path(path) if path else CATALOG_PATH, CatalogFileSchema)
    return [build_chain(c) for c in data.chains]


def load_identities(path: Path | str | None = None) -> list[IdentityRecord]:
    path = Path(path) if path else IDENTITIES_PATH
    data = _read_json(path, IdentityFileSchema)
    records = []
    for item in data.identities:
        try:
            records.append(
                IdentityRecord(
                    item.id,
                    parse_expression(item.lhs),
                    parse_expression(item.rhs) if item.rhs is not None else None,
                    item.status,
                    item.check,
                    item.provenance,
                    tuple(parse_expression(b) for b in item.basis),
                )
            )
        except ParseError as e:
            raise SchemaError(f"identity {item.id}: {e}", entry_id=item.id) from e
    logger.info(f"loaded {len(records)} identities from {path.name}")
    return records


# ========== REGRESSIONS ==========


def _converted(e: CmzvExpr) -> CmzvExpr:
    from app.core.convert import convert_expr  # convert loads the catalog

    return convert_expr(e)


def _run_theorem(record: IdentityRecord, cfg: EvalConfig) -> RegressionResult:
    """Value records compare lhs with rhs; convert records compare lhs with its conversion, and with rhs when given."""
    rhs = record.rhs if record.rhs is not None else CmzvExpr.zero()
    if record.check == "value":
        checks = [verify_identity(record.lhs, rhs, cfg)]
    else:
        converted = _converted(record.lhs)
        checks = [verify_identity(record.lhs, converted, cfg)]
        if record.rhs is not None:
            checks.append(verify_identity(converted, rhs, cfg))
    return RegressionResult(
        id=record.id,
        status="theorem",
        passed=all(c.passed for c in checks),
        residual=float(max(c.residual for c in checks)),
        provenance=record.provenance,
    )


def _run_conjecture(record: IdentityRecord, cfg: EvalConfig) -> RegressionResult:
    """Residual of lhs - rhs, plus an integer relation against the candidate basis when one is given."""
    diff = record.lhs - (record.rhs if record.rhs is not None else CmzvExpr.zero())
    residual = abs(eval_expr(diff, cfg))
    relation = None
    if record.basis:
        pcfg = replace(cfg, digits=max(cfg.digits, 20 + 10 * (len(record.basis) + 1)))
        values = [eval_expr(diff, pcfg)] + [eval_expr(b, pcfg) for b in record.basis]
        relation = pslq(values, pcfg)
    elif residual > mp.mpf(10) ** (5 - cfg.digits):
        logger.warning(f"conjecture {record.id} has residual {mp.nstr(residual, 3)}")
    return RegressionResult(
        id=record.id,
        status="conjecture",
        residual=float(residual),
        relation=relation,
        provenance=record.provenance,
    )


def run_regressions(records: list[IdentityRecord] | None = None, cfg: EvalConfig | None = None) -> RegressionReport:
    """Verify every theorem record; conjectures are evaluated and reported only."""
    cfg = cfg or EvalConfig.from_settings()
    records = load_identities() if records is None else records
    results = []
    for record in records:
        try:
            if record.status == "theorem":
                results.append(_run_theorem(record, cfg))
            else:
                results.append(_run_conjecture(record, cfg))
        except CmzvError as e:
            logger.warning(f"regression {record.id} raised {type(e).__name__}: {e}")
            results.append(
                RegressionResult(
                    id=record.id,
                    status=record.status,
                    passed=False if record.status == "theorem" else None,
                    error=f"{type(e).__name__}: {e}",
                    provenance=record.provenance,
                )
            )
    report = RegressionReport(digits=cfg.digits, results=results)
    logger.info(f"regressions: {report.summary()}")
    return report
