# scripts/generate_json_schemas.py

import json
import sys
from pathlib import Path

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent))

from app.schemas import (
    CatalogFileSchema,
    EvalResult,
    ExprSchema,
    IdentityFileSchema,
    RegressionReport,
    RelationTable,
    SeriesDump,
)

OUT_DIR = Path(__file__).parent.parent / "docs" / "schemas"

SCHEMAS = {
    "expr.json": ExprSchema,
    "series.json": SeriesDump,
    "relation_table.json": RelationTable,
    "eval_result.json": EvalResult,
    "catalog.json": CatalogFileSchema,
    "identities.json": IdentityFileSchema,
    "regression_report.json": RegressionReport,
}


def write_schemas():
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for name, model in SCHEMAS.items():
        path = OUT_DIR / name
        path.write_text(json.dumps(model.model_json_schema(), indent=2) + "\n", encoding="utf-8")
        print(f"✓ {path}")


if __name__ == "__main__":
    write_schemas()
