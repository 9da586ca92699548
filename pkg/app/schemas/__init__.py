# app/schemas/__init__.py

from app.schemas.expr import (
    ExprTerm,
    ExprSchema,
    SeriesDump,
    EvalResult,
    ConversionResult,
)
from app.schemas.relations import (
    RelationTable,
    DimensionReport,
)
from app.schemas.catalog import (
    DivisorSchema,
    MapSchema,
    CatalogEntrySchema,
    ChainPairSchema,
    CatalogFileSchema,
    IdentitySchema,
    IdentityFileSchema,
)
from app.schemas.report import (
    RegressionResult,
    RegressionReport,
)

__all__ = [
    "ExprTerm",
    "ExprSchema",
    "SeriesDump",
    "EvalResult",
    "ConversionResult",
    "RelationTable",
    "DimensionReport",
    "DivisorSchema",
    "MapSchema",
    "CatalogEntrySchema",
    "ChainPairSchema",
    "CatalogFileSchema",
    "IdentitySchema",
    "IdentityFileSchema",
    "RegressionResult",
    "RegressionReport",
]
