# app/schemas/relations.py

import hashlib

from pydantic import BaseModel, Field, field_validator
from typing import Optional, List


class RelationTable(BaseModel):
    """Echelon rows of a relation system over its ordered monomial list."""

    level: int = Field(..., ge=1)
    weight: int = Field(..., ge=1)
    generators: List[str] = []
    monomials: List[str]
    rows: List[List[tuple[int, int, int]]] = []
    basis: List[int] = []
    dimension: Optional[int] = None
    deligne_bound: Optional[int] = None
    checksum: Optional[str] = None

    @field_validator("rows")
    @classmethod
    def validate_rows(cls, v):
        """Entries are (column, numerator, denominator) with a positive denominator."""
        for row in v:
            for col, _, den in row:
                if col < 0 or den <= 0:
                    raise ValueError(f"bad row entry ({col}, _, {den})")
        return v

    def digest(self) -> str:
        body = self.model_dump_json(exclude={"checksum"})
        return hashlib.sha256(body.encode("utf-8")).hexdigest()


class DimensionReport(BaseModel):
    level: int
    weight: int
    deligne_bound: int
    computed: Optional[int] = None
    generators: List[str] = []
