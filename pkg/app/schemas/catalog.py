# app/schemas/catalog.py

from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Optional, List, Literal


class DivisorSchema(BaseModel):
    """A unital map given by its zeros and poles, normalized by R(one_at) = 1."""

    zeros: List[tuple[str, int]]
    poles: List[tuple[str, int]]
    one_at: str = "1"


class MapSchema(BaseModel):
    numerator: Optional[List[str]] = None
    denominator: Optional[List[str]] = None
    divisor: Optional[DivisorSchema] = None

    @model_validator(mode="after")
    def validate_form(self):
        """Exactly one of numerator/denominator or divisor."""
        explicit = self.numerator is not None and self.denominator is not None
        if explicit == (self.divisor is not None):
            raise ValueError("a map needs either numerator and denominator or a divisor")
        return self


class CatalogEntrySchema(BaseModel):
    id: str = Field(..., min_length=1)
    level: int = Field(..., ge=1)
    kind: Literal["mobius", "rational", "invariant"]
    provenance: str = ""
    preimages: Optional[List[str]] = None
    map: Optional[MapSchema] = None
    group: Optional[List[List[str]]] = None
    base: Optional[List[str]] = None
    normalize: Optional[List[str]] = None
    image: Optional[List[str]] = None

    @model_validator(mode="after")
    def validate_kind_fields(self):
        """Each kind carries its own construction data."""
        if self.kind == "mobius" and (self.preimages is None or len(self.preimages) != 3):
            raise ValueError(f"{self.id}: mobius entries need three preimages of 0, 1, inf")
        if self.kind == "rational" and self.map is None:
            raise ValueError(f"{self.id}: rational entries need a map")
        if self.kind == "invariant":
            if not self.group or self.base is None or self.normalize is None:
                raise ValueError(f"{self.id}: invariant entries need group, base and normalize")
            if len(self.base) != 4 or any(len(g) != 4 for g in self.group) or len(self.normalize) != 3:
                raise ValueError(f"{self.id}: Mobius matrices have four entries, normalize three points")
        return self


class ChainPairSchema(BaseModel):
    id: str = Field(..., min_length=1)
    level: int = Field(..., ge=1)
    provenance: str = ""
    R: List[MapSchema] = Field(..., min_length=1)
    T: List[MapSchema] = Field(..., min_length=1)


class CatalogFileSchema(BaseModel):
    entries: List[CatalogEntrySchema] = []
    chains: List[ChainPairSchema] = []


class IdentitySchema(BaseModel):
    id: str = Field(..., min_length=1)
    lhs: str
    rhs: Optional[str] = None
    status: Literal["theorem", "conjecture"] = "theorem"
    check: Literal["value", "convert"] = "value"
    provenance: str = ""
    basis: List[str] = []

    @field_validator("basis")
    @classmethod
    def validate_basis(cls, v):
        """Basis elements must be nonempty expressions."""
        if any(not b.strip() for b in v):
            raise ValueError("empty basis element")
        return v


class IdentityFileSchema(BaseModel):
    identities: List[IdentitySchema] = []
