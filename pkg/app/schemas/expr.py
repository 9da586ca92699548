# app/schemas/expr.py

from pydantic import BaseModel, Field, field_validator
from typing import Optional, List, Dict, Any, Literal, Union


class ExprTerm(BaseModel):
    coeff: str
    atoms: List[Union[str, Dict[str, Any]]] = []


class ExprSchema(BaseModel):
    """A CmzvExpr; index atoms carry exponents at the common level."""

    level: int = Field(..., ge=1)
    terms: List[ExprTerm] = []

    @field_validator("terms")
    @classmethod
    def validate_terms(cls, v):
        """Coefficients must be nonempty."""
        if any(not t.coeff.strip() for t in v):
            raise ValueError("empty coefficient")
        return v


class SeriesDump(BaseModel):
    alphabet: List[str]
    W: int = Field(..., ge=0)
    mode: Literal["symbolic", "numeric"]
    coeffs: Dict[str, Union[str, List[str]]] = {}


class EvalResult(BaseModel):
    input: str
    digits: int = Field(..., ge=10)
    value_re: str
    value_im: str
    est_error: str


class ConversionResult(BaseModel):
    input: str
    expr: ExprSchema
    text: str
    residual: Optional[str] = None
