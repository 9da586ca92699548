# app/schemas/report.py

from pydantic import BaseModel, Field, field_serializer
from typing import Optional, List, Literal


class RegressionResult(BaseModel):
    id: str
    status: Literal["theorem", "conjecture"]
    passed: Optional[bool] = None
    residual: Optional[float] = None
    relation: Optional[List[int]] = None
    error: Optional[str] = None
    provenance: str = ""

    @field_serializer("residual")
    def serialize_residual(self, v: Optional[float]):
        return None if v is None else float(f"{v:.3e}")


class RegressionReport(BaseModel):
    digits: int = Field(..., ge=10)
    results: List[RegressionResult] = []

    @property
    def failures(self) -> List[RegressionResult]:
        return [r for r in self.results if r.status == "theorem" and not r.passed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        theorems = [r for r in self.results if r.status == "theorem"]
        return {
            "theorems": len(theorems),
            "passed": sum(1 for r in theorems if r.passed),
            "failed": len(self.failures),
            "conjectures": len(self.results) - len(theorems),
        }
