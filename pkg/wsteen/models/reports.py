"""Report models shared by the engine, the cache and the command line."""

from __future__ import annotations

from datetime import datetime
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class BasisReport(BaseModel):
    """Basis of one object at one bidegree."""

    object: str
    field: str
    p: int
    q: int
    dim: int
    basis: List[str] = Field(default_factory=list)


class HomologyReport(BaseModel):
    map_id: str
    bidegree: str
    dim_domain: int
    dim_ker: int
    dim_im: int  # rank of the incoming map
    dim_h: int
    predicted_dim_h: Optional[int] = None
    predicted_dim_ker: Optional[int] = None
    match: Optional[bool] = None
    witnesses: List[str] = Field(default_factory=list)


class RelationCheck(BaseModel):
    """Outcome of one relation at one choice of index sets."""

    relation: str
    params: Dict[str, str] = Field(default_factory=dict)
    status: str  # holds | fails | fails-as-printed-holds-with-correction
    printed_degrees: List[str] = Field(default_factory=list)
    homogeneous: bool = True
    correction: Optional[str] = None
    lhs: str = ""
    rhs: str = ""
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fails"


class IndependenceReport(BaseModel):
    bidegree: str
    candidates: List[str] = Field(default_factory=list)
    rank: int = 0
    independent: bool = True


class CheckRecord(BaseModel):
    """One verified statement inside a suite run."""

    name: str
    passed: bool
    detail: str = ""
    data: Dict[str, Any] = Field(default_factory=dict)
    error: bool = False


class VerificationReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    suite: str
    field: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    records: List[CheckRecord] = Field(default_factory=list)
    all_passed: bool = True
    elapsed_ms: float = 0.0
    created_at: str = Field(default_factory=lambda: datetime.now().isoformat())

    def add(self, record: CheckRecord) -> CheckRecord:
        self.records.append(record)
        self.all_passed = self.all_passed and record.passed
        return record

    def failures(self) -> List[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def stable_dump(self) -> Dict[str, Any]:
        """Serialized form without the timing fields."""
        return self.model_dump(exclude={"elapsed_ms", "created_at"})


class CacheEntry(BaseModel):
    key: str
    kind: str
    version: str
    payload: Dict[str, Any]
    created_at: str = Field(default_factory=lambda: datetime.now().isoformat())
