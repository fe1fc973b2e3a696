"""Request models for the HTTP service.

Parameter values arrive as strings ("2", "-1/3") and are parsed into exact
rationals at the endpoint, so no precision is lost in transit.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

Group = Literal["B", "VB", "MkVB", "MkWB", "MkUB"]


class PresentRequest(BaseModel):
    group: Group
    n: int = Field(ge=2)
    k: int = Field(default=1, ge=1)
    show_forbidden: bool = False


class ClassifyRequest(BaseModel):
    group: Literal["MkVB", "MkWB"]
    k: int = Field(ge=2, le=4)
    cap: int = Field(default=10000, ge=1)


class VerifyRequest(BaseModel):
    family: str
    n: int = Field(ge=2)
    k: Optional[int] = Field(default=None, ge=1)
    params: dict[str, str] = Field(default_factory=dict)
    threads: Optional[int] = Field(default=None, ge=1)


AnalyzeCheck = Literal["irreducible", "invariant", "witness", "forbidden"]


class AnalyzeRequest(BaseModel):
    family: str
    n: int = Field(default=3, ge=2)
    k: Optional[int] = Field(default=None, ge=1)
    params: dict[str, str] = Field(default_factory=dict)
    check: AnalyzeCheck = "irreducible"
    conjugate: Optional[str] = None
    samples: int = Field(default=5, ge=1)
    seed: int = 0
    length: int = Field(default=6, ge=1)
    budget: int = Field(default=20000, ge=1)
    threads: Optional[int] = Field(default=None, ge=1)


LKBVariant = Literal["full", "welded", "m2wb3"]
LKBCheck = Literal["matrices", "relations", "t1", "irreducible", "witness"]


class LKBRequest(BaseModel):
    variant: LKBVariant = "full"
    n: int = Field(default=3, ge=3)
    check: LKBCheck = "relations"
    params: dict[str, str] = Field(default_factory=dict)
    length: int = Field(default=6, ge=1)
    budget: int = Field(default=20000, ge=1)
    threads: Optional[int] = Field(default=None, ge=1)
