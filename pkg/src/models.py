"""Pydantic models for campaign configuration documents."""

import json
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from src.config import Budgets
from src.metacyclic import FamilyTag, MetacyclicPresentation, make_family


class GroupSpec(BaseModel):
    """Either a family shortcut {family, p, n} or a full record {p, n, m, epsilon, r}."""

    family: Optional[str] = None
    p: int
    n: int
    m: Optional[int] = None
    epsilon: Optional[int] = None
    r: Optional[int] = None
    family_tag: Optional[str] = None

    @model_validator(mode="after")
    def _shape(self) -> "GroupSpec":
        custom = self.family is None or self.family.strip().lower() == "custom"
        if custom and None in (self.m, self.epsilon, self.r):
            raise ValueError("custom groups need m, epsilon and r")
        return self

    def to_presentation(self) -> MetacyclicPresentation:
        if self.family is not None and self.family.strip().lower() != "custom":
            return make_family(FamilyTag.parse(self.family), self.p, self.n)
        tag = FamilyTag.parse(self.family_tag) if self.family_tag else FamilyTag.CUSTOM
        return MetacyclicPresentation(p=self.p, n=self.n, m=self.m, epsilon=self.epsilon, r=self.r, family_tag=tag)


class WordGenSpec(BaseModel):
    mode: Literal["exhaustive", "random"] = "exhaustive"
    k_max: int = Field(default=2, ge=1)
    len_max: int = Field(default=4, ge=1)
    count: int = Field(default=100, ge=0)
    seed: int = 0


class BudgetSpec(BaseModel):
    max_evals: Optional[int] = Field(default=None, gt=0)
    max_order: Optional[int] = Field(default=None, gt=0)
    max_points: Optional[int] = Field(default=None, gt=0)
    max_btuples: Optional[int] = Field(default=None, gt=0)
    workers: Optional[int] = Field(default=None, ge=1)
    chunk_size: Optional[int] = Field(default=None, gt=0)
    lifts: Optional[int] = Field(default=None, ge=0)

    def apply(self, budgets: Budgets) -> Budgets:
        return budgets.override(**self.model_dump())


CHECK_NAMES = (
    "amit_ashurst",
    "dichotomy",
    "intersection_lemma",
    "z_polynomial",
    "z_probability_bound",
    "induction_lemma",
)


class CampaignConfig(BaseModel):
    groups: list[GroupSpec]
    words: list[WordGenSpec] = Field(default_factory=lambda: [WordGenSpec()])
    checks: list[str] = Field(default_factory=lambda: list(CHECK_NAMES))
    budgets: BudgetSpec = Field(default_factory=BudgetSpec)
    method: Literal["exhaustive", "coset_split"] = "coset_split"
    include_quotients: bool = False
    max_polynomial_order: int = Field(default=32, gt=0)
    batch_size: int = Field(default=64, gt=0)

    @field_validator("words", mode="before")
    @classmethod
    def _wrap_single(cls, value):
        return [value] if isinstance(value, dict) else value

    @field_validator("checks")
    @classmethod
    def _known_checks(cls, value: list[str]) -> list[str]:
        unknown = sorted(set(value) - set(CHECK_NAMES))
        if unknown:
            raise ValueError(f"unknown checks {unknown}; choose from {list(CHECK_NAMES)}")
        return value


def load_campaign_config(path: Path) -> CampaignConfig:
    """Read a campaign document from .toml or .json."""
    if path.suffix == ".toml":
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    else:
        data = json.loads(path.read_text(encoding="utf-8"))
    return CampaignConfig.model_validate(data)
