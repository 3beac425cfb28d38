from pathlib import Path
from typing import Optional, Tuple
import logging

from pydantic import BaseModel, Field, field_validator, model_validator

logger = logging.getLogger(__name__)

BACKENDS = ("two-term", "interval", "tabulated")
OUTPUT_FORMATS = ("dot", "json", "text")
TARGET_GROUPS = ("Z2", "Z3", "S3")


class Budgets(BaseModel):
    """Search and enumeration bounds shared by every phase."""

    poset_nodes: int = Field(default=500, gt=0)
    search_multiplicity: int = Field(default=3, gt=0)
    closure_passes: int = Field(default=50, gt=0)
    closure_multiplicity: int = Field(default=2, gt=0)
    universe_objects: int = Field(default=200, gt=0)
    universe_multiplicity: int = Field(default=1, gt=0)
    path_length: int = Field(default=12, gt=0)
    hom_count: int = Field(default=2_000_000, gt=0)
    tietze_steps: int = Field(default=10_000, gt=0)

    model_config = {"frozen": True}


DEFAULT_BUDGETS = Budgets()


class RunConfig(BaseModel):
    """Everything a CLI command needs; built from flags only."""

    input_path: Optional[Path] = None
    backend: str = "two-term"
    budgets: Budgets = DEFAULT_BUDGETS
    output_format: str = "text"
    output_path: Optional[Path] = None
    certificates: bool = False
    enough_injectives: bool = False
    threads: int = Field(default=1, gt=0)
    targets: Tuple[str, ...] = TARGET_GROUPS
    deterministic: bool = True

    @field_validator("output_format")
    @classmethod
    def check_format(cls, value: str) -> str:
        if value not in OUTPUT_FORMATS:
            raise ValueError(f"unknown output format {value!r}; expected one of {', '.join(OUTPUT_FORMATS)}")
        return value

    @field_validator("targets")
    @classmethod
    def check_targets(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        unknown = [t for t in value if t not in TARGET_GROUPS]
        if unknown:
            raise ValueError(f"unknown target groups: {', '.join(unknown)}")
        return value

    @field_validator("deterministic")
    @classmethod
    def always_deterministic(cls, value: bool) -> bool:
        if not value:
            raise ValueError("determinism cannot be switched off")
        return value

    @model_validator(mode="after")
    def check_backend(self) -> "RunConfig":
        kind, size = parse_backend(self.backend)
        if kind == "interval":
            if self.input_path is not None:
                raise ValueError("the interval backend takes no input file")
        elif self.input_path is None:
            raise ValueError(f"the {kind} backend needs an input file")
        return self

    @property
    def backend_kind(self) -> str:
        return parse_backend(self.backend)[0]

    @property
    def interval_size(self) -> Optional[int]:
        return parse_backend(self.backend)[1]


def parse_backend(selector: str) -> Tuple[str, Optional[int]]:
    """Split a selector like `interval:3` into its kind and size."""
    kind, _, rest = selector.partition(":")
    if kind not in BACKENDS:
        raise ValueError(f"unknown backend {selector!r}")
    if kind == "interval":
        if not rest.isdigit() or int(rest) < 1:
            raise ValueError(f"interval backend needs a positive size, got {selector!r}")
        return kind, int(rest)
    if rest:
        raise ValueError(f"backend {kind} takes no parameter")
    return kind, None
