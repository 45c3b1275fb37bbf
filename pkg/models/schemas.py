"""
Pydantic schemas for reports, budgets, catalog manifests and witness bundles
"""
from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, computed_field


# ===================
# Verification
# ===================

class FindingKind(str, Enum):
    MISSING_EDGE = "MissingEdge"
    DUPLICATE_EDGE = "DuplicateEdge"
    FOREIGN_EDGE = "ForeignEdge"
    BAD_BLOCK_SHAPE = "BadBlockShape"
    NOT_SUBGRAPH = "NotSubgraph"
    UNMAPPED_BLOCK = "UnmappedBlock"
    DUPLICATE_LINK = "DuplicateLink"
    BAD_LINK_INDEX = "BadLinkIndex"
    REPEATED_DIFFERENCE = "RepeatedDifference"
    MISSING_DIFFERENCE = "MissingDifference"
    ORDER_MISMATCH = "OrderMismatch"
    ORDER_BOUND = "OrderBound"


class Finding(BaseModel):
    """One violation; carries the offending edge and/or block index"""
    kind: FindingKind
    message: str
    edge: Optional[Tuple[int, int]] = None
    block_index: Optional[int] = None
    scope: str = ""  # "domain" / "codomain" inside down-link reports

    def render(self) -> str:
        where = f"{self.scope}: " if self.scope else ""
        return f"{where}{self.kind.value}: {self.message}"


class VerificationReport(BaseModel):
    violations: List[Finding] = []
    observations: List[str] = []

    @computed_field
    @property
    def valid(self) -> bool:
        return not self.violations

    def kinds(self) -> List[FindingKind]:
        return [f.kind for f in self.violations]

    def merged(self, other: "VerificationReport", scope: str = "") -> "VerificationReport":
        extra = [f.model_copy(update={"scope": scope or f.scope}) for f in other.violations]
        return VerificationReport(
            violations=self.violations + extra,
            observations=self.observations + other.observations,
        )


# ===================
# Oracle
# ===================

class SearchBudget(BaseModel):
    """Limits for one oracle search"""
    max_nodes: int = Field(default=10_000_000, gt=0)
    max_seconds: float = Field(default=120.0, gt=0)
    seed: int = 1729


# ===================
# Catalog
# ===================

Provenance = Literal["published", "oracle", "constructed"]


class CatalogEntry(BaseModel):
    shape: str
    host: str
    file: str
    sha256: str
    provenance: Provenance
    note: str = ""


class CatalogManifest(BaseModel):
    version: int = 1
    entries: List[CatalogEntry] = []
    downlinks: List[Dict[str, str]] = []


# ===================
# Witness bundles / spectrum
# ===================

class WitnessManifest(BaseModel):
    gamma: str
    v: int
    n: int
    construction: str
    domain_file: str = "domain.pld"
    codomain_file: str = "codomain.pld"
    link_file: str = "link.pll"
    trace: List[str] = []


class ProbeStatus(str, Enum):
    WITNESSED = "Witnessed"
    INADMISSIBLE = "Inadmissible"
    FAILED = "Failed"


class SpectrumEntry(BaseModel):
    n: int
    status: ProbeStatus
    construction: str = ""
    bundle: Optional[str] = None
    detail: str = ""


class SpectrumReport(BaseModel):
    gamma: str
    v: int
    n_max: int
    entries: List[SpectrumEntry] = []
    closed_form: Optional[List[int]] = None

    @computed_field
    @property
    def eta(self) -> Optional[int]:
        witnessed = self.witnessed()
        return min(witnessed) if witnessed else None

    def witnessed(self) -> List[int]:
        return [e.n for e in self.entries if e.status == ProbeStatus.WITNESSED]

    def matches_closed_form(self) -> Optional[bool]:
        if self.closed_form is None:
            return None
        return sorted(self.witnessed()) == sorted(self.closed_form)

    def to_frame(self):
        import pandas as pd

        rows = [
            {
                "n": e.n,
                "status": e.status.value,
                "construction": e.construction,
                "closed_form": (e.n in self.closed_form) if self.closed_form is not None else None,
                "detail": e.detail,
            }
            for e in self.entries
        ]
        return pd.DataFrame(rows, columns=["n", "status", "construction", "closed_form", "detail"])
