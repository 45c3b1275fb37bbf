"""
Spectrum exploration
Probe every order n up to n_max for a shape gamma and a domain order v: boundary constructions
first (C_4 difference family, P_5 gluing, reserved-vertex down-links), then closure by embedding
an already witnessed codomain, then the generic down-link. Every witness is written to disk and
re-verified from the files before it counts.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional

from models.graph import BlockShape, HostSpec, C4, P5
from models.schemas import ProbeStatus, SpectrumEntry, SpectrumReport, WitnessManifest
from services.design_catalog import design_catalog
from services.linker import (
    SpectrumWitness,
    downlink_c4,
    downlink_cycle_system,
    downlink_generic,
    downlink_pk_design,
    extend_witness,
    verify_spectrum_membership,
)
from services.p5_gluing import downlink_p5
from utils.admissibility import (
    admissibility_rule,
    c4_boundary_allowed,
    c4_system_admissible,
    closed_form_spectrum,
    design_admissible,
    p4_admissible,
    p5_boundary_allowed,
    p5_design_admissible,
    reserved_branch_orders,
)
from utils.design_io import read_bundle, write_bundle
from utils.errors import InternalConsistencyError, PathlinkError, UsageError
from utils.logger import setup_logger

logger = setup_logger(__name__)


# ===================
# Witness persistence
# ===================

def bundle_name(gamma: BlockShape, v: int, n: int) -> str:
    return f"{gamma.label}-v{v}-n{n}"


def save_witness(w: SpectrumWitness, directory: Path) -> Path:
    """Atomic bundle write; the trace lands in the manifest and as codomain comments"""
    return write_bundle(directory, w.to_manifest(), w.downlink,
                        domain_comments=[f"({w.gamma}) domain of order {w.v}"],
                        codomain_comments=list(w.trace))


def load_witness(directory: Path) -> SpectrumWitness:
    manifest, dl = read_bundle(directory)
    return SpectrumWitness(BlockShape.parse(manifest.gamma), manifest.v, manifest.n, dl,
                           manifest.construction, list(manifest.trace))


def save_and_reverify(w: SpectrumWitness, directory: Path) -> Path:
    path = save_witness(w, directory)
    report = verify_spectrum_membership(load_witness(path))
    if not report.valid:
        raise InternalConsistencyError(f"bundle {path} fails re-verification: {report.violations[0].render()}")
    return path


# ===================
# Admissibility
# ===================

def domain_admissible(gamma: BlockShape, v: int) -> bool:
    if gamma == C4:
        return c4_system_admissible(v)
    if gamma == P5:
        return p5_design_admissible(v)
    return v > 1 and design_admissible(gamma, v)


def _reserved_t(gamma: BlockShape) -> Optional[int]:
    k = gamma.k
    if not gamma.is_path and k >= 9:
        return (k - 9) // 4
    if gamma.is_path and k >= 12:
        return (k - 12) // 4
    return None


def probe_floor(gamma: BlockShape, v: int) -> int:
    """Smallest order a down-link from order v can reach"""
    if gamma == C4:
        return v
    t = _reserved_t(gamma)
    if t is not None:
        return max(1, v - t)
    return max(1, v - 1)


# ===================
# Probing
# ===================

@dataclass
class SpectrumRun:
    gamma: BlockShape
    v: int
    n_max: int
    out_dir: Path
    witnesses: Dict[int, SpectrumWitness] = field(default_factory=dict)

    def domain(self):
        return design_catalog.base_design(self.gamma, HostSpec.complete(self.v))

    def boundary(self, n: int) -> Optional[SpectrumWitness]:
        if self.gamma == C4:
            return downlink_c4(self.v, n) if c4_boundary_allowed(self.v, n) else None
        if self.gamma == P5:
            return downlink_p5(self.v, n) if p5_boundary_allowed(self.v, n) else None
        t = _reserved_t(self.gamma)
        if t is None or self.v - t < 4 or n not in reserved_branch_orders(self.v - t):
            return None
        if self.gamma.is_path:
            return downlink_pk_design(self.domain(), n)
        return downlink_cycle_system(self.domain(), n)

    def closure(self, n: int) -> Optional[SpectrumWitness]:
        sources = [m for m in self.witnesses if m + 2 <= n]
        if not sources:
            return None
        return extend_witness(self.witnesses[max(sources)], n)

    def generic(self, n: int) -> Optional[SpectrumWitness]:
        if n < self.v + 2:
            return None
        return downlink_generic(self.domain(), n)

    def probe(self, n: int) -> SpectrumEntry:
        if not p4_admissible(n):
            return SpectrumEntry(n=n, status=ProbeStatus.INADMISSIBLE, detail="n = 2 (mod 3) or n in {2,3}")

        attempts: List[Callable[[int], Optional[SpectrumWitness]]] = [self.boundary, self.closure, self.generic]
        errors = []
        for attempt in attempts:
            try:
                witness = attempt(n)
            except PathlinkError as e:
                logger.error(f"{self.gamma} v={self.v} n={n}: {attempt.__name__} failed: {e}")
                errors.append(f"{attempt.__name__}: {e}")
                continue
            if witness is None:
                continue
            path = save_and_reverify(witness, self.out_dir / bundle_name(self.gamma, self.v, n))
            self.witnesses[n] = witness
            return SpectrumEntry(n=n, status=ProbeStatus.WITNESSED, construction=witness.construction, bundle=str(path))

        detail = "; ".join(errors) if errors else "no construction reaches this order"
        return SpectrumEntry(n=n, status=ProbeStatus.FAILED, detail=detail)


def cmd_spectrum(gamma: BlockShape, v: int, n_max: int, out_dir: Path) -> SpectrumReport:
    if not gamma.contains_p4:
        raise UsageError(f"{gamma} contains no P4; its spectrum is empty")
    if not domain_admissible(gamma, v):
        raise UsageError(f"v={v} is inadmissible for {gamma}: needs {admissibility_rule(gamma)}")

    run = SpectrumRun(gamma, v, n_max, Path(out_dir))
    floor = probe_floor(gamma, v)
    if n_max < floor:
        raise UsageError(f"n_max={n_max} is below the smallest reachable order {floor}")

    # ascending, closure reads earlier witnesses
    entries = [run.probe(n) for n in range(floor, n_max + 1)]
    report = SpectrumReport(gamma=gamma.label, v=v, n_max=n_max, entries=entries,
                            closed_form=closed_form_spectrum(gamma, v, n_max))
    logger.info(f"spectrum ({gamma}, v={v}) up to {n_max}: witnessed {report.witnessed()}, eta={report.eta}")
    return report


def write_report(report: SpectrumReport, out_dir: Path) -> Path:
    path = Path(out_dir) / "report.json"
    path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    return path
