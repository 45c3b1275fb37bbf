"""
Base design catalog
Shipped designs (checksummed, re-verified at load) plus the recipes that build every other
small base design on demand: difference families, bipartite slabs, the two-apex decomposer and,
for hosts up to the configured edge limit, the oracle.
"""
import hashlib
import threading
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from models.graph import BlockShape, Design, DownLink, HostKind, HostSpec, C4, P4
from models.schemas import CatalogEntry, CatalogManifest
from services.apex_decomposer import p4_decompose_with_apexes
from services.bipartite_paths import bipartite_path_design, p4_bipartite_design
from services.cyclic_designs import (
    c4_difference_family,
    develop,
    hamiltonian_path_design,
    path_design,
    walecki_cycle_design,
)
from services.graph_core import verify_design, verify_downlink
from services.oracle_solver import OracleStatus, decomposition_oracle
from utils.admissibility import admissibility_rule, bipartite_admissible, design_admissible
from utils.design_io import parse_downlink, read_design, read_text
from utils.errors import (
    BudgetExhaustedError,
    DesignParseError,
    InternalConsistencyError,
    NotCatalogedError,
    UsageError,
)
from utils.logger import setup_logger
from utils.settings import get_settings

logger = setup_logger(__name__)

Key = Tuple[str, str]


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class BaseDesignCatalog:
    """(shape, host descriptor) -> Design, with a provenance tag per entry"""

    def __init__(self, root: Optional[Path] = None):
        self._root = Path(root) if root is not None else None
        self._designs: Dict[Key, Design] = {}
        self._provenance: Dict[Key, str] = {}
        self._downlinks: Dict[str, Dict[str, str]] = {}
        self._loaded = False
        self._lock = threading.RLock()

    @property
    def root(self) -> Path:
        return self._root if self._root is not None else get_settings().catalog

    # ---------- shipped data ----------

    def load(self) -> CatalogManifest:
        manifest_path = self.root / "manifest.json"
        if not manifest_path.exists():
            raise NotCatalogedError(f"no catalog manifest at {manifest_path}")
        try:
            manifest = CatalogManifest.model_validate_json(read_text(manifest_path))
        except ValidationError as e:
            raise DesignParseError(f"bad catalog manifest: {e}")

        with self._lock:
            for entry in manifest.entries:
                design = self._load_entry(entry)
                key = (BlockShape.parse(entry.shape).label, design.host.descriptor)
                self._designs[key] = design
                self._provenance[key] = entry.provenance
            for link in manifest.downlinks:
                self._check_checksum(self.root / link["file"], link.get("sha256", ""))
                self._downlinks[link["name"]] = link
            self._loaded = True
        logger.info(f"catalog loaded: {len(manifest.entries)} designs, {len(manifest.downlinks)} down-links from {self.root}")
        return manifest

    def _check_checksum(self, path: Path, expected: str):
        if not path.exists():
            raise NotCatalogedError(f"catalog file {path} is missing")
        actual = _sha256(path)
        if actual != expected:
            raise InternalConsistencyError(f"checksum mismatch for {path.name}: {actual} != {expected}")

    def _load_entry(self, entry: CatalogEntry) -> Design:
        path = self.root / entry.file
        self._check_checksum(path, entry.sha256)
        design = read_design(path)
        if design.host.descriptor != entry.host or design.shape.label != BlockShape.parse(entry.shape).label:
            raise InternalConsistencyError(f"{entry.file} does not hold a ({entry.host},{entry.shape})-design")
        report = verify_design(design)
        if not report.valid:
            raise InternalConsistencyError(f"catalog entry {entry.file} fails verification: {report.violations[0].render()}")
        return design

    def _ensure_loaded(self):
        if not self._loaded:
            with self._lock:
                if not self._loaded:
                    self.load()

    def entries(self) -> List[Tuple[str, str, str]]:
        """(shape, host, provenance) for everything loaded or built so far"""
        self._ensure_loaded()
        return sorted((s, h, p) for (s, h), p in self._provenance.items())

    def provenance(self, shape: BlockShape, host: HostSpec) -> Optional[str]:
        return self._provenance.get((shape.label, host.descriptor))

    def downlink(self, name: str) -> DownLink:
        self._ensure_loaded()
        if name not in self._downlinks:
            raise NotCatalogedError(f"no shipped down-link named {name}")
        path = self.root / self._downlinks[name]["file"]
        domain_file, codomain_file, pairs = parse_downlink(read_text(path))
        dl = DownLink(read_design(path.parent / domain_file), read_design(path.parent / codomain_file), tuple(pairs))
        report = verify_downlink(dl)
        if not report.valid:
            raise InternalConsistencyError(f"shipped down-link {name} fails verification: {report.violations[0].render()}")
        return dl

    # ---------- lookup / construction ----------

    def base_design(self, shape: BlockShape, host: HostSpec) -> Design:
        self._ensure_loaded()
        key = (shape.label, host.descriptor)
        if host.kind != HostKind.EDGES:
            with self._lock:
                if key in self._designs:
                    return self._designs[key]

        self._check_admissible(shape, host)
        design, provenance = self._build(shape, host)
        report = verify_design(design)
        if not report.valid:
            raise InternalConsistencyError(f"({host},{shape}) recipe fails verification: {report.violations[0].render()}")
        if host.kind != HostKind.EDGES:
            with self._lock:
                self._designs[key] = design
                self._provenance[key] = provenance
        logger.info(f"base design ({host},{shape}): {len(design)} blocks [{provenance}]")
        return design

    @staticmethod
    def _check_admissible(shape: BlockShape, host: HostSpec):
        if host.kind == HostKind.COMPLETE and not design_admissible(shape, host.params[0]):
            raise UsageError(f"(K_{host.params[0]},{shape}) is inadmissible: needs {admissibility_rule(shape)}")
        if host.kind == HostKind.BIPARTITE and not bipartite_admissible(shape, *host.params):
            raise UsageError(f"(K_{host.params[0]},{host.params[1]},{shape}) is inadmissible")
        if host.graph.size % shape.edge_count:
            raise UsageError(f"{host.graph.size} edges are not divisible by {shape.edge_count}")

    def _build(self, shape: BlockShape, host: HostSpec) -> Tuple[Design, str]:
        if host.kind == HostKind.COMPLETE:
            built = self._complete_recipe(shape, host.params[0])
        elif host.kind == HostKind.BIPARTITE:
            built = self._bipartite_recipe(shape, *host.params)
        else:
            built = None
        if built is not None:
            return built, "constructed"
        return self._oracle(shape, host), "oracle"

    @staticmethod
    def _complete_recipe(shape: BlockShape, n: int) -> Optional[Design]:
        k = shape.k
        if n == 1:
            return Design(HostSpec.complete(1), shape, ())
        if shape.is_path:
            if n % (2 * (k - 1)) in (0, 1):
                return path_design(n, k)
            if k == n and n % 2 == 0:
                return hamiltonian_path_design(n)
            if shape == P4:
                result = p4_decompose_with_apexes(HostSpec.complete(n).graph, n - 2, n - 1)
                return Design(HostSpec.complete(n), P4, result.design.blocks)
            return None
        if shape == C4 and n % 8 == 1:
            return develop(c4_difference_family(n))
        if k == n:
            return walecki_cycle_design(n)
        return None

    @staticmethod
    def _bipartite_recipe(shape: BlockShape, a: int, b: int) -> Optional[Design]:
        if shape == P4:
            return p4_bipartite_design(a, b)
        k = shape.k
        if shape.is_path and k % 2 == 0 and k - 1 in (a, b) and {a, b} <= {k - 2, k - 1, k}:
            return bipartite_path_design(k, a, b)
        return None

    @staticmethod
    def _oracle(shape: BlockShape, host: HostSpec) -> Design:
        limit = get_settings().oracle_edge_limit
        if host.graph.size > limit:
            raise NotCatalogedError(
                f"({host},{shape}) is admissible but has no construction; {host.graph.size} edges exceed the oracle limit {limit}"
            )
        outcome = decomposition_oracle.find_decomposition(host.graph, shape)
        if outcome.status == OracleStatus.EXHAUSTED:
            raise BudgetExhaustedError(f"oracle budget exhausted building ({host},{shape})")
        if not outcome.found:
            raise NotCatalogedError(f"oracle finds no ({host},{shape})-design")
        return Design(host, shape, outcome.witness.blocks)


design_catalog = BaseDesignCatalog()


def base_design(shape: BlockShape, host: HostSpec) -> Design:
    return design_catalog.base_design(shape, host)
