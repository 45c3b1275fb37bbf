"""
Design file formats

design file (.pld):
    design <shape> host=<K n | K m n | edges>
    # comment lines
    block v1 v2 ... vk
    edge u v                (host=edges only)

down-link file (.pll):
    downlink <domain-file> <codomain-file>
    link i j

edge list (edges:<file> hosts):
    u v                     (one edge per line, "edge u v" also accepted)

witness bundle: a directory with manifest.json, domain.pld, codomain.pld, link.pll
"""
import os
import re
import shutil
import tempfile
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from pydantic import ValidationError

from models.graph import Block, BlockShape, Design, DownLink, Graph, HostSpec
from models.schemas import WitnessManifest
from utils.errors import DesignParseError, UsageError


# ===================
# Hosts
# ===================

def parse_host_tokens(tokens: Sequence[str], line: Optional[int] = None) -> Tuple[str, Tuple[int, ...]]:
    if list(tokens) == ["edges"]:
        return "edges", ()
    if not tokens or tokens[0] != "K" or len(tokens) not in (2, 3):
        raise DesignParseError(f"bad host descriptor '{' '.join(tokens)}'", line)
    try:
        params = tuple(int(t) for t in tokens[1:])
    except ValueError:
        raise DesignParseError(f"non-integer host parameter in '{' '.join(tokens)}'", line)
    if min(params) < 1:
        raise DesignParseError(f"host parameters must be positive, got {params}", line)
    return ("complete" if len(params) == 1 else "bipartite"), params


_HOST_ARG_RE = re.compile(r"^[Kk]_?(\d+)(?:[,x](\d+))?$")


def parse_host_arg(text: str) -> HostSpec:
    """CLI host: K9, K_9, K3,4 or edges:<file>"""
    text = text.strip()
    if text.startswith("edges:"):
        return read_edge_host(Path(text[len("edges:"):]))
    match = _HOST_ARG_RE.match(text)
    if not match:
        raise UsageError(f"bad host '{text}' (expected K<n>, K<m>,<n> or edges:<file>)")
    if match.group(2) is None:
        return HostSpec.complete(int(match.group(1)))
    return HostSpec.bipartite(int(match.group(1)), int(match.group(2)))


def parse_graph_arg(text: str) -> HostSpec:
    """parse_host_arg, where a bare path also names an edge-list or design file"""
    text = text.strip()
    if _HOST_ARG_RE.match(text) or text.startswith("edges:"):
        return parse_host_arg(text)
    return read_edge_host(Path(text))


# ===================
# Files
# ===================

def read_text(path: Path) -> str:
    """UTF-8 file contents; unreadable or undecodable files are parse errors"""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise DesignParseError(f"cannot read {path}: {e.strerror or e}")
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        for lineno, raw in enumerate(data.split(b"\n"), start=1):
            try:
                raw.decode("utf-8")
            except UnicodeDecodeError:
                raise DesignParseError(f"{path.name} is not UTF-8 text", lineno)
        raise DesignParseError(f"{path.name} is not UTF-8 text")


# ===================
# Designs
# ===================

def _ints(tokens: Sequence[str], line: int) -> List[int]:
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise DesignParseError(f"expected integers, got '{' '.join(tokens)}'", line)
    if any(v < 0 for v in values):
        raise DesignParseError("vertex ids must be non-negative", line)
    return values


def parse_design_with_comments(text: str) -> Tuple[Design, List[str]]:
    lines = text.splitlines()
    header_at = next((i for i, raw in enumerate(lines) if raw.strip()), None)
    if header_at is None:
        raise DesignParseError("empty design file", 1)
    header = lines[header_at].split()
    lineno = header_at + 1
    if len(header) < 3 or header[0] != "design" or not header[2].startswith("host="):
        raise DesignParseError("header must read 'design <shape> host=<K n | K m n | edges>'", lineno)
    try:
        shape = BlockShape.parse(header[1])
    except UsageError as e:
        raise DesignParseError(str(e), lineno)
    host_tokens = [header[2][len("host="):]] + header[3:]
    host_tokens = [t for t in host_tokens if t]
    kind, params = parse_host_tokens(host_tokens, lineno)

    comments: List[str] = []
    blocks: List[Block] = []
    edges: List[Tuple[int, int]] = []
    for i in range(header_at + 1, len(lines)):
        raw = lines[i].strip()
        lineno = i + 1
        if not raw:
            continue
        if raw.startswith("#"):
            comments.append(raw[1:].strip())
            continue
        parts = raw.split()
        if parts[0] == "block":
            values = _ints(parts[1:], lineno)
            try:
                blocks.append(Block(shape, tuple(values)))
            except UsageError as e:
                raise DesignParseError(str(e), lineno)
        elif parts[0] == "edge":
            if kind != "edges":
                raise DesignParseError("edge lines are only allowed with host=edges", lineno)
            values = _ints(parts[1:], lineno)
            if len(values) != 2 or values[0] == values[1]:
                raise DesignParseError("an edge line needs two distinct vertices", lineno)
            edges.append((values[0], values[1]))
        else:
            raise DesignParseError(f"unknown line type '{parts[0]}'", lineno)

    if kind == "complete":
        host = HostSpec.complete(params[0])
    elif kind == "bipartite":
        host = HostSpec.bipartite(*params)
    else:
        if not edges:
            raise DesignParseError("host=edges design lists no edges", len(lines))
        host = HostSpec.edges(Graph.from_edges(edges))
    return Design(host, shape, tuple(blocks)), comments


def parse_design(text: str) -> Design:
    return parse_design_with_comments(text)[0]


def serialize_design(d: Design, comments: Sequence[str] = ()) -> str:
    out = [f"design {d.shape.label} host={d.host.descriptor}"]
    out += [f"# {c}" for c in comments]
    out += ["block " + " ".join(str(v) for v in b.vertices) for b in d.blocks]
    if d.host.descriptor == "edges":
        out += [f"edge {u} {v}" for u, v in d.host.graph.edge_list]
    return "\n".join(out) + "\n"


def canonical_text(d: Design) -> str:
    """Serialized canonical form: canonical block orientations, sorted"""
    canon = d.canonical()
    ordered = Design(canon.host, canon.shape, tuple(sorted(canon.blocks, key=lambda b: b.vertices)))
    return serialize_design(ordered)


def read_design(path: Path) -> Design:
    return parse_design(read_text(path))


def parse_edge_list(text: str) -> Graph:
    """One 'u v' (or 'edge u v') per line, '#' comment lines"""
    edges: List[Tuple[int, int]] = []
    for i, raw in enumerate(text.splitlines()):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "edge":
            parts = parts[1:]
        values = _ints(parts, i + 1)
        if len(values) != 2 or values[0] == values[1]:
            raise DesignParseError("an edge line needs two distinct vertices", i + 1)
        edges.append((values[0], values[1]))
    if not edges:
        raise DesignParseError("edge list is empty", 1)
    return Graph.from_edges(edges)


def read_edge_host(path: Path) -> HostSpec:
    """The host of a design file, or an edge host from a plain edge list"""
    text = read_text(path)
    first = next((line.split()[0] for line in text.splitlines() if line.split()), "")
    if first == "design":
        return parse_design(text).host
    return HostSpec.edges(parse_edge_list(text))


def write_design(path: Path, d: Design, comments: Sequence[str] = ()) -> Path:
    path = Path(path)
    path.write_text(serialize_design(d, comments), encoding="utf-8")
    return path


# ===================
# Down-links
# ===================

def parse_downlink(text: str) -> Tuple[str, str, List[Tuple[int, int]]]:
    """(domain file, codomain file, link pairs)"""
    domain_file = codomain_file = None
    pairs: List[Tuple[int, int]] = []
    for i, raw in enumerate(text.splitlines()):
        line = raw.strip()
        lineno = i + 1
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if domain_file is None:
            if parts[0] != "downlink" or len(parts) != 3:
                raise DesignParseError("header must read 'downlink <domain-file> <codomain-file>'", lineno)
            domain_file, codomain_file = parts[1], parts[2]
            continue
        if parts[0] != "link" or len(parts) != 3:
            raise DesignParseError("expected 'link <i> <j>'", lineno)
        i_, j_ = _ints(parts[1:], lineno)
        pairs.append((i_, j_))
    if domain_file is None:
        raise DesignParseError("empty down-link file", 1)
    return domain_file, codomain_file, pairs


def serialize_downlink(mapping: Sequence[Tuple[int, int]], domain_file: str = "domain.pld",
                       codomain_file: str = "codomain.pld") -> str:
    out = [f"downlink {domain_file} {codomain_file}"]
    out += [f"link {i} {j}" for i, j in mapping]
    return "\n".join(out) + "\n"


def read_downlink(path: Path) -> DownLink:
    """Reads the link file and the two design files it names (relative to its directory)"""
    path = Path(path)
    domain_file, codomain_file, pairs = parse_downlink(read_text(path))
    domain = read_design(path.parent / domain_file)
    codomain = read_design(path.parent / codomain_file)
    return DownLink(domain, codomain, tuple(pairs))


# ===================
# Witness bundles
# ===================

def write_bundle(directory: Path, manifest: WitnessManifest, dl: DownLink,
                 domain_comments: Sequence[str] = (), codomain_comments: Sequence[str] = ()) -> Path:
    """Write into a temporary sibling directory, then move it into place"""
    directory = Path(directory)
    directory.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=f".{directory.name}-", dir=directory.parent))
    try:
        write_design(staging / manifest.domain_file, dl.domain, domain_comments)
        write_design(staging / manifest.codomain_file, dl.codomain, codomain_comments)
        (staging / manifest.link_file).write_text(
            serialize_downlink(dl.mapping, manifest.domain_file, manifest.codomain_file), encoding="utf-8")
        (staging / "manifest.json").write_text(manifest.model_dump_json(indent=2), encoding="utf-8")
        if directory.exists():
            shutil.rmtree(directory)
        os.replace(staging, directory)
    except Exception:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    return directory


def read_bundle(directory: Path) -> Tuple[WitnessManifest, DownLink]:
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.exists():
        raise DesignParseError(f"{directory} has no manifest.json")
    try:
        manifest = WitnessManifest.model_validate_json(read_text(manifest_path))
    except ValidationError as e:
        raise DesignParseError(f"bad witness manifest: {e}")
    dl = read_downlink(directory / manifest.link_file)
    return manifest, dl


def is_bundle(path: Path) -> bool:
    return Path(path).is_dir() and (Path(path) / "manifest.json").exists()
