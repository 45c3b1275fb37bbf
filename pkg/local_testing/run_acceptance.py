#!/usr/bin/env python3
"""
Acceptance Runner CLI
Runs the desk-scale acceptance scenarios outside pytest.

Usage:
    python -m local_testing.run_acceptance --list
    python -m local_testing.run_acceptance --all
    python -m local_testing.run_acceptance --scenario p5-boundary
"""
import argparse
import random
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Tuple

# repo root on sys.path
backend_path = Path(__file__).parent.parent
if str(backend_path) not in sys.path:
    sys.path.insert(0, str(backend_path))

from local_testing.config import (
    APEX_FUZZ_GRAPHS,
    APEX_FUZZ_MAX_ORDER,
    BIPARTITE_K_VALUES,
    C4_FAMILY_ORDERS,
    C4_SPECTRUM_ORDERS,
    C4_SPECTRUM_WINDOW,
    CLOSURE_START,
    CLOSURE_TARGETS,
    EMBED_PAIRS,
    FUZZ_SEED,
    ORACLE_MAX_ORDER,
    ORACLE_SAMPLES,
    P5_BOUNDARY_PAIRS,
    RESERVED_CASES,
)
from models.graph import BlockShape, HostSpec, C4, P4
from services.apex_decomposer import (
    COVERAGE_LABELS,
    p4_decompose_with_apexes,
    random_two_apex_graph,
    seeded_two_apex_corpus,
)
from services.bipartite_paths import decompose_k_bipartite
from services.cyclic_designs import c4_difference_family, develop, verify_difference_family
from services.design_catalog import design_catalog
from services.graph_core import verify_design, verify_downlink
from services.linker import (
    downlink_c4,
    downlink_cycle_system,
    downlink_pk_design,
    embed_pk,
    extend_witness,
    verify_spectrum_membership,
)
from services.oracle_solver import OracleStatus, decomposition_oracle
from services.p5_gluing import downlink_p5
from services.spectrum_service import cmd_spectrum
from utils.admissibility import c4_boundary_allowed
from utils.errors import PathlinkError


class Colors:
    """Terminal colours"""
    GREEN = '\033[92m'
    RED = '\033[91m'
    YELLOW = '\033[93m'
    BLUE = '\033[94m'
    CYAN = '\033[96m'
    RESET = '\033[0m'
    BOLD = '\033[1m'


@dataclass
class ScenarioResult:
    name: str
    passed: bool
    detail: str
    elapsed: float = 0.0


def print_header():
    print(f"""
{Colors.CYAN}================================{Colors.RESET}
{Colors.BOLD}pathlink acceptance runner{Colors.RESET}
{Colors.CYAN}================================{Colors.RESET}
""")


# ===================
# Scenarios
# ===================

def scenario_golden() -> Tuple[bool, str]:
    dl = design_catalog.downlink("K24x9-P5-to-K24x10-P4")
    report = verify_downlink(dl)
    ok = (report.valid and len(dl.domain) == 54 and dl.domain.host.graph.size == 216
          and len(dl.codomain) == 80 and dl.codomain.host.graph.size == 240)
    return ok, f"{len(dl.domain)} P5 on K_24,9 -> {len(dl.codomain)} P4 on K_24,10"


def scenario_bipartite() -> Tuple[bool, str]:
    bad = []
    for k in BIPARTITE_K_VALUES:
        for x in (k - 2, k):
            d = decompose_k_bipartite(k, x)
            if not verify_design(d).valid or len(d) != x:
                bad.append((k, x))
    return not bad, f"failures {bad}" if bad else f"{2 * len(BIPARTITE_K_VALUES)} slabs verified"


def scenario_apex_fuzz() -> Tuple[bool, str]:
    seen = set()
    corpus = seeded_two_apex_corpus(APEX_FUZZ_GRAPHS, APEX_FUZZ_MAX_ORDER, FUZZ_SEED)
    for i, (g, alpha, beta) in enumerate(corpus):
        result = p4_decompose_with_apexes(g, alpha, beta)
        if len(result.leftover) != g.size % 3 or not verify_design(result.design).valid:
            return False, f"graph {i} (order {g.order}) breaks the partition"
        seen.update(result.case_trace)
    missing = sorted(set(COVERAGE_LABELS) - seen)
    if missing:
        return False, f"labels never hit: {missing}"
    return True, f"{APEX_FUZZ_GRAPHS} graphs; all {len(COVERAGE_LABELS)} case labels hit"


def scenario_oracle() -> Tuple[bool, str]:
    rng = random.Random(FUZZ_SEED)
    checked = 0
    attempt = 0
    while checked < ORACLE_SAMPLES:
        order = rng.randint(4, ORACLE_MAX_ORDER)
        g = random_two_apex_graph(order, rng.random(), seed=FUZZ_SEED + attempt)
        attempt += 1
        if g.size % 3:
            continue
        if decomposition_oracle.find_decomposition(g, P4).status != OracleStatus.FOUND:
            return False, f"oracle refutes a two-apex graph on {order} vertices"
        checked += 1
    for n in range(2, ORACLE_MAX_ORDER + 1):
        if n % 3 == 2:
            status = decomposition_oracle.find_decomposition(HostSpec.complete(n).graph, P4).status
            if status != OracleStatus.INFEASIBLE:
                return False, f"K_{n} reported {status.value}"
    return True, f"{checked} two-apex graphs Found; K_n, n = 2 (mod 3) Infeasible"


def scenario_c4_family() -> Tuple[bool, str]:
    count = 0
    for v in C4_FAMILY_ORDERS:
        df = c4_difference_family(v)
        if not verify_difference_family(df).valid or not verify_design(develop(df)).valid:
            return False, f"family at v={v}"
        for target in (v, v + 1):
            if c4_boundary_allowed(v, target):
                if not verify_spectrum_membership(downlink_c4(v, target)).valid:
                    return False, f"witness ({v},{target})"
                count += 1
    return True, f"{count} boundary witnesses"


def scenario_c4_spectrum() -> Tuple[bool, str]:
    with tempfile.TemporaryDirectory() as tmp:
        for v in C4_SPECTRUM_ORDERS:
            report = cmd_spectrum(C4, v, v + C4_SPECTRUM_WINDOW, Path(tmp) / f"v{v}")
            if not report.matches_closed_form():
                return False, f"v={v}: witnessed {report.witnessed()} vs {report.closed_form}"
    return True, f"closed form matched for v in {list(C4_SPECTRUM_ORDERS)}"


def scenario_p5_boundary() -> Tuple[bool, str]:
    for v, target in P5_BOUNDARY_PAIRS:
        if not verify_spectrum_membership(downlink_p5(v, target)).valid:
            return False, f"({v},{target})"
    return True, f"{len(P5_BOUNDARY_PAIRS)} gluing witnesses"


def scenario_embed() -> Tuple[bool, str]:
    for k, pairs in EMBED_PAIRS.items():
        shape = BlockShape.path(k)
        for n, m in pairs:
            d = design_catalog.base_design(shape, HostSpec.complete(n))
            out = embed_pk(d, m)
            if not verify_design(out).valid or not d.block_keys() <= out.block_keys():
                return False, f"k={k}, n={n}, m={m}"
    return True, f"{sum(len(p) for p in EMBED_PAIRS.values())} embeddings"


def scenario_reserved() -> Tuple[bool, str]:
    for label, v in RESERVED_CASES:
        shape = BlockShape.parse(label)
        d = design_catalog.base_design(shape, HostSpec.complete(v))
        w = downlink_pk_design(d) if shape.is_path else downlink_cycle_system(d)
        if not verify_spectrum_membership(w).valid:
            return False, f"{label} v={v}"
    return True, f"{len(RESERVED_CASES)} reserved-vertex witnesses"


def scenario_closure() -> Tuple[bool, str]:
    w10 = downlink_c4(9, 10)
    start = extend_witness(w10, CLOSURE_START)
    for m in CLOSURE_TARGETS:
        source = start if m >= CLOSURE_START + 2 else w10
        if not verify_spectrum_membership(extend_witness(source, m)).valid:
            return False, f"n={m}"
    return True, f"witnesses at {list(CLOSURE_TARGETS)}"


SCENARIOS: Dict[str, Callable[[], Tuple[bool, str]]] = {
    "golden-k24x9": scenario_golden,
    "bipartite-slabs": scenario_bipartite,
    "apex-fuzz": scenario_apex_fuzz,
    "oracle-crosscheck": scenario_oracle,
    "c4-family": scenario_c4_family,
    "c4-spectrum": scenario_c4_spectrum,
    "p5-boundary": scenario_p5_boundary,
    "embed-bullets": scenario_embed,
    "reserved-vertices": scenario_reserved,
    "closure": scenario_closure,
}


# ===================
# Runner
# ===================

def run_scenario(name: str) -> ScenarioResult:
    start = time.time()
    try:
        passed, detail = SCENARIOS[name]()
    except PathlinkError as e:
        passed, detail = False, f"{type(e).__name__}: {e}"
    return ScenarioResult(name, passed, detail, time.time() - start)


def print_result(result: ScenarioResult, index: int = None, total: int = None):
    prefix = f"[{index}/{total}] " if index and total else ""
    status = f"{Colors.GREEN}PASSED{Colors.RESET}" if result.passed else f"{Colors.RED}FAILED{Colors.RESET}"
    print(f"{prefix}{result.name}  {status}  ({result.elapsed:.2f}s)")
    print(f"       {result.detail}")


def run_all() -> List[ScenarioResult]:
    print_header()
    results = []
    for i, name in enumerate(SCENARIOS, 1):
        result = run_scenario(name)
        results.append(result)
        print_result(result, i, len(SCENARIOS))

    passed = sum(1 for r in results if r.passed)
    print(f"\n{Colors.CYAN}================================{Colors.RESET}")
    colour = Colors.GREEN if passed == len(results) else Colors.RED
    print(f"{Colors.BOLD}Total:{Colors.RESET} {colour}{passed}/{len(results)}{Colors.RESET}")
    print(f"{Colors.CYAN}================================{Colors.RESET}\n")
    return results


def main():
    parser = argparse.ArgumentParser(
        description="pathlink acceptance runner",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    python -m local_testing.run_acceptance --list
    python -m local_testing.run_acceptance --scenario closure
    python -m local_testing.run_acceptance --all
        """
    )
    parser.add_argument("--scenario", choices=sorted(SCENARIOS), help="run one scenario")
    parser.add_argument("--all", action="store_true", help="run every scenario")
    parser.add_argument("--list", action="store_true", help="list scenarios")
    args = parser.parse_args()

    if args.list:
        print_header()
        for name, fn in SCENARIOS.items():
            print(f"  {Colors.BLUE}{name}{Colors.RESET}: {fn.__name__}")
        return 0
    if args.all:
        results = run_all()
        return 0 if all(r.passed for r in results) else 1
    if args.scenario:
        print_header()
        result = run_scenario(args.scenario)
        print_result(result)
        return 0 if result.passed else 1

    parser.print_help()
    return 3


if __name__ == "__main__":
    sys.exit(main())
