"""
Acceptance runner configuration
Scenario constants shared by run_acceptance.py
"""
from pathlib import Path

LOCAL_TESTING_DIR = Path(__file__).parent
RESULTS_DIR = LOCAL_TESTING_DIR / "results"

# Seeded corpora
FUZZ_SEED = 1729
APEX_FUZZ_GRAPHS = 500
APEX_FUZZ_MAX_ORDER = 20
ORACLE_SAMPLES = 100
ORACLE_MAX_ORDER = 8

# Even k for the K_{x,k-1} slabs, x in {k-2, k}
BIPARTITE_K_VALUES = (4, 6, 8, 10, 12, 14, 16)

C4_FAMILY_ORDERS = (9, 17, 25, 33, 41, 49, 57)
C4_SPECTRUM_ORDERS = (9, 17, 25)
C4_SPECTRUM_WINDOW = 12

# (33, 32) is unreachable: 32 = 2 (mod 3)
P5_BOUNDARY_PAIRS = (
    (8, 7), (9, 9), (9, 10), (16, 15), (16, 16), (17, 16),
    (24, 24), (24, 25), (25, 24), (25, 25), (33, 33),
)

# (n, m) pairs; together they hit every embedding bullet for each k
EMBED_PAIRS = {
    4: ((9, 13), (4, 6), (6, 9), (7, 10), (9, 12)),
    6: ((10, 20), (10, 16), (6, 16), (6, 15), (11, 21)),
}

# (shape, v): smallest admissible orders for the reserved-vertex down-links
RESERVED_CASES = (("C9", 9), ("C13", 13), ("P13", 24))

CLOSURE_START = 12
CLOSURE_TARGETS = (13, 15, 16)
