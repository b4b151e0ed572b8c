from pathlib import Path

import numpy as np
import pytest

from ngdbf.codes import load_alist, parse_alist

DATA_DIR = Path(__file__).parent / "data"

# 3x6 toy code; rows are {1,2,4}, {2,3,5}, {3,1,6} in 1-based symbols.
TINY_ALIST = """6 3
2 3
2 2 2 1 1 1
3 3 3
1 3
1 2
2 3
1 0
2 0
3 0
1 2 4
2 3 5
3 1 6
"""


@pytest.fixture(scope="session")
def tiny_code():
    return parse_alist(TINY_ALIST)


@pytest.fixture(scope="session")
def bench_code():
    """(3,6)-regular rate-1/2 code with n=1008, the benchmark shape."""
    return load_alist(DATA_DIR / "reg3x6_504x1008.alist")


def dense_h(code):
    h = np.zeros((code.m, code.n), dtype=np.int64)
    for i, row in enumerate(code.row_neighbors):
        h[i, row] = 1
    return h


def brute_syndrome(code, x):
    """Independent syndrome oracle via dense binary algebra."""
    bits = (1 - np.asarray(x, dtype=np.int64)) // 2
    parity = dense_h(code) @ bits % 2
    return (1 - 2 * parity).astype(np.int64)
