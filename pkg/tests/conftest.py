import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from scidiv import kernels  # noqa: E402
from scidiv.fixtures import chain_basemap, reference_scores, triangle_basemap  # noqa: E402

ACCEPTANCE = {}


@pytest.fixture(params=kernels.BACKEND_NAMES)
def backend(request):
    return request.param


@pytest.fixture
def chain():
    return chain_basemap()


@pytest.fixture
def triangle():
    return triangle_basemap()


@pytest.fixture(scope="session")
def ref_scores():
    return reference_scores()


@pytest.fixture(scope="session")
def warm_kernels():
    """Trigger numba compilation once, outside any timed block."""
    import numpy as np

    bm = chain_basemap()
    indptr, indices, w = bm.csr()
    for b in kernels.BACKEND_NAMES:
        kernels.weighted_apsp(indptr, indices, w, backend=b)
        kernels.hop_apsp(indptr, indices, backend=b)
        kernels.stirling_sum(np.ones(2), np.eye(2), backend=b)
        kernels.cosine_matrix(np.eye(2), backend=b)
        kernels.fr_layout(np.zeros((2, 2)), [0], [1], [0.5], 1, 0.5, 0.1, backend=b)


@pytest.fixture(scope="session")
def acceptance():
    """Registry of criterion verdicts printed in the terminal summary."""
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        entry = ACCEPTANCE[key]
        ok = all(passed for passed, _ in entry["parts"].values())
        timings = []
        for part, (_, t) in sorted(entry["parts"].items()):
            shown = "failed" if t is None else f"{t:.3f} s"
            timings.append(shown if part == "all" else f"{part} {shown}")
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key}. {entry['label']} ({', '.join(timings)})")
