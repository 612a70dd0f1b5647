import itertools

import pytest

from posetturan.lattice import Family, full_set
from posetturan.patterns import detect_y

ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for ln in lines:
            terminalreporter.write_line(ln)


@pytest.fixture
def acceptance_log(request):
    return request.config.stash[ACCEPTANCE_KEY]


def brute_embedding_exists(fam, pattern, mode):
    """Every injection of pattern elements into the family, checked directly."""
    m = pattern.m
    for images in itertools.permutations(fam.sets, m):
        good = True
        for i in range(m):
            for j in range(m):
                if i == j:
                    continue
                below = images[i] != images[j] and images[i] & images[j] == images[i]
                if pattern.lt[i][j] and not below:
                    good = False
                elif mode == "induced" and below and not pattern.lt[i][j]:
                    good = False
        if good:
            return True
    return False


def hypothesis_families(n, k):
    """All families in 2^[n] without the empty set, [n], induced Y_k or induced Y'_k."""
    top = full_set(n)
    idx = [s for s in range(1 << n) if s not in (0, top)]
    for bits in range(1 << len(idx)):
        fam = Family.of(n, [idx[i] for i in range(len(idx)) if bits >> i & 1])
        if detect_y(fam, k, 2) is None and detect_y(fam, k, 2, dualized=True) is None:
            yield fam
