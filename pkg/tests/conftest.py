import sys
from pathlib import Path

from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"


@st.composite
def unimodular(draw, n, steps=6, entry=2):
    """Random unimodular matrix as a product of elementary and swap moves."""
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    if n < 2:
        return [[draw(st.sampled_from([1, -1]))]] if n else P
    for _ in range(draw(st.integers(0, steps))):
        i, j = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
        kind = draw(st.sampled_from(["add", "swap", "neg"]))
        if kind == "add":
            c = draw(st.integers(-entry, entry))
            for r in range(n):
                P[r][i] += c * P[r][j]
        elif kind == "swap":
            for r in range(n):
                P[r][i], P[r][j] = P[r][j], P[r][i]
        else:
            for r in range(n):
                P[r][i] = -P[r][i]
    return P


@st.composite
def even_gram(draw, min_rank=1, max_rank=4, entry=6):
    n = draw(st.integers(min_rank, max_rank))
    G = [[0] * n for _ in range(n)]
    for i in range(n):
        G[i][i] = 2 * draw(st.integers(-entry // 2, entry // 2))
        for j in range(i + 1, n):
            G[i][j] = G[j][i] = draw(st.integers(-entry, entry))
    return G


@st.composite
def positive_even_gram(draw, min_rank=1, max_rank=4):
    """Positive definite even Gram matrices with small entries (diagonally dominant)."""
    n = draw(st.integers(min_rank, max_rank))
    G = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            G[i][j] = G[j][i] = draw(st.integers(-2, 2))
    for i in range(n):
        off = sum(abs(G[i][j]) for j in range(n) if j != i)
        extra = draw(st.integers(0, 2))
        G[i][i] = 2 * ((off + 2) // 2 + extra)
    return G


def congruent(G, P):
    n, k = len(G), len(P[0])
    GP = [[sum(G[i][t] * P[t][j] for t in range(n)) for j in range(k)] for i in range(n)]
    return [[sum(P[t][i] * GP[t][j] for t in range(n)) for j in range(k)] for i in range(k)]


# acceptance lines collected by test_acceptance.py, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
