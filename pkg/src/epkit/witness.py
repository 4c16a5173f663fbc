"""Seeded random matrices, class-separation search, and worked-example fixtures."""

from __future__ import annotations

import re
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .classes import (
    CharacterizationSkipped,
    ClassReport,
    Operator,
    classify,
    is_EP,
    is_hypo_EP,
    is_n_EP,
    is_n_hypo_EP,
    is_normal,
    is_p_EP,
    is_p_hypo_EP,
    is_p_normal,
    is_SD,
)
from .matrix import DEFAULT_TOL, Matrix, Tolerance, adjoint, rank
from .polynomial import Polynomial
from .scalar import EXACT, Gaussian

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class GenSpec:
    dim: int
    rank: int
    entry_bound: int = 3
    backend: str = EXACT
    seed: int = 0
    cols: Optional[int] = None  # defaults to dim (square)
    complex_entries: bool = True
    max_retries: int = 200

    def __post_init__(self):
        if self.dim < 1 or (self.cols is not None and self.cols < 1):
            raise ValueError("dimensions must be positive")
        if not 0 <= self.rank <= min(self.dim, self.cols or self.dim):
            raise ValueError(f"rank {self.rank} impossible for the requested shape")
        if self.entry_bound < 1:
            raise ValueError("entry_bound must be >= 1")
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError("seed must be an unsigned 64-bit integer")


def candidate_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Independent stream for candidate ``index`` of a run seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _int_block(rng: np.random.Generator, m: int, n: int, bound: int, cplx: bool):
    re = rng.integers(-bound, bound, size=(m, n), endpoint=True)
    im = rng.integers(-bound, bound, size=(m, n), endpoint=True) if cplx else np.zeros((m, n), dtype=np.int64)
    return re, im


def _gaussian_int_matrix(re, im) -> Matrix:
    return Matrix([[Gaussian(int(a), int(b)) for a, b in zip(ra, ia)] for ra, ia in zip(re, im)], EXACT)


def random_matrix(spec: GenSpec, rng: np.random.Generator | None = None) -> Matrix:
    """Product of an m x r and an r x n Gaussian-integer matrix, redrawn
    until its rank is exactly r."""
    m, n = spec.dim, spec.cols or spec.dim
    if spec.rank == 0:
        return Matrix.zeros(m, n, spec.backend)
    rng = rng or candidate_rng(spec.seed)
    for _ in range(spec.max_retries):
        Fr, Fi = _int_block(rng, m, spec.rank, spec.entry_bound, spec.complex_entries)
        Gr, Gi = _int_block(rng, spec.rank, n, spec.entry_bound, spec.complex_entries)
        # integer arithmetic; exact in both backends
        Pr = Fr @ Gr - Fi @ Gi
        Pi = Fr @ Gi + Fi @ Gr
        M = _gaussian_int_matrix(Pr, Pi)
        if rank(M) == spec.rank:
            return M if spec.backend == EXACT else M.to_float()
    raise RuntimeError(f"no rank-{spec.rank} matrix after {spec.max_retries} draws")


def random_polynomial(rng: np.random.Generator, max_degree: int = 4, bound: int = 3,
                      vanish_at_zero: bool = True, complex_coeffs: bool = True) -> Polynomial:
    """Random nonzero Gaussian-integer polynomial of degree 1..max_degree."""
    while True:
        deg = int(rng.integers(1, max_degree, endpoint=True))
        re = rng.integers(-bound, bound, size=deg + 1, endpoint=True)
        im = rng.integers(-bound, bound, size=deg + 1, endpoint=True) if complex_coeffs else np.zeros(deg + 1, dtype=int)
        coeffs = [Gaussian(int(a), int(b)) for a, b in zip(re, im)]
        if vanish_at_zero:
            coeffs[0] = Gaussian(0)
        p = Polynomial(coeffs)
        if p.degree >= 1:
            return p


def _transpose(M: Matrix) -> Matrix:
    return Matrix([[M[i, j] for i in range(M.rows)] for j in range(M.cols)], M.backend)


def planted_p_hypo_EP(rng: np.random.Generator, dim: int, bound: int = 3) -> tuple[Matrix, Polynomial]:
    """Exact (T, p) with p(0) = 0 and T p-hypo-EP by construction, usually not hypo-EP.

    Builds the block form C = [[T1, 0], [T2, 0]] with T1 invertible upper
    triangular, q = p/t vanishing at a diagonal entry of T1, and the rows of
    T2 drawn from the left null space of q(T1), so that T2 q(T1) = 0.  C is
    then expressed in a random orthogonal (unnormalized) basis B, giving
    T = B C B^-1.
    """
    from .blockrep import _gram_schmidt
    from .matrix import inverse
    from .polynomial import poly_eval

    if dim < 2:
        raise ValueError("planted examples need dim >= 2")
    r = int(rng.integers(1, min(dim - 1, 3), endpoint=True))
    nonzero = [Gaussian(a, b) for a in range(-bound, bound + 1) for b in range(-bound, bound + 1) if a or b]
    pick = lambda: nonzero[int(rng.integers(len(nonzero)))]
    rand = lambda: Gaussian(int(rng.integers(-bound, bound, endpoint=True)), int(rng.integers(-bound, bound, endpoint=True)))
    rows = [[pick() if i == j else (rand() if j > i else Gaussian(0)) for j in range(r)] for i in range(r)]
    k = int(rng.integers(r))
    lam = rows[k][k]
    s = random_polynomial(rng, max_degree=2, bound=bound, vanish_at_zero=False)
    q = Polynomial([-lam, 1]) * s
    p = q.shift(1)
    left_null = _kernel_rows(_transpose(poly_eval(q, Matrix(rows, EXACT))))
    T2_rows = []
    for _ in range(dim - r):
        if left_null:
            coeffs = [rand() for _ in left_null]
            T2_rows.append([sum((c * v[j] for c, v in zip(coeffs, left_null)), Gaussian(0)) for j in range(r)])
        else:
            T2_rows.append([Gaussian(0)] * r)
    zero_cols = [Gaussian(0)] * (dim - r)
    C = Matrix([row + zero_cols for row in rows] + [row + zero_cols for row in T2_rows], EXACT)
    while True:
        vecs = [[rand() for _ in range(dim)] for _ in range(dim)]
        B = _gram_schmidt(vecs)
        if len(B) == dim:
            break
    Bm = Matrix.from_columns(B, dim, EXACT)
    gram = Matrix.diag([sum((x.abs2() for x in v), 0) for v in B], EXACT)
    return Bm @ C @ inverse(gram) @ adjoint(Bm), p


def _kernel_rows(M: Matrix) -> list[list]:
    from .ranges import kernel_basis
    return kernel_basis(M)


def consensus_corpus(count: int, seed: int, dims: tuple[int, int] = (2, 5), bound: int = 3,
                     max_degree: int = 4) -> list[tuple[Matrix, Polynomial]]:
    """Seeded exact (T, p) pairs with p(0) = 0: even indices are plain random
    draws, odd indices are planted p-hypo-EP examples."""
    out = []
    for i in range(count):
        rng = candidate_rng(seed, i)
        dim = int(rng.integers(dims[0], dims[1], endpoint=True))
        if i % 2 and dim >= 2:
            out.append(planted_p_hypo_EP(rng, dim, bound))
            continue
        r = int(rng.integers(0, dim, endpoint=True))
        T = random_matrix(GenSpec(dim, r, bound, EXACT, seed), rng)
        out.append((T, random_polynomial(rng, max_degree, bound)))
    return out


# query language: atoms combined with & | ! and parentheses

_TOKEN = re.compile(r"\s*(?:(?P<op>[&|!()∧∨¬])|(?P<atom>[A-Za-z0-9_-]+))")

_ATOMS = {
    "EP": "EP", "HEP": "HEP", "hypo-EP": "HEP", "SD": "SD", "normal": "normal",
    "n-EP": "n-EP", "nEP": "n-EP", "n-HEP": "n-HEP", "nHEP": "n-HEP", "n-hypo-EP": "n-HEP",
    "p-EP": "p-EP", "pEP": "p-EP", "p-HEP": "p-HEP", "pHEP": "p-HEP", "p-hypo-EP": "p-HEP",
    "p-normal": "p-normal", "pnormal": "p-normal",
}


class QueryError(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    name: str
    n: Optional[int] = None  # explicit power, e.g. "2-HEP"


def parse_query(text: str):
    """Parse into nested tuples: ('and', a, b), ('or', a, b), ('not', a) or an Atom."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise QueryError(f"unexpected character at position {pos}: {text[pos:pos + 10]!r}")
        if m.group("op"):
            tokens.append({"∧": "&", "∨": "|", "¬": "!"}.get(m.group("op"), m.group("op")))
        else:
            tokens.append(_atom(m.group("atom")))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    it = _Tokens(tokens)
    node = _parse_or(it)
    if it.peek() is not None:
        raise QueryError(f"trailing input at token {it.i}")
    return node


def _atom(word: str) -> Atom:
    if word in _ATOMS:
        return Atom(_ATOMS[word])
    m = re.fullmatch(r"(\d+)-(EP|HEP|hypo-EP)", word)
    if m and int(m.group(1)) >= 1:
        return Atom("n-EP" if m.group(2) == "EP" else "n-HEP", int(m.group(1)))
    raise QueryError(f"unknown class {word!r}")


class _Tokens:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        t = self.peek()
        if t is None:
            raise QueryError("unexpected end of query")
        self.i += 1
        return t


def _parse_or(it):
    node = _parse_and(it)
    while it.peek() == "|":
        it.take()
        node = ("or", node, _parse_and(it))
    return node


def _parse_and(it):
    node = _parse_not(it)
    while it.peek() == "&":
        it.take()
        node = ("and", node, _parse_not(it))
    return node


def _parse_not(it):
    t = it.take()
    if t == "!":
        return ("not", _parse_not(it))
    if t == "(":
        node = _parse_or(it)
        if it.take() != ")":
            raise QueryError("expected ')'")
        return node
    if isinstance(t, Atom):
        return t
    raise QueryError(f"unexpected token {t!r}")


def query_atoms(node) -> set[str]:
    if isinstance(node, Atom):
        return {node.name}
    return set().union(*(query_atoms(c) for c in node[1:]))


@dataclass(frozen=True)
class SeparationQuery:
    must_hold: str
    dims: tuple[int, ...]
    budget: int
    seed: int = 0
    n: int = 1
    entry_bound: int = 3

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if not self.dims or min(self.dims) < 1:
            raise ValueError("dims must be positive")
        parse_query(self.must_hold)

    @property
    def tree(self):
        return parse_query(self.must_hold)


def evaluate(node, op: Operator, p: Optional[Polynomial], n: int, tol: Tolerance) -> bool:
    """Evaluate a query tree on one operator (defining characterizations only)."""
    if isinstance(node, tuple):
        kind = node[0]
        if kind == "not":
            return not evaluate(node[1], op, p, n, tol)
        if kind == "and":
            return evaluate(node[1], op, p, n, tol) and evaluate(node[2], op, p, n, tol)
        return evaluate(node[1], op, p, n, tol) or evaluate(node[2], op, p, n, tol)
    k = node.n or n
    if node.name.startswith("p-") and p is None:
        raise QueryError(f"{node.name} needs a polynomial")
    table: dict[str, Callable[[], bool]] = {
        "EP": lambda: is_EP(op, tol).holds,
        "HEP": lambda: is_hypo_EP(op, tol).holds,
        "SD": lambda: is_SD(op, tol).holds,
        "normal": lambda: is_normal(op, tol).holds,
        "n-EP": lambda: is_n_EP(op, k, tol).holds,
        "n-HEP": lambda: is_n_hypo_EP(op, k, tol).holds,
        "p-EP": lambda: is_p_EP(op, p, tol).holds,
        "p-HEP": lambda: is_p_hypo_EP(op, p, tol, full=False).holds,
        "p-normal": lambda: is_p_normal(op, p, tol).holds,
    }
    return table[node.name]()


@dataclass
class Witness:
    matrix: Matrix
    report: ClassReport
    index: int  # candidate index; negative for injected fixtures
    source: str = "random"


def candidate(query: SeparationQuery, index: int, backend: str = EXACT) -> Matrix:
    rng = candidate_rng(query.seed, index)
    dim = query.dims[index % len(query.dims)]
    r = int(rng.integers(0, dim, endpoint=True))
    spec = GenSpec(dim, r, query.entry_bound, backend, query.seed)
    return random_matrix(spec, rng)


def _scan(args) -> Optional[int]:
    query, p, tol, start, stop, backend = args
    tree = query.tree
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CharacterizationSkipped)
        for i in range(start, stop):
            if evaluate(tree, Operator(candidate(query, i, backend), tol), p, query.n, tol):
                return i
    return None


def search_separation(query: SeparationQuery, p: Polynomial | None = None, tol: Tolerance = DEFAULT_TOL,
                      fixtures: Sequence[Matrix] = (), backend: str = EXACT, workers: int = 1,
                      chunk: int = 256) -> Optional[Witness]:
    """First candidate (fixtures, then seeded random matrices) satisfying the query.

    Fixtures count against the budget.  Random candidates are scanned in
    index order; with several workers, chunks are evaluated in parallel but
    the lowest satisfying index always wins, so the result does not depend
    on the worker count.
    """
    tree = query.tree
    budget = query.budget
    for j, F in enumerate(fixtures[:budget]):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CharacterizationSkipped)
            if evaluate(tree, Operator(F, tol), p, query.n, tol):
                return _verified(query, tree, F, p, tol, -(j + 1), "fixture")
    remaining = budget - min(len(fixtures), budget)
    if remaining <= 0:
        return None
    found = None
    if workers <= 1:
        found = _scan((query, p, tol, 0, remaining, backend))
    else:
        ranges = [(s, min(s + chunk, remaining)) for s in range(0, remaining, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for wave in range(0, len(ranges), workers):
                batch = ranges[wave:wave + workers]
                hits = list(pool.map(_scan, [(query, p, tol, a, b, backend) for a, b in batch]))
                hits = [h for h in hits if h is not None]
                if hits:
                    found = min(hits)
                    break
    if found is None:
        return None
    return _verified(query, tree, candidate(query, found, backend), p, tol, found, "random")


def _verified(query, tree, M, p, tol, index, source) -> Witness:
    # fresh evaluation, independent of the search-time Operator cache
    if not evaluate(tree, Operator(M, tol), p, query.n, tol):
        raise RuntimeError("witness failed re-verification")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CharacterizationSkipped)
        report = classify(M, p, query.n, tol)
    return Witness(M, report, index, source)


def fixture(name: str):
    """Worked examples and canonical small matrices (exact backend)."""
    if name == "example1":
        return Matrix([[1, 0, 2, 3], [0, 2, 0, 0], [0, 0, 0, 3], [0, 0, 0, 0]], EXACT)
    if name == "example2":
        return Matrix([[1, 1], [0, 0]], EXACT)
    if name == "example1_poly":
        return Polynomial([0, 0, -1, 1])
    if name == "example2_poly":
        return Polynomial([2, Gaussian(-1, -4), Gaussian(0, 4), 1])
    if name == "nilpotent2":
        return Matrix([[0, 1], [0, 0]], EXACT)
    raise KeyError(f"unknown fixture {name!r}")


FIXTURE_MATRICES = ("example1", "example2", "nilpotent2")
