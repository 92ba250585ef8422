"""Brute-force ground truth over finite prime fields and for plane partitions.

Point counts of the non-commutative Quot scheme U_{r,n}/GL_n and of its
critical locus (pairwise commuting A, B, C) are obtained by enumerating
framed triples.  The outer matrix runs over conjugacy-class representatives,
weighted by class size: the number of spanning frames is invariant under
simultaneous conjugation, so this sums over all triples exactly.
"""
from __future__ import annotations

import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from math import prod
from pathlib import Path
from typing import Iterator, Optional, Sequence

__all__ = [
    "FreeActionError",
    "FramedTuple",
    "PlanePartition",
    "CountRecord",
    "gl_order",
    "is_prime",
    "is_spanning",
    "count_ncquot_points",
    "count_quot_points",
    "ncquot_count_recursive",
    "plane_partitions",
    "plane_partition_counts",
    "colored_plane_partitions",
    "pin_record",
]

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


class FreeActionError(ArithmeticError):
    """Raw tuple count not divisible by |GL_n(F_q)|."""


def is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(q**0.5) + 1))


def gl_order(n: int, q: int) -> int:
    return prod(q**n - q**i for i in range(n))


# -- linear algebra over F_q ---------------------------------------------------

def _matvec(M: Matrix, v: Vector, q: int) -> Vector:
    return tuple(sum(a * b for a, b in zip(row, v)) % q for row in M)


def _matmul(M: Matrix, N: Matrix, q: int) -> Matrix:
    cols = list(zip(*N))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) % q for col in cols) for row in M)


class _Echelon:
    """Incrementally built row-echelon basis of a subspace of F_q^n."""

    __slots__ = ("q", "rows")

    def __init__(self, q: int):
        self.q = q
        self.rows: list[tuple[int, list[int]]] = []  # (pivot, row with pivot entry 1)

    def reduce(self, v: Sequence[int]) -> list[int]:
        q = self.q
        w = list(v)
        for p, row in self.rows:
            c = w[p]
            if c:
                w = [(a - c * b) % q for a, b in zip(w, row)]
        return w

    def add(self, v: Sequence[int]) -> bool:
        w = self.reduce(v)
        for p, c in enumerate(w):
            if c:
                inv = pow(c, -1, self.q)
                self.rows.append((p, [(x * inv) % self.q for x in w]))
                return True
        return False

    def key(self) -> tuple[Vector, ...]:
        """Canonical reduced row-echelon form."""
        q = self.q
        rows = sorted(self.rows)
        red = [list(r) for _, r in rows]
        for i, (p, _) in enumerate(rows):
            for j in range(len(red)):
                if j != i and red[j][p]:
                    c = red[j][p]
                    red[j] = [(a - c * b) % q for a, b in zip(red[j], red[i])]
        return tuple(tuple(r) for r in red)

    def __len__(self) -> int:
        return len(self.rows)


def _closure(gens: Sequence[Vector], mats: Sequence[Matrix], q: int) -> _Echelon:
    basis = _Echelon(q)
    queue = list(gens)
    while queue:
        v = queue.pop()
        if basis.add(v):
            queue.extend(_matvec(M, v, q) for M in mats)
    return basis


def _nullspace(rows: list[list[int]], ncols: int, q: int) -> list[list[int]]:
    """Basis of {x : rows x = 0} over F_q."""
    m = [r[:] for r in rows]
    pivots = []
    ri = 0
    for c in range(ncols):
        piv = next((i for i in range(ri, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[ri], m[piv] = m[piv], m[ri]
        inv = pow(m[ri][c], -1, q)
        m[ri] = [(x * inv) % q for x in m[ri]]
        for i in range(len(m)):
            if i != ri and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % q for a, b in zip(m[i], m[ri])]
        pivots.append(c)
        ri += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for i, p in enumerate(pivots):
            x[p] = (-m[i][f]) % q
        basis.append(x)
    return basis


def _commutator_equations(A: Matrix, n: int) -> list[list[int]]:
    # (AX - XA)_{ij} = sum_k A_ik X_kj - X_ik A_kj, unknown X_kl at index k*n + l
    eqs = []
    for i in range(n):
        for j in range(n):
            row = [0] * (n * n)
            for k in range(n):
                row[k * n + j] += A[i][k]
                row[i * n + k] -= A[k][j]
            eqs.append(row)
    return eqs


def _span_matrices(basis: list[list[int]], n: int, q: int) -> list[Matrix]:
    out = []
    for coeffs in itertools.product(range(q), repeat=len(basis)):
        flat = [sum(c * b[i] for c, b in zip(coeffs, basis)) % q for i in range(n * n)]
        out.append(tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n)))
    return out


def commutant(mats: Sequence[Matrix], n: int, q: int) -> list[Matrix]:
    """All X with [M, X] = 0 for every M in ``mats``."""
    eqs = []
    for M in mats:
        for row in _commutator_equations(M, n):
            eqs.append([x % q for x in row])
    return _span_matrices(_nullspace(eqs, n * n, q), n, q)


@lru_cache(maxsize=None)
def all_matrices(n: int, q: int) -> tuple[Matrix, ...]:
    return tuple(
        tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
        for flat in itertools.product(range(q), repeat=n * n)
    )


@lru_cache(maxsize=None)
def _projective_points(n: int, q: int) -> tuple[Vector, ...]:
    pts = []
    for v in itertools.product(range(q), repeat=n):
        nz = next((c for c in v if c), 0)
        if nz == 1:
            pts.append(v)
    return tuple(pts)


@lru_cache(maxsize=None)
def _general_linear(n: int, q: int) -> tuple[tuple[Matrix, Matrix], ...]:
    """Pairs (g, g^-1) for every g in GL_n(F_q)."""
    mats = all_matrices(n, q)
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    group = [g for g in mats if _rank(g, q) == n]
    inverse = {}
    lookup = set(group)
    for g in group:
        if g in inverse:
            continue
        for h in group:
            if _matmul(g, h, q) == ident:
                inverse[g] = h
                inverse[h] = g
                break
    assert len(lookup) == gl_order(n, q)
    return tuple((g, inverse[g]) for g in group)


def _rank(M: Matrix, q: int) -> int:
    e = _Echelon(q)
    for row in M:
        e.add(row)
    return len(e)


@lru_cache(maxsize=None)
def conjugacy_classes(n: int, q: int) -> tuple[tuple[Matrix, int], ...]:
    """(representative, class size) for each GL_n-conjugacy class of n x n matrices."""
    group = _general_linear(n, q)
    seen: set[Matrix] = set()
    out = []
    for A in all_matrices(n, q):
        if A in seen:
            continue
        orbit = {_matmul(_matmul(g, A, q), gi, q) for g, gi in group}
        seen |= orbit
        out.append((A, len(orbit)))
    return tuple(out)


# -- framed tuples -------------------------------------------------------------

@dataclass(frozen=True)
class FramedTuple:
    """(A, B, C; v_1..v_r): a framed representation of the 3-loop quiver over F_q."""

    n: int
    q: int
    A: Matrix
    B: Matrix
    C: Matrix
    frames: tuple[Vector, ...] = ()

    def __post_init__(self):
        if not is_prime(self.q):
            raise ValueError("q must be prime")
        red = lambda M: tuple(tuple(x % self.q for x in row) for row in M)
        object.__setattr__(self, "A", red(self.A))
        object.__setattr__(self, "B", red(self.B))
        object.__setattr__(self, "C", red(self.C))
        object.__setattr__(self, "frames", tuple(tuple(x % self.q for x in v) for v in self.frames))
        for M in (self.A, self.B, self.C):
            if len(M) != self.n or any(len(row) != self.n for row in M):
                raise ValueError("matrices must be n x n")
        if any(len(v) != self.n for v in self.frames):
            raise ValueError("frames must have length n")

    def commutes(self) -> bool:
        q = self.q
        A, B, C = self.A, self.B, self.C
        return all(
            _matmul(X, Y, q) == _matmul(Y, X, q) for X, Y in ((A, B), (B, C), (C, A))
        )


def is_spanning(t: FramedTuple) -> bool:
    """True iff the words A^a B^b C^c applied to the frames span F_q^n."""
    return len(_closure(t.frames, (t.A, t.B, t.C), t.q)) == t.n


def _spanning_frame_count(mats: Sequence[Matrix], n: int, q: int, r: int) -> int:
    """Number of r-tuples of vectors generating F_q^n as a module over ``mats``."""
    # closure of a tuple = sum of the closures of its vectors
    groups: dict[tuple, int] = {(): 1}
    bases: dict[tuple, _Echelon] = {(): _Echelon(q)}
    for v in _projective_points(n, q):
        e = _closure([v], mats, q)
        k = e.key()
        groups[k] = groups.get(k, 0) + (q - 1)
        bases.setdefault(k, e)
    full = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    sums: dict[tuple[tuple, tuple], tuple] = {}

    def add(a: tuple, b: tuple) -> tuple:
        if (a, b) not in sums:
            e = _Echelon(q)
            for row in a + b:
                e.add(row)
            sums[(a, b)] = e.key()
        return sums[(a, b)]

    states = {(): 1}
    for _ in range(r):
        nxt: dict[tuple, int] = {}
        for s, c in states.items():
            for k, mult in groups.items():
                t = add(s, k)
                nxt[t] = nxt.get(t, 0) + c * mult
        states = nxt
    return states.get(full, 0)


def _arrange(x: Matrix, y: Matrix, z: Matrix, loop_order: Sequence[int]) -> tuple[Matrix, Matrix, Matrix]:
    out: list = [None, None, None]
    for slot, m in zip(loop_order, (x, y, z)):
        out[slot] = m
    return out[0], out[1], out[2]


def _raw_count_for_rep(args) -> int:
    rep, weight, r, n, q, commuting, loop_order = args
    total = 0
    ys = commutant([rep], n, q) if commuting else all_matrices(n, q)
    for y in ys:
        zs = commutant([rep, y], n, q) if commuting else all_matrices(n, q)
        for z in zs:
            total += _spanning_frame_count(_arrange(rep, y, z, loop_order), n, q, r)
    return weight * total


def _check_args(r: int, n: int, q: int) -> None:
    if r < 1 or n < 0:
        raise ValueError("need r >= 1 and n >= 0")
    if not is_prime(q):
        raise ValueError("q must be prime")


def raw_stable_count(
    r: int, n: int, q: int, *, commuting: bool, threads: int = 1, loop_order: Sequence[int] = (0, 1, 2)
) -> int:
    """|{spanning (A,B,C,v)}|, optionally restricted to pairwise commuting A, B, C."""
    _check_args(r, n, q)
    if sorted(loop_order) != [0, 1, 2]:
        raise ValueError("loop_order must be a permutation of (0, 1, 2)")
    if n == 0:
        return 1
    jobs = [(rep, w, r, n, q, commuting, tuple(loop_order)) for rep, w in conjugacy_classes(n, q)]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return sum(pool.map(_raw_count_for_rep, jobs))
    return sum(map(_raw_count_for_rep, jobs))


def _orbit_count(raw: int, n: int, q: int) -> int:
    g = gl_order(n, q)
    if raw % g:
        raise FreeActionError(f"free-action violation: {raw} not divisible by {g}")
    return raw // g


def count_ncquot_points(r: int, n: int, q: int, threads: int = 1, loop_order: Sequence[int] = (0, 1, 2)) -> int:
    """|Quot^n_r(F_q)| = |U_{r,n}(F_q)| / |GL_n(F_q)|."""
    raw = raw_stable_count(r, n, q, commuting=False, threads=threads, loop_order=loop_order)
    return _orbit_count(raw, n, q)


def count_quot_points(r: int, n: int, q: int, threads: int = 1, loop_order: Sequence[int] = (0, 1, 2)) -> int:
    """|Quot_{A^3}(O^r, n)(F_q)| via the critical locus of Tr A[B,C].

    The gradient of Tr A[B,C] is ([B,C], [C,A], [A,B]) with no frame
    component, so the critical locus is the commuting locus.
    """
    raw = raw_stable_count(r, n, q, commuting=True, threads=threads, loop_order=loop_order)
    return _orbit_count(raw, n, q)


def _gaussian_binomial(n: int, k: int, q: int) -> int:
    num = prod(q ** (n - i) - 1 for i in range(k))
    den = prod(q ** (i + 1) - 1 for i in range(k))
    return num // den


def ncquot_count_recursive(r: int, n: int, q: int) -> int:
    """|Quot^n_r(F_q)| without enumeration.

    Every tuple has a unique closure W of the frames; stratifying the whole
    space q^(3n^2+rn) by dim W gives
    q^(3n^2+rn) = sum_d [n, d]_q |U_{r,d}| q^(3n(n-d)).
    """
    _check_args(r, n, q)
    stable = []
    for m in range(n + 1):
        rest = sum(_gaussian_binomial(m, d, q) * stable[d] * q ** (3 * m * (m - d)) for d in range(m))
        stable.append(q ** (3 * m * m + r * m) - rest)
    return _orbit_count(stable[n], n, q)


@dataclass
class CountRecord:
    r: int
    n: int
    q: int
    count_quot: Optional[int] = None
    count_ncquot: Optional[int] = None

    def __post_init__(self):
        if self.count_quot is not None and self.count_ncquot is not None:
            if self.count_quot > self.count_ncquot:
                raise ValueError("count_quot exceeds count_ncquot")

    def to_json(self) -> dict:
        return asdict(self)


def pin_record(record: CountRecord, path: Path | str) -> list[dict]:
    """Append ``record`` to the regression file; refuse a conflicting value."""
    path = Path(path)
    entries: list[dict] = json.loads(path.read_text()) if path.exists() else []
    new = record.to_json()
    for e in entries:
        if (e["r"], e["n"], e["q"]) != (new["r"], new["n"], new["q"]):
            continue
        for key in ("count_quot", "count_ncquot"):
            if e.get(key) is not None and new[key] is not None and e[key] != new[key]:
                raise ValueError(f"regression mismatch for {key}: pinned {e[key]}, got {new[key]}")
    if new not in entries:
        entries.append(new)
    path.write_text(json.dumps(entries, sort_keys=True, indent=1) + "\n")
    return entries


# -- plane partitions ----------------------------------------------------------

@dataclass(frozen=True)
class PlanePartition:
    """Stacks of boxes over (i, j), weakly decreasing along rows and columns."""

    heights: dict = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), h in self.heights.items():
            if h <= 0:
                raise ValueError("heights must be positive")
            if i > 0 and self.heights.get((i - 1, j), 0) < h:
                raise ValueError(f"not decreasing in i at {(i, j)}")
            if j > 0 and self.heights.get((i, j - 1), 0) < h:
                raise ValueError(f"not decreasing in j at {(i, j)}")

    def __hash__(self):
        return hash(frozenset(self.heights.items()))

    @property
    def size(self) -> int:
        return sum(self.heights.values())

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "PlanePartition":
        return cls({(i, j): h for i, row in enumerate(rows) for j, h in enumerate(row)})


def _rows_below(total: int, bound: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Nonempty weakly decreasing rows r with r[j] <= bound[j] and sum(r) <= total."""

    def rec(j: int, cap: int, left: int, acc: list[int]):
        if acc:
            yield tuple(acc)
        if j >= len(bound):
            return
        for h in range(min(cap, bound[j], left), 0, -1):
            acc.append(h)
            yield from rec(j + 1, h, left - h, acc)
            acc.pop()

    yield from rec(0, total, total, [])


def plane_partitions(n: int) -> Iterator[PlanePartition]:
    """Generate every plane partition of size n."""

    def rec(left: int, prev: Sequence[int], rows: list):
        if left == 0:
            yield PlanePartition.from_rows(rows)
            return
        for row in _rows_below(left, prev):
            rows.append(row)
            yield from rec(left - sum(row), row, rows)
            rows.pop()

    yield from rec(n, [n] * n, [])


def plane_partition_counts(N: int) -> list[int]:
    return [sum(1 for _ in plane_partitions(n)) for n in range(N + 1)]


def colored_plane_partitions(r: int, n: int) -> int:
    """Number of r-tuples of plane partitions of total size n."""
    if r < 1 or n < 0:
        raise ValueError("need r >= 1 and n >= 0")
    counts = plane_partition_counts(n)
    # tuples (pi_1..pi_r) by sizes: sum over compositions of n into r parts
    ways = [1] + [0] * n
    for _ in range(r):
        ways = [sum(ways[k] * counts[m - k] for k in range(m + 1)) for m in range(n + 1)]
    return ways[n]


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("QUOTDT_THREADS", "1")))
    except ValueError:
        return 1
