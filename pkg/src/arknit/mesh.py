"""Additive functions on translation quivers Z[T] for Dynkin trees T.

Vertices of Z[T] are pairs (t, j).  With T oriented as below, the mesh
ending at (t, j+1) starts at (t, j) and its middle consists of (t', j) for
every arrow t -> t' and (t'', j+1) for every arrow t'' -> t.  Additivity
then reads

    x(t, j+1) = sum_{t -> t'} x(t', j) + sum_{t'' -> t} x(t'', j+1) - x(t, j)

and a column is computed in a topological order of the orientation.

Orientations: A_n is 1 -> 2 -> ... -> n; D_n is 1 -> ... -> n-2 with
n-2 -> n-1 and n-2 -> n; the E series is 1 -> 2 -> 3 -> 5 -> 6 -> 7 -> 8
with the branch 3 -> 4, truncated for E6 and E7.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


class CertificateNotFound(RuntimeError):
    pass


@dataclass(frozen=True)
class DynkinTree:
    kind: str  # "A", "D" or "E"
    n: int
    arrows: tuple[tuple[int, int], ...]
    notes: tuple[str, ...] = ()

    @property
    def name(self) -> str:
        return f"{self.kind}{self.n}"

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def order(self) -> list[int]:
        """Vertices in a topological order of the orientation."""
        indeg = {v: 0 for v in self.vertices}
        for _, t in self.arrows:
            indeg[t] += 1
        ready = sorted(v for v, d in indeg.items() if d == 0)
        out = []
        while ready:
            v = ready.pop(0)
            out.append(v)
            for s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        ready.append(t)
                        ready.sort()
        return out


def dynkin_tree(name: str) -> DynkinTree:
    m = re.fullmatch(r"\s*([ADE])\s*(\d+)\s*", name.upper())
    if not m:
        raise ValueError(f"unknown tree {name!r}; expected A<n>, D<n>, E6, E7 or E8")
    kind, n = m.group(1), int(m.group(2))
    if kind == "A":
        if n < 1:
            raise ValueError("A_n needs n >= 1")
        return DynkinTree("A", n, tuple((i, i + 1) for i in range(1, n)))
    if kind == "D":
        if n < 3:
            raise ValueError("D_n needs n >= 3")
        if n == 3:
            return DynkinTree("D", 3, ((1, 2), (2, 3)), ("D3 uses the adjacency of A3",))
        arrows = [(i, i + 1) for i in range(1, n - 2)] + [(n - 2, n - 1), (n - 2, n)]
        return DynkinTree("D", n, tuple(arrows))
    if n not in (6, 7, 8):
        raise ValueError("the E series has n in {6, 7, 8}")
    chain = [v for v in (1, 2, 3, 5, 6, 7, 8) if v <= n]
    arrows = list(zip(chain, chain[1:])) + [(3, 4)]
    return DynkinTree("E", n, tuple(arrows))


@dataclass
class MeshWindow:
    tree: DynkinTree
    columns: list[np.ndarray]  # columns[j][t-1] is a scalar (integer mode) or a coefficient vector
    symbolic: bool

    def value(self, t: int, j: int):
        return self.columns[j][t - 1]

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        lines = []
        for j, col in enumerate(self.columns):
            cells = [format_value(v, self.symbolic) for v in col]
            lines.append(f"j+{j}: " + " | ".join(f"x{t}={c}" for t, c in zip(self.tree.vertices, cells)))
        return "\n".join(lines)


def format_value(v, symbolic: bool) -> str:
    if not symbolic:
        return str(int(v))
    terms = []
    for k, c in enumerate(v):
        c = int(c)
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        terms.append((sign, f"{mag}x{k + 1}"))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def propagate(tree: DynkinTree, initial=None, steps: int = 1, mode: str = "symbolic") -> MeshWindow:
    """Columns 0..steps of the additive function with the given column 0.

    In symbolic mode column 0 is the vector of symbols x_(t,0) and every value
    is an integer coefficient vector over those symbols.
    """
    n = tree.n
    symbolic = mode == "symbolic"
    if symbolic:
        first = np.eye(n, dtype=np.int64) if initial is None else np.asarray(initial, dtype=np.int64)
    else:
        if initial is None or len(initial) != n:
            raise ValueError(f"integer mode needs an initial row of length {n}")
        first = np.asarray(initial, dtype=np.int64)
    columns = [first]
    if not tree.arrows:
        return MeshWindow(tree, columns, symbolic)
    out_nb = {t: [b for a, b in tree.arrows if a == t] for t in tree.vertices}
    in_nb = {t: [a for a, b in tree.arrows if b == t] for t in tree.vertices}
    order = tree.order()
    for _ in range(steps):
        prev = columns[-1]
        cur = np.zeros_like(prev)
        for t in order:
            val = -prev[t - 1]
            for u in out_nb[t]:
                val = val + prev[u - 1]
            for u in in_nb[t]:
                val = val + cur[u - 1]
            cur[t - 1] = val
        columns.append(cur)
    return MeshWindow(tree, columns, symbolic)


@dataclass(frozen=True)
class Identity:
    """x_(vertex, j+offset) equals sum of coeff * x_(t, j)."""

    vertex: int
    offset: int
    rhs: tuple[tuple[int, int], ...]  # (t, coefficient)
    cited: bool = True

    def text(self) -> str:
        parts = []
        for t, c in self.rhs:
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{abs(c)}"
            parts.append((sign, f"{mag}x_{{{t},j}}"))
        rhs = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            rhs += f" {sign} {body}"
        return f"x_{{{self.vertex},j+{self.offset}}} = {rhs}"

    def expected(self, n: int) -> np.ndarray:
        v = np.zeros(n, dtype=np.int64)
        for t, c in self.rhs:
            v[t - 1] += c
        return v


CITED_IDENTITIES: dict[str, list[Identity]] = {
    "E6": [
        Identity(6, 1, ((4, 1), (1, -1))),
        Identity(6, 4, ((1, -1),)),
    ],
    "E7": [
        Identity(6, 1, ((7, 1), (4, 1), (1, -1))),
        Identity(7, 1, ((4, 1), (1, -1))),
        Identity(3, 20, ((3, -1), (4, 1))),
    ],
    "E8": [
        Identity(8, 1, ((4, 1), (1, -1))),
        Identity(1, 15, ((1, -1),)),
    ],
}

# relations that do hold in this orientation, reported next to the cited ones
SUPPLEMENTARY_IDENTITIES: dict[str, list[Identity]] = {
    "E7": [
        Identity(3, 9, ((3, -1),), cited=False),
        Identity(4, 8, ((3, -1), (4, 1)), cited=False),
    ],
}


def _tree_identities(tree: DynkinTree) -> list[Identity]:
    if tree.kind == "E":
        return CITED_IDENTITIES[tree.name] + SUPPLEMENTARY_IDENTITIES.get(tree.name, [])
    if (tree.kind == "A" and tree.n >= 2) or (tree.kind == "D" and tree.n == 3):
        return [Identity(tree.n, 1, ((1, -1),))]
    return []


@dataclass
class IdentityResult:
    identity: Identity
    holds: bool
    computed: str

    @property
    def text(self) -> str:
        return self.identity.text()


@dataclass
class IdentityReport:
    tree: DynkinTree
    results: list[IdentityResult] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def cited_pass(self) -> bool:
        return all(r.holds for r in self.results if r.identity.cited)


def check_identities(tree: DynkinTree) -> IdentityReport:
    ids = _tree_identities(tree)
    report = IdentityReport(tree, notes=list(tree.notes))
    if tree.kind == "D":
        report.results.extend(_fork_results(tree))
    if not ids:
        return report
    steps = max(i.offset for i in ids)
    win = propagate(tree, steps=steps)
    for ident in ids:
        got = win.value(ident.vertex, ident.offset)
        holds = bool(np.array_equal(got, ident.expected(tree.n)))
        report.results.append(IdentityResult(ident, holds, format_value(got, True)))
    return report


def _fork_results(tree: DynkinTree) -> list[IdentityResult]:
    """The two fork vertices of D_n carry x_{n-1,j} - x_{1,j} and x_{n,j} - x_{1,j} one column later."""
    if tree.n < 4:
        return []
    n = tree.n
    win = propagate(tree, steps=1)
    got = {tuple(win.value(n - 1, 1)), tuple(win.value(n, 1))}
    a = Identity(n - 1, 1, ((n - 1, 1), (1, -1)))
    b = Identity(n, 1, ((n, 1), (1, -1)))
    want = {tuple(a.expected(n)), tuple(b.expected(n))}
    holds = got == want
    return [
        IdentityResult(a, holds, format_value(win.value(n, 1), True) + " (fork vertices as a set)"),
        IdentityResult(b, holds, format_value(win.value(n - 1, 1), True) + " (fork vertices as a set)"),
    ]


def positivity_certificate(tree: DynkinTree, initial: Sequence[int], budget: int = 200) -> tuple[int, int, int]:
    """Earliest (column, vertex, value) with a value <= 0 under integer propagation."""
    if any(int(v) <= 0 for v in initial):
        raise ValueError("initial values must be positive")
    if not tree.arrows:
        raise CertificateNotFound("a single vertex carries no meshes")
    win = propagate(tree, list(initial), steps=budget, mode="integer")
    for j, col in enumerate(win.columns):
        for t in tree.order():
            if col[t - 1] <= 0:
                return j, t, int(col[t - 1])
    raise CertificateNotFound(f"no non-positive value within {budget} columns")
