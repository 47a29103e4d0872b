"""Bounded complexes of projectives and of arbitrary modules.

A ``ProjComplex`` stores, per degree n, a tuple of vertex labels (the summands
P_t of X^n) and a block differential ``d^n`` of shape
``(len X^(n+1), len X^n, dim A)``: entry ``[t, s]`` is the algebra element
q in e_t A e_s of the map ``x -> q x`` from the s-th to the t-th summand.
Composition of block maps is block matrix multiplication with the algebra
product (see ``bmul``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import linalg as la
from .algebra import (
    AModule,
    Algebra,
    ResolutionBoundExceeded,
    injective_sum,
    nakayama_map,
    projective_map,
    projective_sum,
    zero_module,
)


class NotAComplex(ValueError):
    pass


class NotAChainMap(ValueError):
    pass


def bmul(A: Algebra, f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Block composition f o g of block maps between sums of projectives."""
    if f.shape[1] == 0 or g.shape[1] == 0 or f.shape[0] == 0:
        return np.zeros((f.shape[0], g.shape[1], A.dim), dtype=np.int64)
    return np.einsum("uta,tsb,abk->usk", f, g, A.mult, optimize=True) % A.p


def zero_block(A: Algebra, rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols, A.dim), dtype=np.int64)


def identity_block(A: Algebra, labels: Sequence[int]) -> np.ndarray:
    out = zero_block(A, len(labels), len(labels))
    for k, t in enumerate(labels):
        out[k, k, A.idempotents[t]] = 1
    return out


def slice_mask(A: Algebra, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    """Boolean mask of admissible coefficients: entry [t, s] must lie in e_t A e_s."""
    mask = np.zeros((len(rows), len(cols), A.dim), dtype=bool)
    for i, t in enumerate(rows):
        for j, s in enumerate(cols):
            mask[i, j, A.slice(t, s)] = True
    return mask


def _check_block(A: Algebra, block: np.ndarray, rows, cols, what: str) -> np.ndarray:
    block = np.asarray(block, dtype=np.int64) % A.p
    if block.shape != (len(rows), len(cols), A.dim):
        raise ValueError(f"{what} has shape {block.shape}, expected {(len(rows), len(cols), A.dim)}")
    if (block[~slice_mask(A, rows, cols)] != 0).any():
        raise ValueError(f"{what} has an entry outside its idempotent slice")
    return block


@dataclass(frozen=True, eq=False)
class ProjComplex:
    algebra: Algebra
    terms: dict[int, tuple[int, ...]]
    diffs: dict[int, np.ndarray] = field(default_factory=dict)
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        A = self.algebra
        terms = {int(n): tuple(int(t) for t in labs) for n, labs in self.terms.items() if len(labs)}
        for labs in terms.values():
            for t in labs:
                if not 0 <= t < A.n_vertices:
                    raise ValueError(f"projective label {t} out of range")
        terms = dict(sorted(terms.items()))
        diffs = {}
        for n, src in terms.items():
            tgt = terms.get(n + 1)
            if tgt is None:
                continue
            d = self.diffs.get(n)
            if d is None:
                d = zero_block(A, len(tgt), len(src))
            elif self.check:
                d = _check_block(A, d, tgt, src, f"differential d^{n}")
            else:
                d = np.asarray(d, dtype=np.int64) % A.p
            diffs[n] = d
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "diffs", diffs)
        if self.check:
            for n in diffs:
                if n + 1 in diffs and bmul(A, diffs[n + 1], diffs[n]).any():
                    raise NotAComplex(f"d^{n + 1} o d^{n} is not zero")

    def labels(self, n: int) -> tuple[int, ...]:
        return self.terms.get(n, ())

    def d(self, n: int) -> np.ndarray:
        d = self.diffs.get(n)
        if d is None:
            return zero_block(self.algebra, len(self.labels(n + 1)), len(self.labels(n)))
        return d

    @property
    def support(self) -> Optional[tuple[int, int]]:
        if not self.terms:
            return None
        keys = list(self.terms)
        return keys[0], keys[-1]

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def l(self) -> int:
        return sum(len(v) for v in self.terms.values())

    @property
    def l_c(self) -> int:
        A = self.algebra
        sizes = [int((A.starts == t).sum()) for t in range(A.n_vertices)]
        return sum(sizes[t] for labs in self.terms.values() for t in labs)

    def label_multisets(self) -> dict[int, tuple[int, ...]]:
        return {n: tuple(sorted(labs)) for n, labs in self.terms.items()}

    def key(self) -> tuple:
        return (
            id(self.algebra),
            tuple(self.terms.items()),
            tuple((n, d.tobytes()) for n, d in self.diffs.items()),
        )

    def describe(self) -> str:
        A = self.algebra
        names = A.presentation.vertices
        parts = []
        for n, labs in self.terms.items():
            parts.append(f"{n}:[" + " ".join("P" + names[t] for t in labs) + "]")
        return " ".join(parts) if parts else "0"


def zero_complex(A: Algebra) -> ProjComplex:
    return ProjComplex(A, {})


def stalk(A: Algebra, labels: Sequence[int] | int, degree: int = 0) -> ProjComplex:
    if isinstance(labels, (int, np.integer)):
        labels = (int(labels),)
    return ProjComplex(A, {degree: tuple(labels)})


def shift(X: ProjComplex, n: int) -> ProjComplex:
    """X[n]: degree i holds X^(i+n), differential (-1)^n d^(i+n)."""
    if n == 0:
        return X
    sign = -1 if n % 2 else 1
    return ProjComplex(
        X.algebra,
        {i - n: labs for i, labs in X.terms.items()},
        {i - n: (sign * d) % X.algebra.p for i, d in X.diffs.items()},
        check=False,
    )


def truncate(X: ProjComplex, mode: str, n: int) -> ProjComplex:
    """Brutal truncation: keep degrees <= n (mode "le") or >= n (mode "ge")."""
    if mode in ("le", "<="):
        keep = [i for i in X.terms if i <= n]
    elif mode in ("ge", ">="):
        keep = [i for i in X.terms if i >= n]
    else:
        raise ValueError(f"unknown truncation mode {mode!r}")
    return ProjComplex(
        X.algebra,
        {i: X.terms[i] for i in keep},
        {i: X.diffs[i] for i in keep if i in X.diffs and i + 1 in keep},
        check=False,
    )


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: ProjComplex
    target: ProjComplex
    comps: dict[int, np.ndarray] = field(default_factory=dict)
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        A = self.source.algebra
        comps = {}
        for n, src in self.source.terms.items():
            tgt = self.target.labels(n)
            if not tgt:
                continue
            f = self.comps.get(n)
            if f is None:
                f = zero_block(A, len(tgt), len(src))
            elif self.check:
                f = _check_block(A, f, tgt, src, f"component f^{n}")
            else:
                f = np.asarray(f, dtype=np.int64) % A.p
            comps[n] = f
        object.__setattr__(self, "comps", comps)
        if self.check and not self.commutes():
            raise NotAChainMap("f does not commute with the differentials")

    @property
    def algebra(self) -> Algebra:
        return self.source.algebra

    def f(self, n: int) -> np.ndarray:
        c = self.comps.get(n)
        if c is None:
            return zero_block(self.algebra, len(self.target.labels(n)), len(self.source.labels(n)))
        return c

    def commutes(self) -> bool:
        A = self.algebra
        degrees = set(self.source.terms) | {n - 1 for n in self.source.terms}
        for n in degrees:
            lhs = bmul(A, self.f(n + 1), self.source.d(n))
            rhs = bmul(A, self.target.d(n), self.f(n))
            if ((lhs - rhs) % A.p).any():
                return False
        return True

    def is_zero(self) -> bool:
        return not any(c.any() for c in self.comps.values())

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        A = self.algebra
        comps = {n: bmul(A, self.f(n), other.f(n)) for n in other.source.terms}
        return ChainMap(other.source, self.target, comps, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        A = self.algebra
        degrees = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target, {n: (self.f(n) + other.f(n)) % A.p for n in degrees}, check=False)

    def scale(self, c: int) -> "ChainMap":
        A = self.algebra
        return ChainMap(self.source, self.target, {n: (c * f) % A.p for n, f in self.comps.items()}, check=False)

    def shifted(self, n: int) -> "ChainMap":
        """f[n] between X[n] and Y[n]: component i is f^(i+n) (no sign)."""
        return ChainMap(shift(self.source, n), shift(self.target, n),
                        {i - n: c for i, c in self.comps.items()}, check=False)


def identity_map(X: ProjComplex) -> ChainMap:
    return ChainMap(X, X, {n: identity_block(X.algebra, labs) for n, labs in X.terms.items()}, check=False)


def zero_map(X: ProjComplex, Y: ProjComplex) -> ChainMap:
    return ChainMap(X, Y, {}, check=False)


def _block_diag(A: Algebra, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = zero_block(A, a.shape[0] + b.shape[0], a.shape[1] + b.shape[1])
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


@dataclass(frozen=True, eq=False)
class SumData:
    total: ProjComplex
    inclusions: tuple[ChainMap, ...]
    projections: tuple[ChainMap, ...]


def direct_sum(parts: Sequence[ProjComplex]) -> SumData:
    A = parts[0].algebra
    degrees = sorted(set().union(*(X.terms for X in parts)))
    terms = {n: tuple(t for X in parts for t in X.labels(n)) for n in degrees}
    diffs = {}
    for n in degrees:
        d = zero_block(A, 0, 0)
        for X in parts:
            d = _block_diag(A, d, X.d(n))
        diffs[n] = d
    total = ProjComplex(A, terms, diffs, check=False)
    incs, projs = [], []
    offsets = {n: 0 for n in degrees}
    for X in parts:
        inc, prj = {}, {}
        for n in degrees:
            k = len(X.labels(n))
            e = zero_block(A, len(terms[n]), k)
            o = offsets[n]
            e[o: o + k] = identity_block(A, X.labels(n))
            inc[n] = e
            prj[n] = np.transpose(e, (1, 0, 2)).copy()
            offsets[n] += k
        incs.append(ChainMap(X, total, inc, check=False))
        projs.append(ChainMap(total, X, prj, check=False))
    return SumData(total, tuple(incs), tuple(projs))


@dataclass(frozen=True, eq=False)
class ConeData:
    cone: ProjComplex
    inclusion: ChainMap  # Y -> cone(f)
    projection: ChainMap  # cone(f) -> X[1]


def cone(f: ChainMap) -> ConeData:
    """cone(f)^i = X^(i+1) + Y^i with d = [[-d_X, 0], [f, d_Y]]."""
    A = f.algebra
    X, Y = f.source, f.target
    degrees = sorted({n - 1 for n in X.terms} | set(Y.terms))
    terms = {n: X.labels(n + 1) + Y.labels(n) for n in degrees}
    diffs = {}
    for n in degrees:
        xa, xb = len(X.labels(n + 1)), len(X.labels(n + 2))
        ya, yb = len(Y.labels(n)), len(Y.labels(n + 1))
        d = zero_block(A, xb + yb, xa + ya)
        d[:xb, :xa] = (-X.d(n + 1)) % A.p
        d[xb:, :xa] = f.f(n + 1)
        d[xb:, xa:] = Y.d(n)
        diffs[n] = d
    C = ProjComplex(A, terms, diffs, check=False)
    X1 = shift(X, 1)
    inc, prj = {}, {}
    for n in degrees:
        xa, ya = len(X.labels(n + 1)), len(Y.labels(n))
        e = zero_block(A, xa + ya, ya)
        e[xa:] = identity_block(A, Y.labels(n))
        inc[n] = e
        q = zero_block(A, xa, xa + ya)
        q[:, :xa] = identity_block(A, X.labels(n + 1))
        prj[n] = q
    return ConeData(C, ChainMap(Y, C, inc, check=False), ChainMap(C, X1, prj, check=False))


def is_minimal(X: ProjComplex) -> bool:
    """All differential entries lie in the radical."""
    return _find_unit(X) is None


def _find_unit(X: ProjComplex):
    A = X.algebra
    for n, d in X.diffs.items():
        src, tgt = X.labels(n), X.labels(n + 1)
        for t, lt in enumerate(tgt):
            for s, ls in enumerate(src):
                if lt == ls and d[t, s, A.idempotents[lt]] % A.p:
                    return n, t, s
    return None


def slice_inverse(A: Algebra, u: np.ndarray, i: int) -> np.ndarray:
    """Inverse of a unit u of the local ring e_i A e_i."""
    idx = A.slice(i, i)
    left = np.einsum("a,abk->kb", u, A.mult)[np.ix_(idx, idx)]
    rhs = np.zeros(len(idx), dtype=np.int64)
    rhs[list(idx).index(A.idempotents[i])] = 1
    x = la.solve(left, rhs, A.p)
    if x is None:
        raise la.SingularMatrixError("element is not a unit")
    out = np.zeros(A.dim, dtype=np.int64)
    out[idx] = x
    return out


@dataclass(frozen=True, eq=False)
class StripResult:
    minimal: ProjComplex
    stripped: tuple[tuple[int, int], ...]  # (label, degree) of each P -> P summand
    projection: ChainMap  # X -> minimal
    inclusion: ChainMap  # minimal -> X

    def __iter__(self):
        return iter((self.minimal, self.stripped))


def _strip_once(X: ProjComplex, n: int, t: int, s: int):
    A = X.algebra
    p = A.p
    d = X.d(n)
    label = X.labels(n)[s]
    uinv = slice_inverse(A, d[t, s], label)
    rows = [r for r in range(d.shape[0]) if r != t]
    cols = [c for c in range(d.shape[1]) if c != s]
    b = d[t:t + 1, cols]
    c = d[rows, s:s + 1]
    uinv_b = bmul(A, uinv.reshape(1, 1, -1), b)
    terms = dict(X.terms)
    terms[n] = tuple(X.labels(n)[k] for k in cols)
    terms[n + 1] = tuple(X.labels(n + 1)[k] for k in rows)
    diffs = dict(X.diffs)
    diffs[n] = (d[rows][:, cols] - bmul(A, c, uinv_b)) % p
    if n - 1 in diffs:
        diffs[n - 1] = diffs[n - 1][[k for k in range(diffs[n - 1].shape[0]) if k != s]]
    if n + 1 in diffs:
        diffs[n + 1] = diffs[n + 1][:, rows]
    Y = ProjComplex(A, terms, diffs, check=False)

    proj, inc = {}, {}
    for m, labs in X.terms.items():
        if m in (n, n + 1):
            continue
        proj[m] = inc[m] = identity_block(A, labs)
    # degree n: drop s / insert -u^-1 b
    pn = identity_block(A, X.labels(n))[cols]
    proj[n] = pn
    inn = zero_block(A, len(X.labels(n)), len(cols))
    inn[cols] = identity_block(A, terms[n])
    inn[s] = (-uinv_b[0]) % p
    inc[n] = inn
    # degree n+1: rows [-c u^-1, 1] / plain inclusion
    pn1 = identity_block(A, X.labels(n + 1))[rows]
    pn1[:, t] = (-bmul(A, c, uinv.reshape(1, 1, -1))[:, 0]) % p
    proj[n + 1] = pn1
    in1 = zero_block(A, len(X.labels(n + 1)), len(rows))
    in1[rows] = identity_block(A, terms[n + 1])
    inc[n + 1] = in1
    return Y, (label, n), ChainMap(X, Y, proj, check=False), ChainMap(Y, X, inc, check=False)


def strip_contractibles(X: ProjComplex) -> StripResult:
    """Homotopically minimal X_min with X = X_min + contractibles in the category of complexes."""
    cur = X
    stripped = []
    proj = identity_map(X)
    inc = identity_map(X)
    while True:
        hit = _find_unit(cur)
        if hit is None:
            break
        cur, rec, pr, ic = _strip_once(cur, *hit)
        stripped.append(rec)
        proj = pr.compose(proj)
        inc = inc.compose(ic)
    return StripResult(cur, tuple(stripped), proj, inc)


# ---------------------------------------------------------------- module complexes


@dataclass(frozen=True, eq=False)
class ModComplex:
    """Bounded complex of modules; ``diffs[n]`` holds per-vertex matrices C^n_v -> C^(n+1)_v."""

    algebra: Algebra
    terms: dict[int, AModule]
    diffs: dict[int, tuple[np.ndarray, ...]] = field(default_factory=dict)

    def __post_init__(self):
        A = self.algebra
        terms = {int(n): M for n, M in sorted(self.terms.items()) if M.total_dim}
        object.__setattr__(self, "terms", terms)
        diffs = {}
        for n in terms:
            if n + 1 in terms and n in self.diffs:
                diffs[n] = tuple(np.asarray(m, dtype=np.int64) % A.p for m in self.diffs[n])
        object.__setattr__(self, "diffs", diffs)

    @classmethod
    def stalk(cls, M: AModule, degree: int = 0) -> "ModComplex":
        return cls(M.algebra, {degree: M})

    def module(self, n: int) -> AModule:
        return self.terms.get(n) or zero_module(self.algebra)

    def d(self, n: int, v: int) -> np.ndarray:
        if n in self.diffs:
            return self.diffs[n][v]
        return np.zeros((self.module(n + 1).dims[v], self.module(n).dims[v]), dtype=np.int64)

    @property
    def support(self) -> Optional[tuple[int, int]]:
        if not self.terms:
            return None
        keys = list(self.terms)
        return keys[0], keys[-1]

    def validate(self) -> None:
        A = self.algebra
        for n in self.terms:
            M, N = self.module(n), self.module(n + 1)
            for k in range(A.n_arrows):
                v, w = A.arrow_src[k], A.arrow_tgt[k]
                if ((self.d(n, w) @ M.arrow_maps[k] - N.arrow_maps[k] @ self.d(n, v)) % A.p).any():
                    raise NotAComplex(f"d^{n} is not a module map")
            for v in range(A.n_vertices):
                if ((self.d(n + 1, v) @ self.d(n, v)) % A.p).any():
                    raise NotAComplex(f"d^{n + 1} o d^{n} is not zero")

    def shift(self, n: int) -> "ModComplex":
        sign = -1 if n % 2 else 1
        return ModComplex(
            self.algebra,
            {i - n: M for i, M in self.terms.items()},
            {i - n: tuple((sign * m) % self.algebra.p for m in ms) for i, ms in self.diffs.items()},
        )

    def homology_dims(self, n: int) -> tuple[int, ...]:
        A = self.algebra
        out = []
        for v in range(A.n_vertices):
            dim = self.module(n).dims[v]
            z = dim - la.rank(self.d(n, v), A.p) if dim else 0
            b = la.rank(self.d(n - 1, v), A.p) if dim else 0
            out.append(z - b)
        return tuple(out)

    def dual(self) -> "ModComplex":
        """Vector-space dual over the opposite algebra: degree n holds D(C^(-n))."""
        op = self.algebra.opposite
        terms = {-n: AModule(op, M.dims, tuple(m.T.copy() for m in M.arrow_maps)) for n, M in self.terms.items()}
        diffs = {-n - 1: tuple(m.T.copy() for m in ms) for n, ms in self.diffs.items()}
        return ModComplex(op, terms, diffs)


def realize(X: ProjComplex) -> ModComplex:
    A = X.algebra
    terms = {n: projective_sum(A, labs) for n, labs in X.terms.items()}
    diffs = {
        n: tuple(projective_map(A, d, X.labels(n), X.labels(n + 1), v) for v in range(A.n_vertices))
        for n, d in X.diffs.items()
    }
    return ModComplex(A, terms, diffs)


def realize_map(f: ChainMap) -> dict[int, tuple[np.ndarray, ...]]:
    A = f.algebra
    return {
        n: tuple(projective_map(A, c, f.source.labels(n), f.target.labels(n), v) for v in range(A.n_vertices))
        for n, c in f.comps.items()
    }


def nu_complex(X: ProjComplex) -> ModComplex:
    """Degreewise Nakayama functor: a complex of injective modules."""
    A = X.algebra
    terms = {n: injective_sum(A, labs) for n, labs in X.terms.items()}
    diffs = {
        n: tuple(nakayama_map(A, d, X.labels(n), X.labels(n + 1), v) for v in range(A.n_vertices))
        for n, d in X.diffs.items()
    }
    return ModComplex(A, terms, diffs)


def dual_complex(X: ProjComplex) -> ProjComplex:
    """Hom_A(X, A) as a complex of projectives over the opposite algebra."""
    A = X.algebra
    op = A.opposite
    terms = {-n: labs for n, labs in X.terms.items()}
    diffs = {}
    for n, d in X.diffs.items():
        # d^n : X^n -> X^(n+1) dualizes to degree -n-1 -> -n
        diffs[-n - 1] = np.einsum("ka,tsa->stk", A.op_matrix, d) % A.p
    return ProjComplex(op, terms, diffs, check=False)


def _generators_mod(A: Algebra, Zb: list[np.ndarray], arrows: list[np.ndarray], W: list[np.ndarray]):
    """Per vertex, columns of Zb[v] spanning Z_v modulo rad(Z)_v + W_v."""
    p = A.p
    gens = []
    for i in range(A.n_vertices):
        dim = Zb[i].shape[0]
        if dim == 0 or Zb[i].shape[1] == 0:
            gens.append([])
            continue
        parts = [W[i]]
        for k in range(A.n_arrows):
            if A.arrow_tgt[k] == i:
                parts.append((arrows[k] @ Zb[A.arrow_src[k]]) % p)
        span = np.hstack(parts)
        r = la.rank(span, p)
        chosen = []
        for c in range(Zb[i].shape[1]):
            cand = np.hstack([span, Zb[i][:, c: c + 1]])
            rc = la.rank(cand, p)
            if rc > r:
                span, r = cand, rc
                chosen.append(Zb[i][:, c])
        gens.append(chosen)
    return gens


@dataclass(frozen=True, eq=False)
class Resolution:
    complex: ProjComplex  # minimal
    comparison: dict[int, tuple[np.ndarray, ...]]  # realized quasi-isomorphism to the input


def proj_resolve_complex(C: ModComplex, bound: int = 12) -> tuple[ProjComplex, Resolution]:
    """A bounded complex of projectives quasi-isomorphic to C, built top-down.

    At each degree n the cone of the comparison map constructed so far is
    made exact at n by covering its cycles modulo the boundaries coming from
    C; the loop stops once the cycles vanish below the support of C.
    """
    A = C.algebra
    p = A.p
    nv = A.n_vertices
    if C.support is None:
        X = ProjComplex(A, {})
        return X, Resolution(X, {})
    lo, hi = C.support
    terms: dict[int, tuple[int, ...]] = {}
    diffs: dict[int, np.ndarray] = {}
    phi: dict[int, list[np.ndarray]] = {}
    prev_labels: tuple[int, ...] = ()
    prev_real: Optional[AModule] = None
    prev_dreal: Optional[list[np.ndarray]] = None  # d_P^(n+1) realized
    n = hi
    while True:
        if n < lo - bound:
            raise ResolutionBoundExceeded(f"resolution did not terminate within {bound} steps below degree {lo}")
        Cn = C.module(n)
        Pn1 = prev_real if prev_real is not None else projective_sum(A, ())
        cone_mod = Pn1.direct_sum(Cn)
        # delta(x, c) = (-d_P x, phi x + d_C c) into P^(n+2) + C^(n+1)
        Zb, W = [], []
        for v in range(nv):
            a, b = Pn1.dims[v], Cn.dims[v]
            top = (-prev_dreal[v]) % p if prev_dreal is not None else np.zeros((0, a), dtype=np.int64)
            phv = phi[n + 1][v] if n + 1 in phi else np.zeros((C.module(n + 1).dims[v], a), dtype=np.int64)
            delta = np.zeros((top.shape[0] + C.module(n + 1).dims[v], a + b), dtype=np.int64)
            delta[: top.shape[0], :a] = top
            delta[top.shape[0]:, :a] = phv
            delta[top.shape[0]:, a:] = C.d(n, v)
            Zb.append(la.kernel_basis(delta, p))
            w = np.zeros((a + b, C.module(n - 1).dims[v]), dtype=np.int64)
            w[a:] = C.d(n - 1, v)
            W.append(w % p)
        if n < lo and all(z.shape[1] == 0 for z in Zb):
            break
        gens = _generators_mod(A, Zb, list(cone_mod.arrow_maps), W)
        labels = tuple(i for i in range(nv) for _ in gens[i])
        gvecs = [g for i in range(nv) for g in gens[i]]
        # block differential d_P^n and realized comparison phi^n
        dn = zero_block(A, len(prev_labels), len(labels))
        phin = []
        for s, (i, g) in enumerate(zip(labels, gvecs)):
            a = Pn1.dims[i]
            x = g[:a]
            off = 0
            for t, lt in enumerate(prev_labels):
                sl = A.slice(lt, i)
                dn[t, s, sl] = (-x[off: off + len(sl)]) % p
                off += len(sl)
        for v in range(nv):
            cols = []
            for i, g in zip(labels, gvecs):
                a = Pn1.dims[i]
                c = g[a:]
                for b_ in A.slice(i, v):
                    cols.append((Cn.path_action[b_] @ c) % p if Cn.dims[v] else np.zeros(0, dtype=np.int64))
            phin.append(np.array(cols, dtype=np.int64).T.reshape(Cn.dims[v], len(cols)))
        if labels:
            terms[n] = labels
            if prev_labels:
                diffs[n] = dn
            phi[n] = phin
        prev_labels = labels
        prev_real = projective_sum(A, labels)
        prev_dreal = [projective_map(A, dn, labels, terms.get(n + 1, ()), v) for v in range(nv)] if labels else None
        if not labels:
            prev_real, prev_dreal = None, None
            if n < lo:
                break
        n -= 1
    X = ProjComplex(A, terms, diffs)
    st = strip_contractibles(X)
    inc = realize_map(st.inclusion)
    comparison = {}
    for m in st.minimal.terms:
        if m in phi:
            comparison[m] = tuple((phi[m][v] @ inc[m][v]) % p for v in range(nv))
    return st.minimal, Resolution(st.minimal, comparison)


def tau_candidate(X: ProjComplex, bound: int = 12) -> ProjComplex:
    """A minimal complex of projectives isomorphic to nu(X)[-1]."""
    return proj_resolve_complex(nu_complex(X).shift(-1), bound)[0]


def lengths(X: ProjComplex) -> tuple[int, int, int]:
    return X.l_c, X.l, strip_contractibles(X).minimal.l


def l_p(X: ProjComplex) -> int:
    return strip_contractibles(X).minimal.l


def l_i(X: ProjComplex, bound: int = 12) -> int:
    """Number of injective summands of a minimal injective representative of X."""
    dual = realize(X).dual()
    return proj_resolve_complex(dual, bound)[0].l


def complex_from_entries(A: Algebra, terms: dict[int, Sequence[int]], entries: dict[int, Iterable]) -> ProjComplex:
    """Build a complex from ``entries[n] = [(t, s, element), ...]``."""
    diffs = {}
    for n, items in entries.items():
        d = zero_block(A, len(terms.get(n + 1, ())), len(terms.get(n, ())))
        for t, s, elt in items:
            d[t, s] = (d[t, s] + np.asarray(elt, dtype=np.int64)) % A.p
        diffs[n] = d
    return ProjComplex(A, {n: tuple(v) for n, v in terms.items()}, diffs)
