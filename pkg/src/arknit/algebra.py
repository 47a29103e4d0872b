"""Bound quiver algebras over F_p, their representations, projectives and injectives.

Conventions (fixed once, used everywhere):

* Paths compose left to right: ``p q`` means "first p, then q".  The algebra
  basis consists of paths, each with a start and an end vertex.
* Modules are representations of the bound quiver.  The indecomposable
  projective ``P_i`` is spanned by the paths starting at ``i``; an arrow
  ``a: v -> w`` sends a path ``x`` (ending at ``v``) to ``x a``.
* A homomorphism ``P_s -> P_t`` is ``x -> q x`` for a unique ``q`` in the
  slice of paths from ``t`` to ``s``.  Composition of such maps is the
  algebra product in the same order as function composition:
  ``(x -> r x) o (x -> q x) = (x -> r q x)``.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import linalg as la

Path = tuple[int, tuple[int, ...]]  # (start vertex, arrow indices)


class PresentationError(ValueError):
    pass


class NonAdmissibleRelation(ValueError):
    pass


class NotFiniteDimensional(ValueError):
    pass


class ResolutionBoundExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class QuiverPresentation:
    """Quiver with relations; relations are tuples of (coefficient, arrow labels)."""

    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]
    relations: tuple[tuple[tuple[int, tuple[str, ...]], ...], ...]
    char: int

    def __post_init__(self):
        la.check_prime(self.char)
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple((str(a), str(s), str(t)) for a, s, t in self.arrows))
        object.__setattr__(
            self,
            "relations",
            tuple(tuple((int(c) % self.char, tuple(str(x) for x in path)) for c, path in rel) for rel in self.relations),
        )
        if len(set(self.vertices)) != len(self.vertices):
            raise PresentationError("duplicate vertex label")
        names = [a for a, _, _ in self.arrows]
        if len(set(names)) != len(names):
            raise PresentationError("duplicate arrow label")
        vset = set(self.vertices)
        for a, s, t in self.arrows:
            if s not in vset or t not in vset:
                raise PresentationError(f"arrow {a} has an undeclared endpoint")
        ends = {a: (s, t) for a, s, t in self.arrows}
        for rel in self.relations:
            for _, path in rel:
                if not path:
                    raise NonAdmissibleRelation("relation term is a trivial path")
                for x in path:
                    if x not in ends:
                        raise PresentationError(f"relation uses unknown arrow {x}")
                for x, y in zip(path, path[1:]):
                    if ends[x][1] != ends[y][0]:
                        raise PresentationError(f"relation path {'.'.join(path)} is not composable")

    def opposite(self) -> "QuiverPresentation":
        return QuiverPresentation(
            self.vertices,
            tuple((a, t, s) for a, s, t in self.arrows),
            tuple(tuple((c, tuple(reversed(path))) for c, path in rel) for rel in self.relations),
            self.char,
        )

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = {v: set() for v in self.vertices}
        for _, s, t in self.arrows:
            adj[s].add(t)
            adj[t].add(s)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)


@dataclass(frozen=True, eq=False)
class Algebra:
    presentation: QuiverPresentation
    p: int
    arrow_src: tuple[int, ...]
    arrow_tgt: tuple[int, ...]
    basis: tuple[Path, ...]
    mult: np.ndarray = field(repr=False)
    path_bound: int = 10
    nilpotency: int = 1
    _reducer: dict = field(default_factory=dict, repr=False)
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.presentation.vertices)

    @property
    def n_arrows(self) -> int:
        return len(self.arrow_src)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def end(self, b: int) -> int:
        start, arrows = self.basis[b]
        return self.arrow_tgt[arrows[-1]] if arrows else start

    @cached_property
    def starts(self) -> np.ndarray:
        return np.array([s for s, _ in self.basis], dtype=np.int64)

    @cached_property
    def ends(self) -> np.ndarray:
        return np.array([self.end(b) for b in range(self.dim)], dtype=np.int64)

    @cached_property
    def lengths(self) -> np.ndarray:
        """Radical degree of each basis path (its length)."""
        return np.array([len(a) for _, a in self.basis], dtype=np.int64)

    @cached_property
    def idempotents(self) -> tuple[int, ...]:
        return tuple(self.basis.index((v, ())) for v in range(self.n_vertices))

    @cached_property
    def arrow_basis(self) -> tuple[int, ...]:
        return tuple(self.basis.index((self.arrow_src[k], (k,))) for k in range(self.n_arrows))

    @cached_property
    def _slices(self) -> dict[tuple[int, int], np.ndarray]:
        out = {}
        for i in range(self.n_vertices):
            for j in range(self.n_vertices):
                out[i, j] = np.flatnonzero((self.starts == i) & (self.ends == j))
        return out

    def slice(self, i: int, j: int) -> np.ndarray:
        """Basis indices of the paths from ``i`` to ``j`` (a basis of e_i A e_j)."""
        return self._slices[i, j]

    def vertex_index(self, label: str) -> int:
        return self.presentation.vertices.index(str(label))

    def arrow_index(self, label: str) -> int:
        return [a for a, _, _ in self.presentation.arrows].index(str(label))

    def reduce_path(self, start: int, arrows: Sequence[int]) -> np.ndarray:
        """Coordinates of the path in the basis (zero vector for non-paths)."""
        arrows = tuple(arrows)
        out = np.zeros(self.dim, dtype=np.int64)
        if arrows:
            if self.arrow_src[arrows[0]] != start:
                return out
            for x, y in zip(arrows, arrows[1:]):
                if self.arrow_tgt[x] != self.arrow_src[y]:
                    return out
        if len(arrows) >= self.nilpotency:
            return out
        row = self._reducer.get((start, arrows))
        if row is not None:
            return row.copy()
        raise KeyError((start, arrows))

    def element(self, terms: Sequence[tuple[int, Sequence[str] | str]]) -> np.ndarray:
        """Build an element from (coefficient, arrow labels) or (coefficient, vertex label) terms."""
        out = np.zeros(self.dim, dtype=np.int64)
        for c, path in terms:
            if isinstance(path, str):
                out += c * self.reduce_path(self.vertex_index(path), ())
            else:
                idx = [self.arrow_index(a) for a in path]
                if not idx:
                    raise ValueError("empty arrow path needs a vertex label")
                out += c * self.reduce_path(self.arrow_src[idx[0]], idx)
        return out % self.p

    def product(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.einsum("a,b,abk->k", a, b, self.mult) % self.p

    def path_label(self, b: int) -> str:
        start, arrows = self.basis[b]
        if not arrows:
            return "e" + self.presentation.vertices[start]
        return ".".join(self.presentation.arrows[k][0] for k in arrows)

    def format_element(self, a: np.ndarray) -> str:
        terms = []
        for b in np.flatnonzero(a % self.p):
            c = int(a[b]) % self.p
            terms.append(("" if c == 1 else f"{c}*") + self.path_label(b))
        return " + ".join(terms) if terms else "0"

    @cached_property
    def opposite(self) -> "Algebra":
        op = build_algebra(self.presentation.opposite(), self.path_bound)
        op.__dict__["opposite"] = self
        return op

    @cached_property
    def op_matrix(self) -> np.ndarray:
        """Matrix of the anti-isomorphism A -> A^op, path -> reversed path."""
        op = self.opposite
        m = np.zeros((op.dim, self.dim), dtype=np.int64)
        for b, (start, arrows) in enumerate(self.basis):
            end = self.end(b)
            m[:, b] = op.reduce_path(end, tuple(reversed(arrows)))
        return m

    def to_opposite(self, a: np.ndarray) -> np.ndarray:
        return (self.op_matrix @ a) % self.p

    def is_connected(self) -> bool:
        return self.presentation.is_connected()


def _enumerate_paths(n_vertices, src, tgt, max_len) -> list[Path]:
    out = [(v, ()) for v in range(n_vertices)]
    frontier = [(src[k], (k,)) for k in range(len(src))]
    length = 1
    while frontier and length <= max_len:
        out.extend(frontier)
        nxt = []
        for start, arrows in frontier:
            last = tgt[arrows[-1]]
            for k in range(len(src)):
                if src[k] == last:
                    nxt.append((start, arrows + (k,)))
        frontier = nxt
        length += 1
    return out


def build_algebra(pres: QuiverPresentation, path_bound: int = 10) -> Algebra:
    """Path basis and multiplication table of kQ/I.

    Finite dimensionality is certified by finding the least N <= path_bound + 1
    with every path of length N in I + J^(N+1); admissibility of I then gives
    J^N contained in I, so kQ/I = kQ/(I + J^N).
    """
    p = pres.char
    verts = {v: i for i, v in enumerate(pres.vertices)}
    arrow_names = {a: k for k, (a, _, _) in enumerate(pres.arrows)}
    src = tuple(verts[s] for _, s, _ in pres.arrows)
    tgt = tuple(verts[t] for _, _, t in pres.arrows)
    nv = len(verts)
    if not pres.is_connected():
        warnings.warn("quiver is not connected; the algebra is decomposable", stacklevel=2)

    rels = []
    for rel in pres.relations:
        terms = []
        for c, path in rel:
            if len(path) < 2:
                raise NonAdmissibleRelation(f"relation path {'.'.join(path)} has length < 2")
            idx = tuple(arrow_names[x] for x in path)
            terms.append((c % p, src[idx[0]], tgt[idx[-1]], idx))
        rels.append(terms)

    for n in range(1, path_bound + 2):
        paths = _enumerate_paths(nv, src, tgt, n)
        index = {q: i for i, q in enumerate(paths)}
        generators = []
        for terms in rels:
            minlen = min(len(t[3]) for t in terms)
            if minlen > n:
                continue
            for u in (q for q in paths if len(q[1]) <= n - minlen):
                u_end = tgt[u[1][-1]] if u[1] else u[0]
                for v in (q for q in paths if len(q[1]) + len(u[1]) + minlen <= n):
                    vec = np.zeros(len(paths), dtype=np.int64)
                    for c, s, t, idx in terms:
                        if s != u_end or t != v[0]:
                            continue
                        arrows = u[1] + idx + v[1]
                        if len(arrows) > n:
                            continue
                        vec[index[(u[0], arrows)]] += c
                    if vec.any():
                        generators.append(vec % p)
        top = [i for i, q in enumerate(paths) if len(q[1]) == n]
        # columns ordered longest path first so that pivots fall on long paths
        order = sorted(range(len(paths)), key=lambda i: (-len(paths[i][1]), i))
        w = np.array(generators, dtype=np.int64).reshape(-1, len(paths))
        if top:
            if w.shape[0] == 0:
                continue
            r_top = la.rank(w[:, order], p)
            aug = np.vstack([w, np.eye(len(paths), dtype=np.int64)[top]])
            if la.rank(aug[:, order], p) != r_top:
                continue
        # quotient by W + J^n, i.e. work with paths of length < n
        keep = [i for i in order if len(paths[i][1]) < n]
        small = [paths[i] for i in keep]
        wk = np.vstack([w, np.eye(len(paths), dtype=np.int64)[top]])[:, keep] if top else w[:, keep]
        if wk.shape[0]:
            r, pivots = la.rref(wk, p)
        else:
            r, pivots = np.zeros((0, len(keep)), dtype=np.int64), []
        pivset = set(pivots)
        free = [c for c in range(len(keep)) if c not in pivset]
        basis_paths = sorted((small[c] for c in free), key=lambda q: (len(q[1]), q[0], q[1]))
        bpos = {q: i for i, q in enumerate(basis_paths)}
        reducer = {}
        for c, q in enumerate(small):
            vec = np.zeros(len(basis_paths), dtype=np.int64)
            if c in pivset:
                row = r[pivots.index(c)]
                for f in free:
                    if row[f]:
                        vec[bpos[small[f]]] = (-row[f]) % p
            else:
                vec[bpos[q]] = 1
            reducer[q] = vec
        d = len(basis_paths)
        mult = np.zeros((d, d, d), dtype=np.int64)
        for a, (sa, aa) in enumerate(basis_paths):
            ea = tgt[aa[-1]] if aa else sa
            for b, (sb, bb) in enumerate(basis_paths):
                if sb != ea:
                    continue
                arrows = aa + bb
                if len(arrows) >= n:
                    continue
                mult[a, b] = reducer[(sa, arrows)]
        return Algebra(
            presentation=pres,
            p=p,
            arrow_src=src,
            arrow_tgt=tgt,
            basis=tuple(basis_paths),
            mult=mult,
            path_bound=path_bound,
            nilpotency=n,
            _reducer=reducer,
        )
    raise NotFiniteDimensional(f"nonzero paths persist beyond length {path_bound}")


@dataclass(frozen=True, eq=False)
class AModule:
    """A representation: a vector space per vertex and a matrix per arrow."""

    algebra: Algebra
    dims: tuple[int, ...]
    arrow_maps: tuple[np.ndarray, ...]

    def __post_init__(self):
        A = self.algebra
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        maps = tuple(np.asarray(m, dtype=np.int64).reshape(self.dims[A.arrow_tgt[k]], self.dims[A.arrow_src[k]]) % A.p
                     for k, m in enumerate(self.arrow_maps))
        object.__setattr__(self, "arrow_maps", maps)
        if len(self.dims) != A.n_vertices or len(maps) != A.n_arrows:
            raise ValueError("module data does not match the quiver")

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def path_matrix(self, start: int, arrows: Sequence[int]) -> np.ndarray:
        A = self.algebra
        m = np.eye(self.dims[start], dtype=np.int64)
        for k in arrows:
            m = (self.arrow_maps[k] @ m) % A.p
        return m

    @cached_property
    def path_action(self) -> tuple[np.ndarray, ...]:
        """Matrix of each basis path b acting from M_start(b) to M_end(b)."""
        return tuple(self.path_matrix(s, a) for s, a in self.algebra.basis)

    def act(self, a: np.ndarray, i: int, j: int) -> np.ndarray:
        """Action of an element of e_i A e_j as a map M_i -> M_j."""
        A = self.algebra
        out = np.zeros((self.dims[j], self.dims[i]), dtype=np.int64)
        for b in A.slice(i, j):
            c = a[b]
            if c:
                out += c * self.path_action[b]
        return out % A.p

    def satisfies_relations(self) -> bool:
        A = self.algebra
        names = {a: k for k, (a, _, _) in enumerate(A.presentation.arrows)}
        for rel in A.presentation.relations:
            total = None
            for c, path in rel:
                idx = [names[x] for x in path]
                m = c * self.path_matrix(A.arrow_src[idx[0]], idx)
                total = m if total is None else total + m
            if total is not None and (total % A.p).any():
                return False
        return True

    def dual(self) -> "AModule":
        """D(M) = Hom_k(M, k), a representation of the opposite quiver."""
        return AModule(self.algebra.opposite, self.dims, tuple(m.T.copy() for m in self.arrow_maps))

    def direct_sum(self, other: "AModule") -> "AModule":
        A = self.algebra
        maps = []
        for k in range(A.n_arrows):
            a, b = self.arrow_maps[k], other.arrow_maps[k]
            m = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.int64)
            m[: a.shape[0], : a.shape[1]] = a
            m[a.shape[0]:, a.shape[1]:] = b
            maps.append(m)
        return AModule(A, tuple(x + y for x, y in zip(self.dims, other.dims)), tuple(maps))


def zero_module(A: Algebra) -> AModule:
    return AModule(A, (0,) * A.n_vertices, tuple(np.zeros((0, 0), dtype=np.int64) for _ in range(A.n_arrows)))


def projective_sum(A: Algebra, labels: Sequence[int]) -> AModule:
    """The representation of the direct sum of P_t for t in ``labels``.

    At vertex v the basis is the concatenation over summands t of the paths t -> v.
    """
    dims = tuple(sum(len(A.slice(t, v)) for t in labels) for v in range(A.n_vertices))
    maps = []
    for k in range(A.n_arrows):
        v, w = A.arrow_src[k], A.arrow_tgt[k]
        alpha = A.arrow_basis[k]
        m = np.zeros((dims[w], dims[v]), dtype=np.int64)
        ro = co = 0
        for t in labels:
            sv, sw = A.slice(t, v), A.slice(t, w)
            m[ro: ro + len(sw), co: co + len(sv)] = A.mult[sv][:, alpha][:, sw].T
            ro += len(sw)
            co += len(sv)
        maps.append(m)
    return AModule(A, dims, tuple(maps))


def projective_map(A: Algebra, block: np.ndarray, src: Sequence[int], tgt: Sequence[int], v: int) -> np.ndarray:
    """Vertex-v component of the map sum P_src -> sum P_tgt given by a block matrix over A."""
    rows = sum(len(A.slice(t, v)) for t in tgt)
    cols = sum(len(A.slice(s, v)) for s in src)
    out = np.zeros((rows, cols), dtype=np.int64)
    ro = 0
    for ti, t in enumerate(tgt):
        st = A.slice(t, v)
        co = 0
        for si, s in enumerate(src):
            ss = A.slice(s, v)
            q = block[ti, si]
            if q.any() and len(st) and len(ss):
                # x -> q x, x a path from s to v
                out[ro: ro + len(st), co: co + len(ss)] = np.einsum("a,axk->kx", q, A.mult[:, ss][:, :, st])
            co += len(ss)
        ro += len(st)
    return out % A.p


def indec_projective(A: Algebra, i: int) -> AModule:
    return projective_sum(A, [i])


def indec_injective(A: Algebra, i: int) -> AModule:
    """I_i as the dual of the projective P_i of the opposite algebra."""
    return AModule(A, *_dual_data(projective_sum(A.opposite, [i])))


def _dual_data(M: AModule):
    return M.dims, tuple(m.T.copy() for m in M.arrow_maps)


def injective_sum(A: Algebra, labels: Sequence[int]) -> AModule:
    """Direct sum of nu_A(P_t) = D(paths ending at t), basis dual to paths v -> t."""
    dims = tuple(sum(len(A.slice(v, t)) for t in labels) for v in range(A.n_vertices))
    maps = []
    for k in range(A.n_arrows):
        v, w = A.arrow_src[k], A.arrow_tgt[k]
        alpha = A.arrow_basis[k]
        m = np.zeros((dims[w], dims[v]), dtype=np.int64)
        ro = co = 0
        for t in labels:
            sv, sw = A.slice(v, t), A.slice(w, t)
            # dual of y -> alpha y from paths w->t to paths v->t
            m[ro: ro + len(sw), co: co + len(sv)] = A.mult[alpha][sw][:, sv]
            ro += len(sw)
            co += len(sv)
        maps.append(m)
    return AModule(A, dims, tuple(maps))


def nakayama_map(A: Algebra, block: np.ndarray, src: Sequence[int], tgt: Sequence[int], v: int) -> np.ndarray:
    """Vertex-v component of nu_A applied to the block map sum P_src -> sum P_tgt.

    nu_A(x -> q x) is the transpose of y -> y q (paths v->t to paths v->s).
    """
    rows = sum(len(A.slice(v, t)) for t in tgt)
    cols = sum(len(A.slice(v, s)) for s in src)
    out = np.zeros((rows, cols), dtype=np.int64)
    ro = 0
    for ti, t in enumerate(tgt):
        st = A.slice(v, t)
        co = 0
        for si, s in enumerate(src):
            ss = A.slice(v, s)
            q = block[ti, si]
            if q.any() and len(st) and len(ss):
                # (y q)[z] for y in st, z in ss; transpose gives rows st, cols ss
                out[ro: ro + len(st), co: co + len(ss)] = np.einsum("b,ybz->yz", q, A.mult[st][:, :, ss])
            co += len(ss)
        ro += len(st)
    return out % A.p


@dataclass(frozen=True)
class NakayamaImage:
    module: AModule
    vertex: int

    def on_map(self, q: np.ndarray, target: int) -> tuple[np.ndarray, ...]:
        """nu_A of the map P_vertex -> P_target given by q in e_target A e_vertex."""
        A = self.module.algebra
        block = np.asarray(q, dtype=np.int64).reshape(1, 1, A.dim)
        return tuple(nakayama_map(A, block, [self.vertex], [target], v) for v in range(A.n_vertices))


def nakayama_projective(A: Algebra, i: int) -> NakayamaImage:
    return NakayamaImage(injective_sum(A, [i]), i)


def hom_projectives(A: Algebra, i: int, j: int) -> list[np.ndarray]:
    """Basis of Hom(P_i, P_j) ~ e_j A e_i, as algebra elements."""
    out = []
    for b in A.slice(j, i):
        e = np.zeros(A.dim, dtype=np.int64)
        e[b] = 1
        out.append(e)
    return out


def is_simple_algebra(A: Algebra) -> bool:
    return A.n_vertices == 1 and A.dim == 1


def opposite_algebra(A: Algebra) -> Algebra:
    return A.opposite


def min_proj_resolution(A: Algebra, M: AModule, length_bound: int = 10):
    """Minimal projective resolution of M as a complex in degrees <= 0."""
    from .complexes import ModComplex, proj_resolve_complex

    X, _ = proj_resolve_complex(ModComplex.stalk(M, 0), length_bound)
    return X


def module_hom_basis(M: AModule, N: AModule) -> list[tuple[np.ndarray, ...]]:
    """Basis of Hom_A(M, N) as tuples of per-vertex matrices."""
    A = M.algebra
    p = A.p
    sizes = [N.dims[v] * M.dims[v] for v in range(A.n_vertices)]
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    nvar = int(offs[-1])
    eqs = []
    for k in range(A.n_arrows):
        v, w = A.arrow_src[k], A.arrow_tgt[k]
        mv, nw = M.arrow_maps[k], N.arrow_maps[k]
        # phi_w M_a - N_a phi_v = 0, phi_v stored row-major (N_v x M_v)
        block = np.zeros((N.dims[w] * M.dims[v], nvar), dtype=np.int64)
        block[:, offs[w]:offs[w + 1]] += np.kron(np.eye(N.dims[w], dtype=np.int64), mv.T)
        block[:, offs[v]:offs[v + 1]] -= np.kron(nw, np.eye(M.dims[v], dtype=np.int64))
        eqs.append(block)
    mat = np.vstack(eqs) if eqs else np.zeros((0, nvar), dtype=np.int64)
    ker = la.kernel_basis(mat, p)
    out = []
    for c in range(ker.shape[1]):
        vec = ker[:, c]
        out.append(tuple(vec[offs[v]:offs[v + 1]].reshape(N.dims[v], M.dims[v]) for v in range(A.n_vertices)))
    return out


def module_iso(M: AModule, N: AModule, probes: int = 200, seed: int = 0) -> Optional[tuple[np.ndarray, ...]]:
    """An explicit isomorphism M -> N, or None if the probe budget finds none."""
    if M.dims != N.dims:
        return None
    A = M.algebra
    basis = module_hom_basis(M, N)
    if not basis:
        return None if M.total_dim else tuple(np.zeros((0, 0), dtype=np.int64) for _ in M.dims)
    rng = np.random.default_rng(seed)
    candidates = itertools.chain(
        (np.eye(len(basis), dtype=np.int64)[i] for i in range(len(basis))),
        (rng.integers(0, A.p, len(basis)) for _ in range(probes)),
    )
    for coeffs in candidates:
        phi = tuple(sum(int(c) * f[v] for c, f in zip(coeffs, basis)) % A.p for v in range(A.n_vertices))
        if all(la.is_invertible(phi[v], A.p) for v in range(A.n_vertices) if M.dims[v]):
            return phi
    return None
