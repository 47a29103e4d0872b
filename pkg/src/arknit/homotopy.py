"""Hom spaces in the homotopy category, endomorphism rings and Krull-Schmidt splitting.

A map from a complex of projectives X to a complex of modules C is determined
by the images of the summand generators: the s-th summand P_i of X^n goes to
a vector of C^n at vertex i.  Chain maps and null-homotopies are therefore
solutions and images of explicit linear systems in these coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import linalg as la
from .algebra import Algebra, projective_map
from .complexes import (
    ChainMap,
    ModComplex,
    ProjComplex,
    bmul,
    identity_map,
    realize,
    realize_map,
    strip_contractibles,
    zero_block,
)


class NonSplitEndomorphismRing(RuntimeError):
    pass


class DecompositionBudgetExceeded(RuntimeError):
    pass


class IsoSearchBudgetExceeded(RuntimeError):
    pass


def _realized(C: Union[ProjComplex, ModComplex]) -> ModComplex:
    if isinstance(C, ModComplex):
        return C
    cache = C.algebra.cache.setdefault("realize", {})
    key = C.key()
    out = cache.get(key)
    if out is None:
        out = cache[key] = realize(C)
    return out


@dataclass(eq=False)
class HomSpace:
    source: ProjComplex
    target: Union[ProjComplex, ModComplex]
    layout: list  # (degree, summand, label, offset, size)
    chain_basis: np.ndarray
    null_basis: np.ndarray
    reps: np.ndarray
    _coord: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def algebra(self) -> Algebra:
        return self.source.algebra

    @property
    def dim(self) -> int:
        return self.reps.shape[1]

    @property
    def chain_dim(self) -> int:
        return self.chain_basis.shape[1]

    @property
    def null_dim(self) -> int:
        return self.null_basis.shape[1]

    @property
    def nvars(self) -> int:
        return self.chain_basis.shape[0]

    def coords(self, vec: np.ndarray) -> np.ndarray:
        """Coordinates of the class of a chain-map vector on the coset representatives."""
        if self.dim == 0:
            return np.zeros(0, dtype=np.int64)
        if self._coord is None:
            full = np.hstack([self.null_basis, self.reps])
            self._coord = la.left_inverse(full, self.algebra.p)[self.null_dim:]
        return (self._coord @ (np.asarray(vec) % self.algebra.p)) % self.algebra.p

    def is_null(self, vec: np.ndarray) -> bool:
        return not self.coords(vec).any()

    def combination(self, coeffs) -> np.ndarray:
        return (self.reps @ np.asarray(coeffs, dtype=np.int64)) % self.algebra.p

    def to_chain_map(self, vec: np.ndarray) -> ChainMap:
        """Chain map X -> Y (target must be a complex of projectives)."""
        X, Y = self.source, self.target
        if not isinstance(Y, ProjComplex):
            raise TypeError("to_chain_map needs a complex of projectives as target")
        A = self.algebra
        comps = {}
        for n, s, i, off, size in self.layout:
            tgt = Y.labels(n)
            if not tgt:
                continue
            c = comps.setdefault(n, zero_block(A, len(tgt), len(X.labels(n))))
            pos = off
            for t, lt in enumerate(tgt):
                sl = A.slice(lt, i)
                c[t, s, sl] = vec[pos: pos + len(sl)]
                pos += len(sl)
        return ChainMap(X, Y, comps, check=False)

    def rep(self, k: int) -> ChainMap:
        return self.to_chain_map(self.reps[:, k])

    def vector(self, f: ChainMap) -> np.ndarray:
        """Inverse of ``to_chain_map``."""
        A = self.algebra
        out = np.zeros(self.nvars, dtype=np.int64)
        Y = self.target
        for n, s, i, off, size in self.layout:
            pos = off
            fn = f.f(n)
            for t, lt in enumerate(Y.labels(n)):
                sl = A.slice(lt, i)
                out[pos: pos + len(sl)] = fn[t, s, sl]
                pos += len(sl)
        return out % A.p

    def class_of(self, f: ChainMap) -> np.ndarray:
        return self.coords(self.vector(f))


def hom_space(X: ProjComplex, Y: Union[ProjComplex, ModComplex]) -> HomSpace:
    A = X.algebra
    key = None
    if isinstance(Y, ProjComplex):
        key = (X.key(), Y.key())
        hit = A.cache.setdefault("hom", {}).get(key)
        if hit is not None:
            return hit
    C = _realized(Y)
    p = A.p
    layout = []
    off = 0
    for n, labs in X.terms.items():
        for s, i in enumerate(labs):
            size = C.module(n).dims[i]
            layout.append((n, s, i, off, size))
            off += size
    nvars = off
    pos = {(n, s): (o, sz) for n, s, i, o, sz in layout}
    # homotopy variables h_{n,s} in C^(n-1) at vertex i
    hlayout = []
    hoff = 0
    for n, labs in X.terms.items():
        for s, i in enumerate(labs):
            size = C.module(n - 1).dims[i]
            hlayout.append((n, s, i, hoff, size))
            hoff += size
    hpos = {(n, s): (o, sz) for n, s, i, o, sz in hlayout}

    if nvars == 0:
        empty = np.zeros((0, 0), dtype=np.int64)
        out = HomSpace(X, Y, layout, empty, empty, empty)
        if key is not None:
            A.cache["hom"][key] = out
        return out

    eq_rows = []
    for n, s, i, o, sz in layout:
        rows = C.module(n + 1).dims[i]
        if rows == 0:
            continue
        block = np.zeros((rows, nvars), dtype=np.int64)
        if sz:
            block[:, o:o + sz] = C.d(n, i)
        d = X.d(n)
        for t, lt in enumerate(X.labels(n + 1)):
            q = d[t, s]
            if q.any():
                o2, sz2 = pos[(n + 1, t)]
                if sz2:
                    block[:, o2:o2 + sz2] -= C.module(n + 1).act(q, lt, i)
        eq_rows.append(block % p)
    eqs = np.vstack(eq_rows) if eq_rows else np.zeros((0, nvars), dtype=np.int64)
    Z = la.kernel_basis(eqs, p)

    H = np.zeros((nvars, hoff), dtype=np.int64)
    for n, s, i, o, sz in layout:
        if sz == 0:
            continue
        ho, hsz = hpos[(n, s)]
        if hsz:
            H[o:o + sz, ho:ho + hsz] += C.d(n - 1, i)
        d = X.d(n)
        for t, lt in enumerate(X.labels(n + 1)):
            q = d[t, s]
            if q.any():
                ho2, hsz2 = hpos[(n + 1, t)]
                if hsz2:
                    H[o:o + sz, ho2:ho2 + hsz2] += C.module(n).act(q, lt, i)
    H %= p
    B = la.column_space_basis(H, p) if H.size else np.zeros((nvars, 0), dtype=np.int64)
    # coset representatives: columns of Z independent modulo span(B)
    if Z.shape[1]:
        _, piv = la.rref(np.hstack([B, Z]), p)
        reps = Z[:, [c - B.shape[1] for c in piv if c >= B.shape[1]]]
    else:
        reps = Z
    out = HomSpace(X, Y, layout, Z, B, reps)
    if key is not None:
        A.cache["hom"][key] = out
    return out


def hom_dim(X: ProjComplex, Y: Union[ProjComplex, ModComplex]) -> int:
    if isinstance(Y, ProjComplex) and (X.is_zero() or Y.is_zero()):
        return 0
    if isinstance(Y, ProjComplex):
        xs, ys = X.support, Y.support
        # degree-0 maps between complexes with disjoint supports are zero
        if xs[1] < ys[0] or ys[1] < xs[0]:
            return 0
    return hom_space(X, Y).dim


def is_null_homotopic(f: ChainMap) -> bool:
    H = hom_space(f.source, f.target)
    return H.is_null(H.vector(f))


def compose_classes(H_gf: HomSpace, g: ChainMap, f: ChainMap) -> np.ndarray:
    return H_gf.class_of(g.compose(f))


# ---------------------------------------------------------------- endomorphism rings


@dataclass(eq=False)
class EndAlgebra:
    hom: HomSpace
    table: np.ndarray  # table[a, b] = coords of rep_a o rep_b
    unit: np.ndarray

    @property
    def dim(self) -> int:
        return self.hom.dim

    @property
    def p(self) -> int:
        return self.hom.algebra.p

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.einsum("a,b,abk->k", a, b, self.table) % self.p

    def left_matrix(self, a: np.ndarray) -> np.ndarray:
        """Matrix of b -> a b."""
        return np.einsum("a,abk->kb", a, self.table) % self.p

    def is_unit(self, a: np.ndarray) -> bool:
        return la.is_invertible(self.left_matrix(a), self.p)

    def is_nilpotent(self, a: np.ndarray) -> bool:
        return not la.matpow(self.left_matrix(a), self.dim, self.p).any()

    def element(self, a: np.ndarray) -> ChainMap:
        return self.hom.to_chain_map(self.hom.combination(a))


def end_algebra(X: ProjComplex) -> EndAlgebra:
    A = X.algebra
    cache = A.cache.setdefault("end", {})
    key = X.key()
    hit = cache.get(key)
    if hit is not None:
        return hit
    H = hom_space(X, X)
    d = H.dim
    reps = [H.rep(k) for k in range(d)]
    table = np.zeros((d, d, d), dtype=np.int64)
    for a in range(d):
        for b in range(d):
            table[a, b] = H.class_of(reps[a].compose(reps[b]))
    unit = H.class_of(identity_map(X)) if d else np.zeros(0, dtype=np.int64)
    E = EndAlgebra(H, table, unit)
    cache[key] = E
    return E


def _regular_matrices(table: np.ndarray) -> np.ndarray:
    """L[a] is the matrix of left multiplication by the a-th basis element."""
    return np.transpose(table, (0, 2, 1))


def _trace_power_div(m: np.ndarray, p: int, i: int) -> int:
    """(Tr(M^(p^i)) / p^i) mod p for the integer lift of M."""
    mod = p ** (i + 1)
    a = m.astype(object) % mod
    e = p ** i
    result = None
    base = a
    while e:
        if e & 1:
            result = base if result is None else (result.dot(base)) % mod
        e >>= 1
        if e:
            base = (base.dot(base)) % mod
    tr = int(np.trace(result)) % mod
    return (tr // p ** i) % p


def radical_basis(table: np.ndarray, p: int) -> np.ndarray:
    """Jacobson radical of an associative unital F_p-algebra given by structure constants.

    Trace-form filtration over the left regular representation: I_0 is the
    radical of the trace form and each further step keeps the elements a of
    the previous ideal with Tr((a b)^(p^i)) / p^i = 0 mod p for all b.
    Returns basis vectors as columns.
    """
    n = table.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    L = _regular_matrices(table) % p
    gram = np.einsum("aij,bji->ab", L, L) % p
    cur = la.kernel_basis(gram, p)
    i = 1
    while p ** i <= n and cur.shape[1]:
        vals = np.zeros((n, cur.shape[1]), dtype=np.int64)
        for k in range(cur.shape[1]):
            a = cur[:, k]
            La = np.einsum("a,aij->ij", a, L) % p
            for b in range(n):
                vals[b, k] = _trace_power_div((La @ L[b]) % p, p, i)
        ker = la.kernel_basis(vals, p)
        cur = (cur @ ker) % p
        i += 1
    return cur


def _quotient_structure(table: np.ndarray, rad: np.ndarray, p: int):
    """Structure constants of E / rad on a complement basis."""
    n = table.shape[0]
    full = np.hstack([rad, np.eye(n, dtype=np.int64)])
    _, piv = la.rref(full, p)
    comp = [c - rad.shape[1] for c in piv if c >= rad.shape[1]]
    basis = np.hstack([rad, np.eye(n, dtype=np.int64)[:, comp]])
    inv = la.inverse(basis, p)
    k = len(comp)
    S = np.zeros((k, k, k), dtype=np.int64)
    for a_, a in enumerate(comp):
        for b_, b in enumerate(comp):
            c = (inv @ table[a, b]) % p
            S[a_, b_] = c[rad.shape[1]:]
    return S, comp


def _center(S: np.ndarray, p: int) -> np.ndarray:
    k = S.shape[0]
    if k == 0:
        return np.zeros((0, 0), dtype=np.int64)
    # z commutes with every basis element b: sum_a z_a (S[a,b] - S[b,a]) = 0
    eqs = np.vstack([(S[:, b, :] - S[b, :, :]).T for b in range(k)]) % p
    return la.kernel_basis(eqs, p)


def _power(S: np.ndarray, z: np.ndarray, e: int, p: int, unit: np.ndarray) -> np.ndarray:
    result = unit.copy()
    base = z.copy()
    while e:
        if e & 1:
            result = np.einsum("a,b,abk->k", result, base, S) % p
        e >>= 1
        if e:
            base = np.einsum("a,b,abk->k", base, base, S) % p
    return result


def check_split(table: np.ndarray, rad: np.ndarray, unit: np.ndarray, p: int) -> None:
    """Raise NonSplitEndomorphismRing unless E/rad is a product of matrix algebras over F_p."""
    S, comp = _quotient_structure(table, rad, p)
    if S.shape[0] <= 1:
        return
    n = table.shape[0]
    full = np.hstack([rad, np.eye(n, dtype=np.int64)[:, comp]])
    u = (la.inverse(full, p) @ unit)[rad.shape[1]:] % p
    Z = _center(S, p)
    for c in range(Z.shape[1]):
        z = Z[:, c]
        if ((_power(S, z, p, p, u) - z) % p).any():
            raise NonSplitEndomorphismRing("the semisimple quotient of End has a non-prime residue field")


@dataclass(eq=False)
class EndStructure:
    end: EndAlgebra
    radical: np.ndarray

    @property
    def top_dim(self) -> int:
        return self.end.dim - self.radical.shape[1]


def radical_of_end(E: EndAlgebra) -> np.ndarray:
    """Columns span rad End(X) in the coset coordinates."""
    return radical_basis(E.table, E.p)


def end_structure(X: ProjComplex) -> EndStructure:
    A = X.algebra
    cache = A.cache.setdefault("endstruct", {})
    key = X.key()
    hit = cache.get(key)
    if hit is None:
        E = end_algebra(X)
        hit = cache[key] = EndStructure(E, radical_of_end(E))
    return hit


def is_indecomposable(X: ProjComplex) -> bool:
    if X.is_zero():
        return False
    st = end_structure(X)
    if st.top_dim == 1:
        return True
    check_split(st.end.table, st.radical, st.end.unit, st.end.p)
    return False


# ---------------------------------------------------------------- splitting


def block_from_realized(A: Algebra, mats, src: tuple, tgt: tuple) -> np.ndarray:
    """Recover the block matrix over A of a module map between sums of projectives."""
    out = zero_block(A, len(tgt), len(src))
    for s, i in enumerate(src):
        # column of the generator e_i of the s-th summand at vertex i
        col = sum(len(A.slice(u, i)) for u in src[:s]) + list(A.slice(i, i)).index(A.idempotents[i])
        vec = mats[i][:, col]
        pos = 0
        for t, lt in enumerate(tgt):
            sl = A.slice(lt, i)
            out[t, s, sl] = vec[pos: pos + len(sl)]
            pos += len(sl)
    return out % A.p


def _fitting_projection(m: np.ndarray, p: int) -> np.ndarray:
    """Projection onto im(m^k) along ker(m^k) for k = size of m."""
    n = m.shape[0]
    if n == 0:
        return m.copy()
    mk = la.matpow(m, n, p)
    im = la.column_space_basis(mk, p)
    ker = la.kernel_basis(mk, p)
    basis = np.hstack([im, ker])
    diag = np.zeros((n, n), dtype=np.int64)
    diag[: im.shape[1], : im.shape[1]] = np.eye(im.shape[1], dtype=np.int64)
    return (basis @ diag @ la.inverse(basis, p)) % p


def _summand_generators(A: Algebra, M, proj) -> list[tuple[int, np.ndarray]]:
    """Generators (vertex, vector) of the image of an idempotent endomorphism of a projective module."""
    p = A.p
    gens = []
    images = [la.column_space_basis(proj[v], p) for v in range(A.n_vertices)]
    for i in range(A.n_vertices):
        if images[i].shape[1] == 0:
            continue
        parts = [np.zeros((M.dims[i], 0), dtype=np.int64)]
        for k in range(A.n_arrows):
            if A.arrow_tgt[k] == i:
                parts.append((M.arrow_maps[k] @ images[A.arrow_src[k]]) % p)
        span = np.hstack(parts)
        r = la.rank(span, p) if span.size else 0
        for c in range(images[i].shape[1]):
            cand = np.hstack([span, images[i][:, c:c + 1]])
            rc = la.rank(cand, p)
            if rc > r:
                span, r = cand, rc
                gens.append((i, images[i][:, c]))
    return gens


@dataclass(eq=False)
class Part:
    complex: ProjComplex
    inclusion: ChainMap  # part -> X
    projection: ChainMap  # X -> part


def _split_by_idempotent(X: ProjComplex, eproj: dict) -> tuple[Part, Part]:
    """Split X along a realized idempotent chain endomorphism (per degree, per vertex)."""
    A = X.algebra
    p = A.p
    R = _realized(X)
    data = {}
    for n, labs in X.terms.items():
        M = R.module(n)
        pieces = []
        for proj in (eproj[n], tuple((np.eye(M.dims[v], dtype=np.int64) - eproj[n][v]) % p for v in range(A.n_vertices))):
            gens = _summand_generators(A, M, proj)
            labels = tuple(i for i, _ in gens)
            iota = zero_block(A, len(labs), len(labels))
            for g, (i, vec) in enumerate(gens):
                pos = 0
                for t, lt in enumerate(labs):
                    sl = A.slice(lt, i)
                    iota[t, g, sl] = vec[pos: pos + len(sl)]
                    pos += len(sl)
            pieces.append((labels, iota))
        labels_all = pieces[0][0] + pieces[1][0]
        iso = np.concatenate([pieces[0][1], pieces[1][1]], axis=1)
        mats = [projective_map(A, iso, labels_all, labs, v) for v in range(A.n_vertices)]
        inv = [la.inverse(m, p) if m.size else m for m in mats]
        inv_block = block_from_realized(A, inv, labs, labels_all)
        k = len(pieces[0][0])
        data[n] = (pieces, inv_block[:k], inv_block[k:])
    parts = []
    for which in (0, 1):
        terms, incs, prjs = {}, {}, {}
        for n in X.terms:
            pieces, pi0, pi1 = data[n]
            labels, iota = pieces[which]
            terms[n] = labels
            incs[n] = iota
            prjs[n] = pi0 if which == 0 else pi1
        diffs = {}
        for n in X.diffs:
            if terms.get(n) and terms.get(n + 1):
                diffs[n] = bmul(A, prjs[n + 1], bmul(A, X.d(n), incs[n]))
        Y = ProjComplex(A, terms, diffs, check=False)
        parts.append(Part(Y, ChainMap(Y, X, incs, check=False), ChainMap(X, Y, prjs, check=False)))
    return parts[0], parts[1]


def _probe_elements(E: EndAlgebra, budget: int):
    d = E.dim
    p = E.p
    count = 0
    basis = np.eye(d, dtype=np.int64)
    for size in range(1, d + 1):
        for support in itertools.combinations(range(d), size):
            for coeffs in itertools.product(range(1, p), repeat=size):
                if size > 1 and coeffs[0] != 1:
                    continue
                b = sum(c * basis[k] for c, k in zip(coeffs, support)) % p
                for lam in range(p):
                    yield (b - lam * E.unit) % p
                    count += 1
                    if count >= budget:
                        return


def _nontrivial_idempotent(X: ProjComplex, E: EndAlgebra, budget: int):
    A = X.algebra
    p = A.p
    for a in _probe_elements(E, budget):
        if E.is_unit(a) or E.is_nilpotent(a):
            continue
        mats = realize_map(E.element(a))
        eproj = {}
        for n in X.terms:
            eproj[n] = tuple(_fitting_projection(mats[n][v], p) for v in range(A.n_vertices))
        return eproj
    raise DecompositionBudgetExceeded(f"no splitting idempotent found within {budget} probes")


def decompose(X: ProjComplex, budget: int = 5000) -> list[Part]:
    """Indecomposable summands of a minimal complex with inclusion and projection chain maps."""
    if X.is_zero():
        return []
    st = end_structure(X)
    if st.top_dim == 1:
        return [Part(X, identity_map(X), identity_map(X))]
    check_split(st.end.table, st.radical, st.end.unit, st.end.p)
    eproj = _nontrivial_idempotent(X, st.end, budget)
    out = []
    for part in _split_by_idempotent(X, eproj):
        for sub in decompose(part.complex, budget):
            out.append(Part(sub.complex, part.inclusion.compose(sub.inclusion), sub.projection.compose(part.projection)))
    return out


# ---------------------------------------------------------------- isomorphism


def top_invertible(f: ChainMap) -> bool:
    """For a map between minimal complexes: every component is an isomorphism of projectives."""
    A = f.algebra
    X, Y = f.source, f.target
    if set(X.terms) != set(Y.terms):
        return False
    for n, labs in X.terms.items():
        tl = Y.labels(n)
        if sorted(labs) != sorted(tl):
            return False
        c = f.f(n)
        for i in set(labs):
            rows = [t for t, lt in enumerate(tl) if lt == i]
            cols = [s for s, ls in enumerate(labs) if ls == i]
            m = c[np.ix_(rows, cols)][:, :, A.idempotents[i]]
            if not la.is_invertible(m, A.p):
                return False
    return True


def find_iso(X: ProjComplex, Y: ProjComplex) -> Optional[ChainMap]:
    """An isomorphism X -> Y between minimal complexes with X indecomposable, or None."""
    if X.label_multisets() != Y.label_multisets():
        return None
    if X.is_zero():
        return identity_map(X)
    H = hom_space(X, Y)
    for k in range(H.dim):
        f = H.rep(k)
        if top_invertible(f):
            return f
    return None


def iso_in_K(X: ProjComplex, Y: ProjComplex, budget: int = 5000) -> bool:
    X = strip_contractibles(X).minimal
    Y = strip_contractibles(Y).minimal
    if X.label_multisets() != Y.label_multisets():
        return False
    if X.is_zero():
        return True
    if is_indecomposable(X):
        return find_iso(X, Y) is not None
    xs = [p.complex for p in decompose(X, budget)]
    ys = [p.complex for p in decompose(Y, budget)]
    if len(xs) != len(ys):
        return False
    unused = list(range(len(ys)))
    for a in xs:
        for k in unused:
            if find_iso(a, ys[k]) is not None:
                unused.remove(k)
                break
        else:
            return False
    return True


def is_retraction(f: ChainMap) -> bool:
    """f: M -> X with X indecomposable: some g: X -> M gives f o g a unit of End(X)."""
    X, M = f.target, f.source
    st = end_structure(X)
    E = st.end
    if E.dim == 0:
        return False
    H = hom_space(X, M)
    for k in range(H.dim):
        c = E.hom.class_of(f.compose(H.rep(k)))
        if E.is_unit(c):
            return True
    return False
