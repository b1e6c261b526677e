"""Catalogs of indecomposable modules and their derived tables.

A catalog lists the pairwise non-isomorphic indecomposables of a module
category of finite type, together with the Hom-dimension matrix, the table
of extension middle terms, and the simple members.  Arbitrary computed
modules are identified as multisets of catalog indices (Krull-Schmidt
labels); the Hom-dimension profile is the memoization key, which is checked
for injectivity on catalog members at build time.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Optional, Sequence

from .errors import (
    CapExceeded,
    CatalogError,
    Decomposable,
    DuplicateIso,
    EmptyCatalog,
    ParseError,
    ShapeError,
    UnknownModule,
)
from .linalg import Mat, Subspace, nullspace, rref
from .rep import (
    Algebra,
    Morphism,
    Rep,
    SubRep,
    all_submodules,
    direct_sum,
    hom_basis,
    hom_dim,
    image,
    is_isomorphic,
    kernel,
    morphism_from_coeffs,
    quotient,
    sub_to_rep,
    validate,
)

ModuleId = tuple  # sorted tuple of catalog indices, with multiplicity

EXT_COSET_CAP = 16
ISO_SEARCH_CAP = 1 << 16
END_ENUM_CAP = 1 << 16


def mid_from_counts(counts: dict[int, int]) -> ModuleId:
    out = []
    for idx in sorted(counts):
        out.extend([idx] * counts[idx])
    return tuple(out)


def mid_counts(mid: ModuleId) -> dict[int, int]:
    counts: dict[int, int] = {}
    for idx in mid:
        counts[idx] = counts.get(idx, 0) + 1
    return counts


def mid_add(a: ModuleId, b: ModuleId) -> ModuleId:
    return tuple(sorted(a + b))


class Catalog:
    """Immutable-after-build list of indecomposables with derived tables."""

    def __init__(self, algebra: Algebra, indecs: Sequence[Rep], names: Sequence[str],
                 complete: bool = False, trusted_indecomposable: bool = False):
        if not indecs:
            raise EmptyCatalog("a catalog needs at least one indecomposable")
        self.algebra = algebra
        self.indecs = tuple(indecs)
        self.names = tuple(names)
        self.complete = complete
        if len(self.names) != len(self.indecs):
            raise CatalogError("one name per indecomposable required")
        if len(set(self.names)) != len(self.names):
            raise CatalogError("duplicate module names")
        self._name_index = {n: i for i, n in enumerate(self.names)}
        for k, m in enumerate(self.indecs):
            if m.algebra != algebra:
                raise CatalogError(f"module {self.names[k]} is over a different algebra")
            msg = validate(m)
            if msg is not None:
                raise CatalogError(f"module {self.names[k]}: {msg}")
            if m.total_dim == 0:
                raise Decomposable(k, f"module {self.names[k]} is the zero module")
        self._rep_cache: dict[ModuleId, Rep] = {}
        self._id_cache: dict = {}
        self._hom_bases: dict[tuple[int, int], list[Morphism]] = {}
        n = len(self.indecs)
        for i in range(n):
            for j in range(n):
                self._hom_bases[(i, j)] = hom_basis(self.indecs[i], self.indecs[j])
        self.hom_dims = tuple(
            tuple(len(self._hom_bases[(i, j)]) for j in range(n)) for i in range(n)
        )
        self._check_entries(trusted_indecomposable)
        self._hinv = _invert_over_rationals(self.hom_dims)
        self.simples = tuple(k for k, m in enumerate(self.indecs) if m.total_dim == 1)
        self._vertex_simple = self._map_vertex_simples()
        self.ext_table: dict[tuple[int, int], frozenset] = {}
        for i in range(n):
            for j in range(n):
                self.ext_table[(i, j)] = frozenset(self._ext_middles(i, j))
        self._mu = tuple(
            tuple(self._mu_bound(i, j) for j in range(n)) for i in range(n)
        )
        self.saturation = tuple(
            max(1, max(self._mu[i][j] for j in range(n))) for i in range(n)
        )
        self._subq_cache: dict[int, frozenset[int]] = {}
        self._closure_memo: dict = {}
        self._opposite: Optional["Catalog"] = None

    # -- basic queries ------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.indecs)

    def name_of(self, idx: int) -> str:
        return self.names[idx]

    def index_of(self, name: str) -> int:
        if name not in self._name_index:
            raise ShapeError(f"unknown module name {name!r}")
        return self._name_index[name]

    def hom_pair_basis(self, i: int, j: int) -> list[Morphism]:
        return self._hom_bases[(i, j)]

    def mu_bound(self, i: int, j: int) -> int:
        return self._mu[i][j]

    def rep_of(self, mid: ModuleId) -> Rep:
        """Assembled direct sum of the multiset, memoized."""
        mid = tuple(sorted(mid))
        if mid not in self._rep_cache:
            self._rep_cache[mid] = direct_sum(self.algebra, [self.indecs[k] for k in mid]).rep
        return self._rep_cache[mid]

    def dims_of(self, mid: ModuleId) -> tuple[int, ...]:
        dims = [0] * self.algebra.n_vertices
        for k in mid:
            for v, d in enumerate(self.indecs[k].dims):
                dims[v] += d
        return tuple(dims)

    # -- build-time verification ------------------------------------------------

    def _check_entries(self, trusted_indecomposable: bool) -> None:
        n = self.n
        profiles = [tuple(self.hom_dims[k][j] for k in range(n)) for j in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if is_isomorphic(self.indecs[i], self.indecs[j], ISO_SEARCH_CAP):
                    raise DuplicateIso(
                        f"modules {self.names[i]} and {self.names[j]} are isomorphic"
                    )
                if profiles[i] == profiles[j]:
                    raise CatalogError(
                        f"modules {self.names[i]} and {self.names[j]} share a Hom profile"
                    )
        if trusted_indecomposable:
            return
        for k, m in enumerate(self.indecs):
            e = find_nontrivial_idempotent(m, END_ENUM_CAP)
            if e is not None:
                raise Decomposable(k, f"module {self.names[k]} splits: End contains an idempotent")

    def _map_vertex_simples(self) -> tuple[Optional[int], ...]:
        out: list[Optional[int]] = [None] * self.algebra.n_vertices
        for k in self.simples:
            dims = self.indecs[k].dims
            v = dims.index(1)
            if out[v] is not None:
                raise CatalogError("two simples at one vertex; presentation is not admissible")
            out[v] = k
        return tuple(out)

    # -- extension middle terms --------------------------------------------------

    def _ext_middles(self, i: int, j: int, cap: int = EXT_COSET_CAP) -> set:
        """Middle terms of all extensions with submodule indec_i and quotient indec_j.

        The middle is parameterized on blocks [[L_a, theta_a], [0, N_a]]; the
        relation constraints make the admissible theta a linear space, and
        theta differing by L*s - s*N give isomorphic middles, so enumeration
        runs over coset representatives of that coboundary subspace.
        """
        alg = self.algebra
        p = alg.p
        L, N = self.indecs[i], self.indecs[j]
        offs = []
        total = 0
        for a in alg.arrows:
            offs.append(total)
            total += L.dims[a.target] * N.dims[a.source]

        def theta_index(arrow_idx: int, r: int, c: int) -> int:
            a = alg.arrows[arrow_idx]
            return offs[arrow_idx] + r * N.dims[a.source] + c

        rows = []
        for rel in alg.relations:
            block_rows = L.dims[rel.target]
            block_cols = N.dims[rel.source]
            coeff_rows = [[0] * total for _ in range(block_rows * block_cols)]
            for coeff, path in rel.terms:
                if coeff == 0:
                    continue
                for t in range(len(path)):
                    pre = path[:t]
                    post = path[t + 1 :]
                    npre = _path_matrix_or_identity(N, pre, alg.arrows[path[t]].source)
                    lpost = _path_matrix_or_identity(L, post, alg.arrows[path[t]].target)
                    a_t = path[t]
                    tg = alg.arrows[a_t].target
                    sr = alg.arrows[a_t].source
                    for r in range(block_rows):
                        for c in range(block_cols):
                            out_row = coeff_rows[r * block_cols + c]
                            for alpha in range(L.dims[tg]):
                                la = lpost.entry(r, alpha)
                                if la == 0:
                                    continue
                                for beta in range(N.dims[sr]):
                                    nb = npre.entry(beta, c)
                                    if nb == 0:
                                        continue
                                    idx = theta_index(a_t, alpha, beta)
                                    out_row[idx] = (out_row[idx] + coeff * la * nb) % p
            rows.extend(tuple(r) for r in coeff_rows)
        if rows:
            constraint = Mat.from_rows(p, [list(r) for r in rows], ncols=total)
            cocycles = nullspace(constraint)
        else:
            cocycles = Mat.identity(p, total)
        cobound_rows = []
        for v in range(alg.n_vertices):
            for r in range(L.dims[v]):
                for c in range(N.dims[v]):
                    vec = [0] * total
                    for a_idx, a in enumerate(alg.arrows):
                        if a.source == v:
                            for alpha in range(L.dims[a.target]):
                                la = L.mats[a_idx].entry(alpha, r)
                                if la:
                                    idx = theta_index(a_idx, alpha, c)
                                    vec[idx] = (vec[idx] + la) % p
                        if a.target == v:
                            for beta in range(N.dims[a.source]):
                                nb = N.mats[a_idx].entry(c, beta)
                                if nb:
                                    idx = theta_index(a_idx, r, beta)
                                    vec[idx] = (vec[idx] - nb) % p
                    cobound_rows.append(vec)
        cobound = Subspace.span(p, total, cobound_rows) if cobound_rows else Subspace.zero(p, total)
        zspace = Subspace.from_matrix_rows(cocycles)
        if not zspace.contains(cobound):
            raise CatalogError("coboundaries escaped the cocycle space")
        coset_basis = []
        span = cobound
        for r in range(zspace.dim):
            cand = Subspace.from_matrix_rows(Mat(p, 1, total, (zspace.basis.rows[r],)))
            grown = span.add(cand)
            if grown.dim > span.dim:
                coset_basis.append(zspace.basis.rows[r])
                span = grown
        if len(coset_basis) > cap:
            raise CapExceeded(
                f"extension space of dimension {len(coset_basis)} exceeds cap {cap}"
            )
        middles = set()
        for coeffs in product(range(p), repeat=len(coset_basis)):
            theta = [0] * total if p != 2 else 0
            if p == 2:
                for cf, row in zip(coeffs, coset_basis):
                    if cf:
                        theta ^= row
                entries = [(theta >> t) & 1 for t in range(total)]
            else:
                acc = [0] * total
                for cf, row in zip(coeffs, coset_basis):
                    if cf:
                        acc = [(x + cf * y) % p for x, y in zip(acc, row)]
                entries = acc
            middles.add(self.identify(self._assemble_extension(L, N, entries, offs)))
        return middles

    def _assemble_extension(self, L: Rep, N: Rep, theta_entries: Sequence[int],
                            offs: Sequence[int]) -> Rep:
        alg = self.algebra
        p = alg.p
        dims = tuple(L.dims[v] + N.dims[v] for v in range(alg.n_vertices))
        mats = []
        for a_idx, a in enumerate(alg.arrows):
            lt, ns = L.dims[a.target], N.dims[a.source]
            theta_rows = [
                [theta_entries[offs[a_idx] + r * ns + c] for c in range(ns)] for r in range(lt)
            ]
            theta = Mat.from_rows(p, theta_rows, ncols=ns)
            block = Mat.block(
                p,
                [[L.mats[a_idx], theta], [None, N.mats[a_idx]]],
                [L.dims[a.target], N.dims[a.target]],
                [L.dims[a.source], N.dims[a.source]],
            )
            mats.append(block)
        return Rep(alg, dims, tuple(mats))

    def ext_middle_terms(self, i: int, j: int) -> frozenset:
        """All middle-term decompositions for extensions of indec_j by indec_i."""
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise ShapeError("catalog index out of range")
        return self.ext_table[(i, j)]

    # -- identification -----------------------------------------------------------

    def profile(self, m: Rep) -> tuple[int, ...]:
        """Hom dimensions from each catalog member into m."""
        return tuple(hom_dim(self.indecs[k], m) for k in range(self.n))

    def identify(self, m: Rep) -> ModuleId:
        """Multiset of catalog indices with m isomorphic to the matching sum."""
        if m.algebra != self.algebra:
            raise ShapeError("module is over a different algebra")
        if m.total_dim == 0:
            return ()
        prof = self.profile(m)
        key = (m.dims, prof)
        if self.complete and key in self._id_cache:
            return self._id_cache[key]
        mid = self._identify_uncached(m, prof)
        if self.complete:
            self._id_cache[key] = mid
        return mid

    def identify_sub(self, s: SubRep) -> ModuleId:
        if s.total_dim == 0:
            return ()
        return self.identify(sub_to_rep(s)[0])

    def _identify_uncached(self, m: Rep, prof: tuple[int, ...]) -> ModuleId:
        if self._hinv is not None:
            mults = _apply_rational(self._hinv, prof)
            if mults is not None and all(x >= 0 for x in mults):
                counts = {k: int(x) for k, x in enumerate(mults) if x}
                mid = mid_from_counts(counts)
                if self.dims_of(mid) == m.dims:
                    if self.complete:
                        return mid
                    if is_isomorphic(m, self.rep_of(mid), ISO_SEARCH_CAP):
                        return mid
        return self._identify_by_splitting(m)

    def _identify_by_splitting(self, m: Rep) -> ModuleId:
        """Recursive idempotent splitting, then matching each indec summand."""
        e = find_nontrivial_idempotent(m, END_ENUM_CAP)
        if e is not None:
            lhs, _ = sub_to_rep(image(e))
            rhs, _ = sub_to_rep(kernel(e))
            return mid_add(self._identify_by_splitting(lhs), self._identify_by_splitting(rhs))
        for k, cand in enumerate(self.indecs):
            if cand.dims == m.dims and is_isomorphic(m, cand, ISO_SEARCH_CAP):
                return (k,)
        raise UnknownModule(
            f"indecomposable of dimension vector {m.dims} is not in the catalog"
        )

    # -- composition factors ---------------------------------------------------------

    def composition_factors(self, m: Rep) -> ModuleId:
        """Multiset of simple indices; the dimension vector read against vertex simples."""
        out: dict[int, int] = {}
        for v, d in enumerate(m.dims):
            if d == 0:
                continue
            k = self._vertex_simple[v]
            if k is None:
                raise UnknownModule(f"no simple at vertex {self.algebra.vertices[v]} in the catalog")
            out[k] = out.get(k, 0) + d
        return mid_from_counts(out)

    # -- submodule and quotient classes ------------------------------------------------

    def subquotient_indices(self, i: int) -> frozenset[int]:
        """Catalog indices appearing in submodules or quotients of indec_i."""
        if i not in self._subq_cache:
            found: set[int] = set()
            m = self.indecs[i]
            for s in all_submodules(m):
                found.update(self.identify_sub(s))
                q, _ = quotient(m, s)
                found.update(self.identify(q))
            self._subq_cache[i] = frozenset(found)
        return self._subq_cache[i]

    # -- source multiplicity reduction bounds -------------------------------------------

    def _mu_bound(self, i: int, j: int) -> int:
        """How many copies of indec_i a morphism into indec_j can need.

        Any map from indec_i^m into indec_j can be column-reduced by an
        automorphism of the source so that at most mu copies act nontrivially,
        where mu bounds the generator count of every End(indec_i)-submodule of
        Hom(indec_i, indec_j).  dim Hom is always a safe fallback.
        """
        h = len(self._hom_bases[(i, j)])
        if h <= 1:
            return h
        p = self.algebra.p
        ebasis = self._hom_bases[(i, i)]
        de = len(ebasis)
        if de > 8 or h > 5 or p**de > 4096 or (p > 2 and h > 3):
            return h
        homs = self._hom_bases[(i, j)]
        src = self.indecs[i]
        from .rep import morphism_coords

        actions = []
        for e in ebasis:
            rows = [morphism_coords(homs, homs[k].compose(e)) for k in range(h)]
            actions.append(Mat.from_rows(p, [list(r) for r in rows], ncols=h))
        nonunits = []
        for coeffs in product(range(p), repeat=de):
            f = morphism_from_coeffs(ebasis, coeffs, src, src)
            if not all(rref(c).rank == d for c, d in zip(f.comps, src.dims)):
                nonunits.append(list(coeffs))
        rad = Subspace.span(p, de, nonunits)
        if p**rad.dim != len(nonunits):
            return h
        residue_dim = de - rad.dim
        rad_actions = []
        for r in range(rad.dim):
            coeffs = rad.basis.row_entries(r)
            acc = Mat.zeros(p, h, h)
            for c, act in zip(coeffs, actions):
                if c:
                    acc = acc.add(act.scale(c))
            rad_actions.append(acc)
        best = 1
        for w in _enumerate_subspaces(p, h):
            if w.dim == 0:
                continue
            if not all(
                w.contains(Subspace.from_matrix_rows(w.basis.mul(act))) for act in actions
            ):
                continue
            wrad = Subspace.zero(p, h)
            for act in rad_actions:
                wrad = wrad.add(Subspace.from_matrix_rows(w.basis.mul(act)))
            over = w.dim - wrad.dim
            if over % residue_dim:
                return h
            best = max(best, over // residue_dim)
        return best

    # -- opposite catalog ------------------------------------------------------------

    def opposite(self) -> "Catalog":
        """Catalog over the opposite algebra: arrows reversed, matrices transposed."""
        if self._opposite is None:
            alg_op = self.algebra.opposite()
            reps = []
            for m in self.indecs:
                mats = tuple(mat.transpose() for mat in m.mats)
                reps.append(Rep(alg_op, m.dims, mats))
            self._opposite = Catalog(alg_op, reps, self.names, complete=self.complete,
                                     trusted_indecomposable=True)
        return self._opposite

    # -- serialization -----------------------------------------------------------------

    def to_json(self) -> dict:
        alg = self.algebra
        return {
            "algebra": algebra_to_json(alg),
            "indecomposables": [
                {
                    "name": self.names[k],
                    "dims": {alg.vertices[v]: m.dims[v] for v in range(alg.n_vertices)},
                    "matrices": {
                        a.name: m.mats[ai].to_lists() for ai, a in enumerate(alg.arrows)
                    },
                }
                for k, m in enumerate(self.indecs)
            ],
            "hom_dims": [list(row) for row in self.hom_dims],
            "simples": [self.names[k] for k in self.simples],
            "ext_table": [
                {
                    "sub": self.names[i],
                    "quot": self.names[j],
                    "middles": sorted(
                        sorted(self.names[k] for k in mid) for mid in self.ext_table[(i, j)]
                    ),
                }
                for i in range(self.n)
                for j in range(self.n)
            ],
        }


# -- helpers --------------------------------------------------------------------------


def _path_matrix_or_identity(rep: Rep, path: Sequence[int], endpoint: int) -> Mat:
    """Path matrix on rep, or the identity on the given vertex for empty paths."""
    if not path:
        return Mat.identity(rep.algebra.p, rep.dims[endpoint])
    from .rep import path_matrix

    return path_matrix(rep, path)


def find_nontrivial_idempotent(m: Rep, cap: int = END_ENUM_CAP) -> Optional[Morphism]:
    """A non-zero, non-identity idempotent endomorphism, if one exists.

    Enumerates the endomorphism space; raises CapExceeded when p^dim End
    exceeds the cap.
    """
    if m.total_dim == 0:
        return None
    basis = hom_basis(m, m)
    p = m.algebra.p
    if p ** len(basis) > cap:
        raise CapExceeded(f"End space of dimension {len(basis)} exceeds idempotent search cap")
    ident = Morphism.identity(m).comps
    for coeffs in product(range(p), repeat=len(basis)):
        if not any(coeffs):
            continue
        e = morphism_from_coeffs(basis, coeffs, m, m)
        if e.comps == ident:
            continue
        sq = tuple(c.mul(c2) for c, c2 in zip(e.comps, e.comps))
        if sq == e.comps:
            return e
    return None


def _invert_over_rationals(rows: Sequence[Sequence[int]]) -> Optional[list[list[Fraction]]]:
    """Exact inverse of an integer matrix, or None when singular."""
    n = len(rows)
    aug = [[Fraction(rows[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if aug[i][col] != 0), None)
        if piv is None:
            return None
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][col]
        aug[r] = [x / inv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][col] != 0:
                c = aug[i][col]
                aug[i] = [x - c * y for x, y in zip(aug[i], aug[r])]
        r += 1
    return [row[n:] for row in aug]


def _apply_rational(hinv: list[list[Fraction]], vec: Sequence[int]) -> Optional[tuple[int, ...]]:
    """hinv @ vec when the result is a tuple of integers, else None."""
    out = []
    for row in hinv:
        val = sum(c * v for c, v in zip(row, vec))
        if val.denominator != 1:
            return None
        out.append(int(val))
    return tuple(out)


# -- subspace enumeration (for the mu bounds) -------------------------------------------


def _enumerate_subspaces(p: int, dim: int) -> list[Subspace]:
    """All subspaces of F_p^dim by breadth-first span growth (small dim only)."""
    zero = Subspace.zero(p, dim)
    if p == 2:
        vectors = list(range(1, 1 << dim))
    else:
        vectors = [v for v in product(range(p), repeat=dim) if any(v)]
    seen = {zero.basis.rows: zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for sp in frontier:
            for vec in vectors:
                if sp.has_vector(vec):
                    continue
                grown = sp.add(Subspace.from_matrix_rows(Mat(p, 1, dim, (vec,))))
                if grown.basis.rows not in seen:
                    seen[grown.basis.rows] = grown
                    nxt.append(grown)
        frontier = nxt
    return list(seen.values())


# -- builtin catalogs --------------------------------------------------------------------


def _interval_rep(alg: Algebra, n: int, a: int, b: int) -> Rep:
    """Interval module on vertices a..b (1-based), identity arrows inside."""
    dims = tuple(1 if a <= v + 1 <= b else 0 for v in range(n))
    mats = []
    for arr in alg.arrows:
        lo, hi = min(arr.source, arr.target) + 1, max(arr.source, arr.target) + 1
        if a <= lo and hi <= b:
            mats.append(Mat.identity(alg.p, 1))
        else:
            mats.append(Mat.zeros(alg.p, dims[arr.target], dims[arr.source]))
    return Rep(alg, dims, tuple(mats))


def _build_an(n: int, word: str, p: int, letter_names: bool = False) -> Catalog:
    if n < 1:
        raise ParseError(f"a_n needs n >= 1, got {n}")
    if len(word) != max(n - 1, 0):
        raise ParseError(f"orientation word must have length {n - 1}, got {word!r}")
    vertices = [str(i + 1) for i in range(n)]
    arrows = []
    for k, ch in enumerate(word):
        if ch == ">":
            arrows.append((f"a{k + 1}", str(k + 1), str(k + 2)))
        elif ch == "<":
            arrows.append((f"a{k + 1}", str(k + 2), str(k + 1)))
        else:
            raise ParseError(f"orientation word may only contain '>' and '<', got {ch!r}")
    alg = Algebra.build(p, vertices, arrows)
    if letter_names:
        intervals = [(2, 2), (1, 2), (1, 1)]
        names = ["A", "B", "C"]
    else:
        intervals = [(a, b) for a in range(1, n + 1) for b in range(a, n + 1)]
        names = [f"[{a}-{b}]" for a, b in intervals]
    reps = [_interval_rep(alg, n, a, b) for a, b in intervals]
    return Catalog(alg, reps, names, complete=True, trusted_indecomposable=True)


def _build_uniserial(n: int, p: int) -> Catalog:
    if n < 1:
        raise ParseError(f"uniserial needs n >= 1, got {n}")
    alg = Algebra.build(p, ["1"], [("x", "1", "1")], [[(1, ["x"] * n)]])
    reps = []
    for i in range(1, n + 1):
        rows = [[1 if c == r - 1 else 0 for c in range(i)] for r in range(i)]
        reps.append(Rep(alg, (i,), (Mat.from_rows(p, rows, ncols=i),)))
    names = [f"M{i}" for i in range(1, n + 1)]
    return Catalog(alg, reps, names, complete=True, trusted_indecomposable=True)


def build_builtin(descriptor: str, p: int = 2) -> Catalog:
    """Construct a builtin catalog from a descriptor string.

    Supported: ``a2``, ``a3``, ``an:<n>``, ``an:<n>:<word>`` with a word over
    ``>``/``<``, and ``uniserial:<n>``.
    """
    parts = descriptor.split(":")
    kind = parts[0].lower()
    if kind == "a2" and len(parts) == 1:
        return _build_an(2, ">", p, letter_names=True)
    if kind == "a3" and len(parts) == 1:
        return _build_an(3, ">>", p)
    if kind == "an":
        if len(parts) == 2:
            n = _parse_int(parts[1], descriptor)
            return _build_an(n, ">" * (n - 1), p)
        if len(parts) == 3:
            n = _parse_int(parts[1], descriptor)
            return _build_an(n, parts[2], p)
        raise ParseError(f"bad builtin descriptor {descriptor!r}")
    if kind == "uniserial" and len(parts) == 2:
        return _build_uniserial(_parse_int(parts[1], descriptor), p)
    raise ParseError(f"unknown builtin descriptor {descriptor!r}")


def _parse_int(text: str, context: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected an integer in {context!r}") from None


# -- JSON formats ---------------------------------------------------------------------------


def algebra_to_json(alg: Algebra) -> dict:
    return {
        "field_char": alg.p,
        "vertices": list(alg.vertices),
        "arrows": [
            {"name": a.name, "from": alg.vertices[a.source], "to": alg.vertices[a.target]}
            for a in alg.arrows
        ],
        "relations": [
            [
                {"coeff": coeff, "path": [alg.arrows[t].name for t in path]}
                for coeff, path in rel.terms
            ]
            for rel in alg.relations
        ],
    }


def load_algebra(path: str | Path) -> Algebra:
    """Parse an algebra presentation from its JSON file format."""
    path = Path(path)
    data = _read_json(path)
    try:
        p = int(data["field_char"])
        vertices = [str(v) for v in data["vertices"]]
        arrows = [(str(a["name"]), str(a["from"]), str(a["to"])) for a in data.get("arrows", [])]
        relations = [
            [(int(term["coeff"]), [str(x) for x in term["path"]]) for term in rel]
            for rel in data.get("relations", [])
        ]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{path}: malformed algebra file ({exc})") from None
    try:
        return Algebra.build(p, vertices, arrows, relations)
    except ShapeError as exc:
        raise ParseError(f"{path}: {exc}") from None


def load_module(algebra: Algebra, path: str | Path) -> Rep:
    """Parse one module from its JSON file format and reduce entries mod p."""
    path = Path(path)
    data = _read_json(path)
    dims_map = data.get("dims", {})
    mats_map = data.get("matrices", {})
    stray_v = set(dims_map) - set(algebra.vertices)
    if stray_v:
        raise ParseError(f"{path}: unknown vertex names {sorted(stray_v)}")
    stray_a = set(mats_map) - {a.name for a in algebra.arrows}
    if stray_a:
        raise ParseError(f"{path}: unknown arrow names {sorted(stray_a)}")
    try:
        dims = tuple(int(dims_map.get(v, 0)) for v in algebra.vertices)
        mats = []
        for a in algebra.arrows:
            want_rows, want_cols = dims[a.target], dims[a.source]
            raw = mats_map.get(a.name)
            if raw is None or raw == []:
                mats.append(Mat.zeros(algebra.p, want_rows, want_cols))
                continue
            entries = [[int(x) % algebra.p for x in row] for row in raw]
            if len(entries) != want_rows or any(len(r) != want_cols for r in entries):
                raise ParseError(
                    f"{path}: matrix for arrow {a.name} must be {want_rows}x{want_cols}"
                )
            mats.append(Mat.from_rows(algebra.p, entries, ncols=want_cols))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed module file ({exc})") from None
    rep = Rep(algebra, dims, tuple(mats))
    msg = validate(rep)
    if msg is not None:
        raise CatalogError(f"{path}: {msg}")
    return rep


def load_catalog(algebra_path: str | Path, module_paths: Sequence[str | Path]) -> Catalog:
    """Build a catalog from an algebra file plus one JSON file per indecomposable."""
    algebra = load_algebra(algebra_path)
    if not module_paths:
        raise EmptyCatalog("no module files given")
    reps = []
    names = []
    for mp in module_paths:
        reps.append(load_module(algebra, mp))
        names.append(Path(mp).stem)
    return Catalog(algebra, reps, names, complete=False)


def _read_json(path: Path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ParseError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


# -- operation-style wrappers -------------------------------------------------------------------


def opposite_catalog(cat: Catalog) -> Catalog:
    return cat.opposite()


def ext_middle_terms(cat: Catalog, i: int, j: int) -> frozenset:
    return cat.ext_middle_terms(i, j)


def identify(cat: Catalog, m: Rep) -> ModuleId:
    return cat.identify(m)


def composition_factors(cat: Catalog, m: Rep) -> ModuleId:
    return cat.composition_factors(m)
