"""Closure operators on subcategories: trace, reject, torsion-theoretic hulls.

A subcategory is a bitset of catalog indices, read as the additive closure
of the selected indecomposables (so it always contains the zero module and
is closed under finite sums and summands).  The torsion closure of a set C
is computed by iterated trace quotients: the trace of C in X is a quotient
of a sum of C-objects, so a chain X, X/tr, (X/tr)/tr', ... that reaches 0
exhibits a filtration of X with layers that are quotients of C-objects;
conversely the class of such filtered modules is itself closed under
quotients and extensions and contains a nonzero first layer inside every
member's trace, which forces strict descent.  The literal filtration-search
oracle `filt_contains` stays available as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .catalog import Catalog, ModuleId, mid_counts
from .errors import NotTorsionFree, ShapeError
from .linalg import Subspace
from .rep import (
    Rep,
    SubRep,
    all_submodules,
    hom_basis,
    image,
    kernel,
    quotient,
    sub_to_rep,
    SUBMODULE_DIM_CAP,
)


@dataclass(frozen=True)
class SubcatBits:
    """A subcategory of mod Lambda, encoded by its set of indecomposables."""

    catalog: Catalog
    bits: int

    @staticmethod
    def empty(catalog: Catalog) -> "SubcatBits":
        return SubcatBits(catalog, 0)

    @staticmethod
    def full(catalog: Catalog) -> "SubcatBits":
        return SubcatBits(catalog, (1 << catalog.n) - 1)

    @staticmethod
    def of(catalog: Catalog, indices: Iterable[int]) -> "SubcatBits":
        bits = 0
        for i in indices:
            if not 0 <= i < catalog.n:
                raise ShapeError(f"catalog index {i} out of range")
            bits |= 1 << i
        return SubcatBits(catalog, bits)

    @staticmethod
    def from_names(catalog: Catalog, names: Iterable[str]) -> "SubcatBits":
        return SubcatBits.of(catalog, (catalog.index_of(n) for n in names))

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.catalog.n) if (self.bits >> i) & 1)

    def names(self) -> tuple[str, ...]:
        return tuple(self.catalog.names[i] for i in self.indices())

    def has(self, idx: int) -> bool:
        return bool((self.bits >> idx) & 1)

    def contains_id(self, mid: ModuleId) -> bool:
        return all(self.has(i) for i in mid_counts(mid))

    @property
    def size(self) -> int:
        return bin(self.bits).count("1")

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    @property
    def is_full(self) -> bool:
        return self.bits == (1 << self.catalog.n) - 1

    def union(self, other: "SubcatBits") -> "SubcatBits":
        self._check(other)
        return SubcatBits(self.catalog, self.bits | other.bits)

    def intersect(self, other: "SubcatBits") -> "SubcatBits":
        self._check(other)
        return SubcatBits(self.catalog, self.bits & other.bits)

    def issubset(self, other: "SubcatBits") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def _check(self, other: "SubcatBits") -> None:
        if self.catalog is not other.catalog:
            raise ShapeError("subcategories over different catalogs")

    def label(self) -> str:
        return "{" + ", ".join(self.names()) + "}"


# -- trace and reject ------------------------------------------------------------


def trace(c: SubcatBits, m: Rep) -> SubRep:
    """Largest submodule of m that is a quotient of a finite sum of C-objects.

    The image of the evaluation map: the vertexwise sum of the images of all
    basis morphisms from members of C into m.
    """
    cat = c.catalog
    p = cat.algebra.p
    spaces = [Subspace.zero(p, d) for d in m.dims]
    for i in c.indices():
        for f in hom_basis(cat.indecs[i], m):
            for v, im in enumerate(image(f).spaces):
                if im.dim:
                    spaces[v] = spaces[v].add(im)
    return SubRep(m, tuple(spaces))


def reject(c: SubcatBits, m: Rep) -> SubRep:
    """Smallest submodule of m whose quotient embeds into a product of C-objects.

    The intersection of the kernels of all basis morphisms from m into
    members of C.
    """
    cat = c.catalog
    p = cat.algebra.p
    spaces = [Subspace.full(p, d) for d in m.dims]
    for i in c.indices():
        for f in hom_basis(m, cat.indecs[i]):
            for v, ker in enumerate(kernel(f).spaces):
                spaces[v] = spaces[v].intersect(ker)
    return SubRep(m, tuple(spaces))


def fac_contains(c: SubcatBits, x: Rep) -> bool:
    """Is x a quotient of a finite sum of C-objects (the evaluation onto)?"""
    return trace(c, x).is_full


def sub_contains(c: SubcatBits, x: Rep) -> bool:
    """Does x embed into a finite sum of C-objects (the coevaluation in)?"""
    return reject(c, x).is_zero


# -- torsion and torsion-free closures ----------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    module: tuple[str, ...]
    layer_dims: tuple[int, ...]

    def to_json(self) -> dict:
        return {"module": list(self.module), "layer_dims": list(self.layer_dims)}


@dataclass(frozen=True)
class ChainCertificate:
    """Witness for one catalog member's closure test.

    Records the iterated chain down to zero (member) or to the first nonzero
    fixed point (non-member); total dimensions strictly decrease while the
    chain advances.
    """

    kind: str
    start: tuple[str, ...]
    member: bool
    steps: tuple[ChainStep, ...]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "start": list(self.start),
            "member": self.member,
            "steps": [s.to_json() for s in self.steps],
        }


def _member_layer(cat: Catalog, i: int, mid: ModuleId, kind: str):
    """Contribution of one member to the trace (or reject) of a class.

    Depends only on (member, class), so it is shared across all
    subcategories; the chain step joins (or meets) these per-vertex spaces.
    """
    memo = cat._closure_memo.setdefault(("layer", kind), {})
    key = (i, mid)
    if key not in memo:
        rep = cat.rep_of(mid)
        p = cat.algebra.p
        if kind == "tors":
            spaces = [Subspace.zero(p, d) for d in rep.dims]
            for f in hom_basis(cat.indecs[i], rep):
                for v, im in enumerate(image(f).spaces):
                    if im.dim:
                        spaces[v] = spaces[v].add(im)
        else:
            spaces = [Subspace.full(p, d) for d in rep.dims]
            for f in hom_basis(rep, cat.indecs[i]):
                for v, ker in enumerate(kernel(f).spaces):
                    spaces[v] = spaces[v].intersect(ker)
        memo[key] = tuple(spaces)
    return memo[key]


def _chain_next(c: SubcatBits, mid: ModuleId, kind: str) -> tuple[tuple[int, ...], ModuleId]:
    """One chain step on an isomorphism class: (layer dims, next class)."""
    cat = c.catalog
    memo = cat._closure_memo.setdefault((kind, c.bits), {})
    if mid in memo:
        return memo[mid]
    rep = cat.rep_of(mid)
    p = cat.algebra.p
    if kind == "tors":
        spaces = [Subspace.zero(p, d) for d in rep.dims]
        for i in c.indices():
            for v, sp in enumerate(_member_layer(cat, i, mid, kind)):
                if sp.dim:
                    spaces[v] = spaces[v].add(sp)
        layer = SubRep(rep, tuple(spaces))
        nxt_rep, _ = quotient(rep, layer)
        nxt = cat.identify(nxt_rep)
    else:
        spaces = [Subspace.full(p, d) for d in rep.dims]
        for i in c.indices():
            for v, sp in enumerate(_member_layer(cat, i, mid, kind)):
                spaces[v] = spaces[v].intersect(sp)
        layer = SubRep(rep, tuple(spaces))
        nxt = cat.identify_sub(layer)
    out = (layer.dims, nxt)
    memo[mid] = out
    return out


def _chain_member(c: SubcatBits, idx: int, kind: str) -> bool:
    mid: ModuleId = (idx,)
    while mid:
        layer_dims, nxt = _chain_next(c, mid, kind)
        layer_total = sum(layer_dims)
        if kind == "tors":
            if layer_total == 0:
                return False
            mid = nxt
        else:
            if layer_total == sum(c.catalog.dims_of(mid)):
                return False
            mid = nxt
    return True


def chain_certificate(c: SubcatBits, idx: int, kind: str) -> ChainCertificate:
    """Explicit chain for one catalog member, for audit output."""
    cat = c.catalog
    names = lambda mid: tuple(sorted(cat.names[k] for k in mid))
    steps = []
    mid: ModuleId = (idx,)
    member = True
    while mid:
        layer_dims, nxt = _chain_next(c, mid, kind)
        steps.append(ChainStep(names(mid), layer_dims))
        stalled = (
            sum(layer_dims) == 0 if kind == "tors" else sum(layer_dims) == sum(cat.dims_of(mid))
        )
        if stalled:
            member = False
            break
        mid = nxt
    return ChainCertificate(kind, (cat.names[idx],), member, tuple(steps))


def tors_closure(c: SubcatBits) -> SubcatBits:
    """Smallest torsion class containing C, by iterated trace quotients."""
    bits = 0
    for k in range(c.catalog.n):
        if _chain_member(c, k, "tors"):
            bits |= 1 << k
    return SubcatBits(c.catalog, bits)


def torf_closure(c: SubcatBits) -> SubcatBits:
    """Smallest torsion-free class containing C, by iterated rejects."""
    bits = 0
    for k in range(c.catalog.n):
        if _chain_member(c, k, "torf"):
            bits |= 1 << k
    return SubcatBits(c.catalog, bits)


# -- filtration oracle ------------------------------------------------------------------


def filt_contains(cat: Catalog, pred: Callable[[Rep], bool], x: Rep,
                  cap: int = SUBMODULE_DIM_CAP, _memo: Optional[dict] = None) -> bool:
    """Does x have a finite filtration whose layers satisfy pred?

    Literal filtration search over all submodules: true when x is zero, when
    pred(x) holds, or when some nonzero proper submodule satisfies pred and
    the quotient recursively passes.  pred must be isomorphism-invariant;
    results are memoized on the Hom-dimension profile.
    """
    if _memo is None:
        _memo = {}
    if x.total_dim == 0:
        return True
    key = (x.dims, cat.profile(x))
    if key in _memo:
        return _memo[key]
    _memo[key] = False  # cycle guard; dimensions strictly decrease anyway
    result = False
    if pred(x):
        result = True
    else:
        for s in all_submodules(x, cap):
            if s.is_zero or s.is_full:
                continue
            layer, _ = sub_to_rep(s)
            if pred(layer):
                rest, _ = quotient(x, s)
                if filt_contains(cat, pred, rest, cap, _memo):
                    result = True
                    break
    _memo[key] = result
    return result


# -- Serre closure -----------------------------------------------------------------------


def serre_closure(c: SubcatBits) -> SubcatBits:
    """Least fixpoint adding subquotient classes and extension middle terms."""
    cat = c.catalog
    bits = c.bits
    while True:
        add = 0
        idxs = [i for i in range(cat.n) if (bits >> i) & 1]
        for i in idxs:
            for k in cat.subquotient_indices(i):
                add |= 1 << k
        for i in idxs:
            for j in idxs:
                for mid in cat.ext_table[(i, j)]:
                    for k in mid_counts(mid):
                        add |= 1 << k
        if add & ~bits == 0:
            return SubcatBits(cat, bits)
        bits |= add


# -- torsion pairs ------------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionPair:
    tors: SubcatBits
    verified: bool
    witnesses: tuple[dict, ...]


def torsion_pair_complete(f: SubcatBits) -> TorsionPair:
    """Complete a torsion-free class F to the torsion pair (T, F).

    T consists of the catalog members with no morphisms into F.  The result
    is verified by checking Hom(T, F) = 0 on the catalog and, for every
    catalog member X, that the canonical sequence 0 -> t(X) -> X -> X/t(X) -> 0
    has its ends in T and F.
    """
    cat = f.catalog
    if torf_closure(f).bits != f.bits:
        raise NotTorsionFree(f"{f.label()} is not a torsion-free class")
    f_idx = f.indices()
    t_bits = 0
    for k in range(cat.n):
        if all(cat.hom_dims[k][j] == 0 for j in f_idx):
            t_bits |= 1 << k
    t = SubcatBits(cat, t_bits)
    verified = all(cat.hom_dims[i][j] == 0 for i in t.indices() for j in f_idx)
    witnesses = []
    for k in range(cat.n):
        x = cat.indecs[k]
        tr = trace(t, x)
        torsion_part = cat.identify_sub(tr)
        free_part = cat.identify(quotient(x, tr)[0])
        ok = t.contains_id(torsion_part) and f.contains_id(free_part)
        verified = verified and ok
        witnesses.append(
            {
                "module": cat.names[k],
                "torsion_part": sorted(cat.names[i] for i in torsion_part),
                "torsion_free_part": sorted(cat.names[i] for i in free_part),
                "ok": ok,
            }
        )
    return TorsionPair(t, verified, tuple(witnesses))
