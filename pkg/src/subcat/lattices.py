"""Class checkers and lattice enumeration for the seven subcategory kinds.

Checker design, per closure condition:

* extensions: exact on indecomposable pairs via the extension table; an
  extension by a direct sum refines into iterated extensions by the
  summands (pull back along one quotient summand, push out along one
  submodule summand), so pair closure implies full closure.
* images: exact with no caps.  The image of a map between sums of members
  is both a quotient of a sum (full trace) and a submodule of a sum (zero
  reject), and conversely any such module is an image, so closure under
  images reduces to a trace/reject test on each catalog indecomposable.
* kernels: a worklist search over isomorphism classes.  Kernels of maps
  into a sum are iterated kernels of maps into single members, and a map
  from many copies of one indecomposable column-reduces (over its local
  endomorphism ring) so that at most mu copies act nontrivially; the
  per-class multiplicities are therefore capped, with a sticky "many"
  value, without shrinking the set of reachable kernel classes.  Every
  reported violation is a genuine kernel of a morphism between member
  sums.  Sources are seeded within the configured caps; absence of
  violations beyond every finite search is not decidable here, which the
  cap-robustness checks document.
* cokernels: the kernel search on the opposite catalog.

The torsion-theoretic kinds (serre, tors, torf, ie) have exact closure
operators and need none of the above.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Optional

from .catalog import Catalog, ModuleId, mid_add, mid_counts, mid_from_counts
from .closures import (
    SubcatBits,
    fac_contains,
    serre_closure,
    sub_contains,
    torf_closure,
    tors_closure,
)
from .errors import CapExceeded, ShapeError
from .rep import hom_basis, kernel, morphism_from_coeffs

KINDS = ("serre", "tors", "torf", "wide", "ice", "ike", "ie")

INCLUSION_ARROWS = (
    ("serre", "tors"),
    ("serre", "torf"),
    ("serre", "wide"),
    ("torf", "ike"),
    ("tors", "ice"),
    ("wide", "ike"),
    ("wide", "ice"),
    ("ice", "ie"),
    ("ike", "ie"),
)

KERNEL_ENUM_CAP = 1 << 16


@dataclass(frozen=True)
class CheckConfig:
    """Caps for the bounded morphism searches in wide/ice/ike checking."""

    mult_cap: int = 2
    dim_cap: int = 16

    def __post_init__(self):
        if self.mult_cap < 1 or self.dim_cap < 1:
            raise ShapeError("caps must be at least 1")


def _mid_label(cat: Catalog, mid: ModuleId) -> str:
    if not mid:
        return "0"
    return " + ".join(cat.names[k] for k in mid)


# -- letter checks ------------------------------------------------------------------


def _ext_violation(s: SubcatBits) -> Optional[str]:
    cat = s.catalog
    idxs = s.indices()
    for i in idxs:
        for j in idxs:
            for mid in cat.ext_table[(i, j)]:
                if not s.contains_id(mid):
                    return (
                        f"an extension of {cat.names[j]} by {cat.names[i]} has middle "
                        f"term {_mid_label(cat, mid)}"
                    )
    return None


def _image_violation(s: SubcatBits) -> Optional[str]:
    cat = s.catalog
    for k in range(cat.n):
        if s.has(k):
            continue
        x = cat.indecs[k]
        if fac_contains(s, x) and sub_contains(s, x):
            return (
                f"{cat.names[k]} is a quotient of a member sum and embeds into a "
                f"member sum, so it is an image of a morphism between members"
            )
    return None


def _kerstep(cat: Catalog, state: ModuleId, b: int) -> frozenset:
    """Kernel classes of all morphisms from (the core of) state into indec b.

    The core keeps min(mult, mu) copies per indecomposable; the remaining
    copies land in every kernel untouched and are re-added afterwards.
    """
    full_memo = cat._closure_memo.setdefault("kerstep_full", {})
    full_key = (state, b)
    if full_key in full_memo:
        return full_memo[full_key]
    counts = mid_counts(state)
    core_counts = {}
    for i, m in counts.items():
        mu = cat.mu_bound(i, b)
        if mu:
            core_counts[i] = min(m, mu)
    core = mid_from_counts(core_counts)
    memo = cat._closure_memo.setdefault("kerstep", {})
    key = (core, b)
    if key not in memo:
        p = cat.algebra.p
        src = cat.rep_of(core)
        tgt = cat.indecs[b]
        basis = hom_basis(src, tgt)
        if p ** len(basis) > KERNEL_ENUM_CAP:
            raise CapExceeded(
                f"Hom({_mid_label(cat, core)}, {cat.names[b]}) of dimension "
                f"{len(basis)} exceeds the kernel search budget"
            )
        kernels = {}
        for coeffs in product(range(p), repeat=len(basis)):
            if not any(coeffs):
                continue
            v = morphism_from_coeffs(basis, coeffs, src, tgt)
            ker = kernel(v)
            kernels.setdefault(ker.key(), ker)
        memo[key] = frozenset(cat.identify_sub(k) for k in kernels.values())
    surplus = {i: m - core_counts.get(i, 0) for i, m in counts.items()}
    surplus_mid = mid_from_counts({i: m for i, m in surplus.items() if m})
    result = frozenset(mid_add(kid, surplus_mid) for kid in memo[key])
    full_memo[full_key] = result
    return result


def _sticky_cap(cat: Catalog, mid: ModuleId) -> ModuleId:
    """Cap multiplicities at saturation + 1; the top value means "many"."""
    memo = cat._closure_memo.setdefault("sticky", {})
    if mid not in memo:
        capped = {}
        for i, m in mid_counts(mid).items():
            if m:
                capped[i] = min(m, cat.saturation[i] + 1)
        memo[mid] = mid_from_counts(capped)
    return memo[mid]


def _seed_states(cat: Catalog, cfg: CheckConfig) -> list[tuple[int, int, ModuleId]]:
    """Sticky-capped seed multisets over the whole catalog, within the caps.

    Multiplicities beyond saturation + 1 are redundant for kernel classes, so
    seeds stop there; the dimension cap is applied to that minimal
    representative.  Returns (support mask, total dim, state), memoized.
    """
    memo = cat._closure_memo.setdefault("seeds", {})
    key = (cfg.mult_cap, cfg.dim_cap)
    if key not in memo:
        dims = [m.total_dim for m in cat.indecs]
        caps = [min(cfg.mult_cap, cat.saturation[i] + 1) for i in range(cat.n)]
        seeds: list[tuple[int, int, ModuleId]] = []

        def rec(i: int, counts: dict, used: int, mask: int) -> None:
            if i == cat.n:
                if counts:
                    seeds.append((mask, used, mid_from_counts(counts)))
                return
            rec(i + 1, counts, used, mask)
            for m in range(1, caps[i] + 1):
                total = used + m * dims[i]
                if total > cfg.dim_cap:
                    break
                counts[i] = m
                rec(i + 1, counts, total, mask | (1 << i))
            counts.pop(i, None)

        rec(0, {}, 0, 0)
        memo[key] = seeds
    return memo[key]


def _generator_states(s: SubcatBits, cfg: CheckConfig) -> set:
    """Dominance-maximal seed states supported on the members.

    A seed below another (entrywise) only produces kernel classes that ride
    along inside the larger seed's search with surplus summands attached, so
    only maximal seeds need exploring.
    """
    cat = s.catalog
    dims = [m.total_dim for m in cat.indecs]
    caps = [min(cfg.mult_cap, cat.saturation[i] + 1) for i in range(cat.n)]
    member_idxs = s.indices()
    gens: set = set()
    for mask, used, state in _seed_states(cat, cfg):
        if mask & ~s.bits:
            continue
        counts = mid_counts(state)
        maximal = all(
            counts.get(i, 0) == caps[i] or used + dims[i] > cfg.dim_cap
            for i in member_idxs
        )
        if maximal:
            gens.add(state)
    return gens


def _kernel_violation(s: SubcatBits, cfg: CheckConfig, dual: bool = False) -> Optional[str]:
    """Search for a kernel of a member-sum morphism outside the subcategory.

    Worklist over sticky-capped isomorphism classes; iterating single-target
    kernel steps covers kernels of maps into arbitrary member sums, since
    those are iterated kernels of the restrictions.
    """
    if s.is_empty:
        return None
    cat = s.catalog
    memo = cat._closure_memo.setdefault(("kviol", cfg.mult_cap, cfg.dim_cap), {})
    if s.bits in memo:
        hit = memo[s.bits]
    else:
        hit = None
        targets = s.indices()
        seen = _generator_states(s, cfg)
        frontier = sorted(seen)
        while frontier and hit is None:
            state = frontier.pop()
            for b in targets:
                for kid in _kerstep(cat, state, b):
                    bad = [k for k in sorted(set(kid)) if not s.has(k)]
                    if bad:
                        hit = (state, b, kid)
                        break
                    capped = _sticky_cap(cat, kid)
                    if capped and capped not in seen:
                        seen.add(capped)
                        frontier.append(capped)
                if hit is not None:
                    break
        memo[s.bits] = hit
    if hit is None:
        return None
    state, b, kid = hit
    if dual:
        return (
            f"a morphism {cat.names[b]} -> {_mid_label(cat, state)} between member sums "
            f"has cokernel {_mid_label(cat, kid)}, outside the subcategory"
        )
    return (
        f"a morphism {_mid_label(cat, state)} -> {cat.names[b]} between member sums "
        f"has kernel {_mid_label(cat, kid)}, outside the subcategory"
    )


def _cokernel_violation(s: SubcatBits, cfg: CheckConfig) -> Optional[str]:
    """Cokernels are kernels in the opposite catalog (same index order)."""
    op = s.catalog.opposite()
    return _kernel_violation(SubcatBits(op, s.bits), cfg, dual=True)


# -- is_closed ------------------------------------------------------------------------


def is_closed(kind: str, s: SubcatBits, cfg: Optional[CheckConfig] = None) -> tuple[bool, Optional[str]]:
    """Is the subcategory closed for the given kind; if not, why not.

    serre/tors/torf/ie are decided exactly through closure operators; the
    wide/ice/ike letter checks combine the exact extension and image tests
    with the bounded kernel/cokernel search.
    """
    cfg = cfg or CheckConfig()
    if kind not in KINDS:
        raise ShapeError(f"unknown subcategory kind {kind!r}")
    if kind == "serre":
        closed = serre_closure(s)
        if closed.bits != s.bits:
            return False, f"closure adds {_added_names(s, closed)}"
        return True, None
    if kind == "tors":
        closed = tors_closure(s)
        if closed.bits != s.bits:
            return False, f"closure adds {_added_names(s, closed)}"
        return True, None
    if kind == "torf":
        closed = torf_closure(s)
        if closed.bits != s.bits:
            return False, f"closure adds {_added_names(s, closed)}"
        return True, None
    if kind == "ie":
        meet = tors_closure(s).intersect(torf_closure(s))
        if meet.bits != s.bits:
            return False, (
                f"the torsion and torsion-free closures meet in {meet.label()}, "
                f"not {s.label()}"
            )
        return True, None
    checks: list[Callable[[], Optional[str]]] = [lambda: _ext_violation(s)]
    if kind in ("ice", "ike"):
        checks.append(lambda: _image_violation(s))
    if kind in ("wide", "ike"):
        checks.append(lambda: _kernel_violation(s, cfg))
    if kind in ("wide", "ice"):
        checks.append(lambda: _cokernel_violation(s, cfg))
    for check in checks:
        witness = check()
        if witness is not None:
            return False, witness
    return True, None


def _added_names(s: SubcatBits, closed: SubcatBits) -> str:
    extra = [s.catalog.names[i] for i in closed.indices() if not s.has(i)]
    return "{" + ", ".join(extra) + "}"


# -- families -------------------------------------------------------------------------


@dataclass(frozen=True)
class Family:
    """All subcategories of one kind over a catalog, sorted by (size, bitset)."""

    kind: str
    catalog: Catalog
    members: tuple[SubcatBits, ...]
    config: CheckConfig = field(default_factory=CheckConfig)

    @property
    def count(self) -> int:
        return len(self.members)

    def bitsets(self) -> frozenset[int]:
        return frozenset(m.bits for m in self.members)

    def member_names(self) -> list[tuple[str, ...]]:
        return [m.names() for m in self.members]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "count": self.count,
            "members": [list(m.names()) for m in self.members],
            "checker_config": {
                "mult_cap": self.config.mult_cap,
                "dim_cap": self.config.dim_cap,
            },
        }


def _sorted_members(cat: Catalog, bitsets: Iterable[int]) -> tuple[SubcatBits, ...]:
    ordered = sorted(set(bitsets), key=lambda b: (bin(b).count("1"), b))
    return tuple(SubcatBits(cat, b) for b in ordered)


def _closure_operator(kind: str, cat: Catalog) -> Callable[[int], int]:
    ops = {"serre": serre_closure, "tors": tors_closure, "torf": torf_closure}
    op = ops[kind]
    return lambda bits: op(SubcatBits(cat, bits)).bits


def _next_closure_enum(cl: Callable[[int], int], n: int) -> list[int]:
    """All closed bitsets in lectic order (Ganter's algorithm)."""
    out = []
    current = cl(0)
    out.append(current)
    while True:
        a = current
        nxt = None
        for i in reversed(range(n)):
            if (a >> i) & 1:
                a &= ~(1 << i)
            else:
                b = cl(a | (1 << i))
                if b & ((1 << i) - 1) & ~a == 0:
                    nxt = b
                    break
        if nxt is None:
            return out
        out.append(nxt)
        current = nxt


def enumerate_family(cat: Catalog, kind: str, strategy: str = "auto",
                     cfg: Optional[CheckConfig] = None, workers: Optional[int] = None) -> Family:
    """Enumerate all subcategories of one kind.

    ``nextclosure`` walks the closed sets of the exact closure operator and
    is valid for serre/tors/torf only; ``bruteforce`` filters all 2^n
    subsets through is_closed; ``auto`` picks nextclosure when available.
    Both strategies return identical families.
    """
    cfg = cfg or CheckConfig()
    if kind not in KINDS:
        raise ShapeError(f"unknown subcategory kind {kind!r}")
    has_operator = kind in ("serre", "tors", "torf")
    if strategy == "auto":
        strategy = "nextclosure" if has_operator else "bruteforce"
    if strategy == "nextclosure":
        if not has_operator:
            raise ShapeError(f"nextclosure needs an exact closure operator; {kind} has none")
        bitsets = _next_closure_enum(_closure_operator(kind, cat), cat.n)
        return Family(kind, cat, _sorted_members(cat, bitsets), cfg)
    if strategy != "bruteforce":
        raise ShapeError(f"unknown strategy {strategy!r}")
    subsets = range(1 << cat.n)
    if workers is None:
        workers = int(os.environ.get("SUBCAT_THREADS", "1") or "1")
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        def ok(bits: int) -> bool:
            return is_closed(kind, SubcatBits(cat, bits), cfg)[0]

        with ThreadPoolExecutor(max_workers=workers) as pool:
            flags = list(pool.map(ok, subsets))
        bitsets = [b for b, flag in zip(subsets, flags) if flag]
    else:
        bitsets = [b for b in subsets if is_closed(kind, SubcatBits(cat, b), cfg)[0]]
    return Family(kind, cat, _sorted_members(cat, bitsets), cfg)


def enumerate_ie_by_intersection(cat: Catalog, cfg: Optional[CheckConfig] = None) -> Family:
    """All pairwise intersections of torsion classes with torsion-free classes."""
    cfg = cfg or CheckConfig()
    tors_fam = enumerate_family(cat, "tors", "nextclosure", cfg)
    torf_fam = enumerate_family(cat, "torf", "nextclosure", cfg)
    bitsets = {t.bits & f.bits for t in tors_fam.members for f in torf_fam.members}
    return Family("ie", cat, _sorted_members(cat, bitsets), cfg)


# -- Hasse diagrams ---------------------------------------------------------------------


@dataclass(frozen=True)
class HasseDiagram:
    """Cover relation of a family under inclusion; edges are (lower, upper)."""

    family: Family
    nodes: tuple[SubcatBits, ...]
    edges: tuple[tuple[int, int], ...]


def hasse(family: Family) -> HasseDiagram:
    nodes = family.members
    bits = [m.bits for m in nodes]
    edges = []
    for i, low in enumerate(bits):
        for j, high in enumerate(bits):
            if low == high or (low & ~high):
                continue
            if any(k != i and k != j and (low & ~bits[k]) == 0 and (bits[k] & ~high) == 0
                   for k in range(len(bits))):
                continue
            edges.append((i, j))
    edges.sort(key=lambda e: (e[1], e[0]))
    return HasseDiagram(family, nodes, tuple(edges))


def hasse_to_dot(diagram: HasseDiagram) -> str:
    """DOT text, one node per member, edges drawn upper to lower."""
    lines = ["digraph hasse {"]
    lines.append('  rankdir=TB;')
    lines.append('  node [shape=none];')
    for i, node in enumerate(diagram.nodes):
        lines.append(f'  n{i} [label="{node.label()}"];')
    for low, high in diagram.edges:
        lines.append(f"  n{high} -> n{low};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- relations report ----------------------------------------------------------------------


@dataclass
class RelationsReport:
    """Families of all seven kinds plus the inclusion and coincidence facts."""

    catalog_label: str
    families: dict[str, Family]
    inclusions: list[tuple[str, str, bool]]
    coincidence_groups: list[list[str]]
    all_pairwise_distinct: bool
    commutative: bool
    commutative_collapse: Optional[list[tuple[str, bool]]]

    def all_inclusions_hold(self) -> bool:
        return all(ok for _, _, ok in self.inclusions)

    def passed(self) -> bool:
        ok = self.all_inclusions_hold()
        if self.commutative_collapse is not None:
            ok = ok and all(flag for _, flag in self.commutative_collapse)
        return ok

    def table_text(self) -> str:
        rows = []
        for kind in KINDS:
            fam = self.families[kind]
            members = ", ".join(m.label() for m in fam.members)
            rows.append((kind, members, str(fam.count)))
        w0 = max(len(r[0]) for r in rows + [("Classes", "", "")])
        w1 = max(len(r[1]) for r in rows + [("", "Lists of subcategories", "")])
        lines = [f"{'Classes'.ljust(w0)} | {'Lists of subcategories'.ljust(w1)} | Numbers"]
        lines.append("-" * len(lines[0]))
        for kind, members, count in rows:
            lines.append(f"{kind.ljust(w0)} | {members.ljust(w1)} | {count}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "catalog": self.catalog_label,
            "families": {k: f.to_json() for k, f in self.families.items()},
            "inclusions": [
                {"from": a, "to": b, "holds": ok} for a, b, ok in self.inclusions
            ],
            "coincidence_groups": self.coincidence_groups,
            "all_pairwise_distinct": self.all_pairwise_distinct,
            "commutative": self.commutative,
            "commutative_collapse": (
                None
                if self.commutative_collapse is None
                else [{"check": name, "holds": ok} for name, ok in self.commutative_collapse]
            ),
        }


def algebra_is_obviously_commutative(cat: Catalog) -> bool:
    """Single vertex with at most one loop; the only commutative builtins."""
    alg = cat.algebra
    return alg.n_vertices == 1 and len(alg.arrows) <= 1


def relations_report(cat: Catalog, cfg: Optional[CheckConfig] = None,
                     label: str = "", workers: Optional[int] = None) -> RelationsReport:
    """Enumerate every family and verify the inclusion diagram on it."""
    cfg = cfg or CheckConfig()
    families = {
        kind: enumerate_family(cat, kind, "auto", cfg, workers=workers) for kind in KINDS
    }
    inclusions = []
    for a, b in INCLUSION_ARROWS:
        inclusions.append((a, b, families[a].bitsets() <= families[b].bitsets()))
    groups: list[list[str]] = []
    for kind in KINDS:
        for group in groups:
            if families[group[0]].bitsets() == families[kind].bitsets():
                group.append(kind)
                break
        else:
            groups.append([kind])
    distinct = len(groups) == len(KINDS)
    commutative = algebra_is_obviously_commutative(cat)
    collapse = None
    if commutative:
        collapse = [
            ("serre = tors = wide = ice", all(
                families[k].bitsets() == families["serre"].bitsets()
                for k in ("tors", "wide", "ice")
            )),
            ("torf = ike = ie", all(
                families[k].bitsets() == families["torf"].bitsets() for k in ("ike", "ie")
            )),
        ]
    return RelationsReport(
        catalog_label=label,
        families=families,
        inclusions=inclusions,
        coincidence_groups=groups,
        all_pairwise_distinct=distinct,
        commutative=commutative,
        commutative_collapse=collapse,
    )
