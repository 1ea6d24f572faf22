"""Finite semigroups as dense Cayley tables.

Elements are the integers ``0..n-1`` and ``table[a, b]`` is the product
``ab``.  Everything else in the package is built on :class:`FiniteSemigroup`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NotAssociative,
    NotIdempotent,
    NotRegular,
    OutOfRangeEntry,
    TooLarge,
)

DEFAULT_MAX_N = 64

# keeps the n^3 associativity cube below ~16M entries per block
_ASSOC_BLOCK = 1 << 24


@dataclass(frozen=True)
class Witness:
    kind: str
    elements: tuple[int, ...]

    def to_json(self) -> dict:
        return {"kind": self.kind, "elements": [int(e) for e in self.elements]}

    def __str__(self) -> str:
        return f"{self.kind}{self.elements}"


class FiniteSemigroup:
    """A validated multiplication table.

    Do not construct directly from untrusted data; use :func:`load_semigroup`.
    Derived data (idempotents, inverse relation, ...) is computed lazily and
    cached on the instance.
    """

    def __init__(self, table: np.ndarray, labels: Sequence[str] | None = None):
        t = np.array(table, dtype=np.int64)
        t.setflags(write=False)
        self.table = t
        self.n = int(t.shape[0])
        self.rows: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in t.tolist())
        self.labels = tuple(labels) if labels is not None else None

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def product(self, *elements: int) -> int:
        it = iter(elements)
        acc = next(it)
        for x in it:
            acc = self.rows[acc][x]
        return acc

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteSemigroup):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.n, self.table.tobytes()))

    def __repr__(self) -> str:
        return f"FiniteSemigroup(n={self.n})"

    @cached_property
    def idempotents(self) -> tuple[int, ...]:
        d = np.diagonal(self.table)
        return tuple(int(e) for e in np.flatnonzero(d == np.arange(self.n)))

    @cached_property
    def inverse_relation(self) -> np.ndarray:
        """``V[s, t]`` is true iff ``t`` is an inverse of ``s``."""
        t = self.table
        idx = np.arange(self.n)
        st = t  # st[s, u] = s*u
        sts = t[st, idx[:, None]]  # (s u) s
        tst = t[st.T, idx[None, :]]  # (u s) u, indexed [s, u]
        v = (sts == idx[:, None]) & (tst == idx[None, :])
        v.setflags(write=False)
        return v

    @cached_property
    def is_regular(self) -> bool:
        return bool(self.inverse_relation.any(axis=1).all())

    @cached_property
    def idempotents_commute(self) -> bool:
        e = np.array(self.idempotents)
        sub = self.table[np.ix_(e, e)]
        return bool((sub == sub.T).all())

    @cached_property
    def is_inverse(self) -> bool:
        return self.is_regular and self.idempotents_commute

    @cached_property
    def inversion(self) -> tuple[int, ...]:
        """Unique inverses; only defined on inverse semigroups."""
        if not self.is_inverse:
            raise ValueError("inversion is only defined on inverse semigroups")
        return tuple(int(np.flatnonzero(row)[0]) for row in self.inverse_relation)

    @cached_property
    def order_matrix(self) -> np.ndarray:
        """Natural partial order: ``M[a, b]`` iff ``a <= b``."""
        if not self.is_regular:
            bad = int(np.flatnonzero(~self.inverse_relation.any(axis=1))[0])
            raise NotRegular(f"element {bad} is not regular", Witness("not_regular", (bad,)))
        n = self.n
        e = np.array(self.idempotents)
        cols = np.arange(n)
        left = np.zeros((n, n), dtype=bool)
        left[self.table[e, :], cols[None, :]] = True  # e b
        right = np.zeros((n, n), dtype=bool)
        right[self.table[:, e], cols[:, None]] = True  # b f
        m = left & right
        m.setflags(write=False)
        return m


def _assoc_witness(t: np.ndarray) -> tuple[int, int, int] | None:
    n = t.shape[0]
    block = max(1, _ASSOC_BLOCK // max(1, n * n))
    for start in range(0, n, block):
        rows = t[start:start + block]  # [a, b]
        lhs = t[rows]  # t[t[a,b], c]
        rhs = rows[:, t]  # t[a, t[b,c]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            a, b, c = (int(v) for v in bad[0])
            return a + start, b, c
    return None


def load_semigroup(n: int, table, labels: Sequence[str] | None = None,
                   max_n: int | None = DEFAULT_MAX_N) -> FiniteSemigroup:
    """Validate a raw table and return a :class:`FiniteSemigroup`.

    Raises DimensionMismatch, OutOfRangeEntry or NotAssociative; the witness
    is the lexicographically smallest offending tuple.
    """
    if n < 1:
        raise DimensionMismatch("a semigroup needs at least one element")
    if max_n is not None and n > max_n:
        raise TooLarge(f"n={n} exceeds the cap of {max_n}")
    try:
        t = np.array(table, dtype=np.int64)
    except (ValueError, TypeError) as exc:
        raise DimensionMismatch(f"table is not a rectangular integer array: {exc}") from None
    if t.shape != (n, n):
        raise DimensionMismatch(f"table has shape {t.shape}, expected {(n, n)}")
    bad = np.argwhere((t < 0) | (t >= n))
    if len(bad):
        a, b = (int(v) for v in bad[0])
        raise OutOfRangeEntry(f"table[{a}][{b}] = {int(t[a, b])} is out of range",
                              Witness("out_of_range", (a, b)))
    w = _assoc_witness(t)
    if w is not None:
        raise NotAssociative(f"(ab)c != a(bc) for (a,b,c)={w}", Witness("not_associative", w))
    if labels is not None and len(labels) != n:
        raise DimensionMismatch("labels length does not match n")
    return FiniteSemigroup(t, labels)


def from_function(elements: Sequence, op, labels: Sequence[str] | None = None) -> FiniteSemigroup:
    """Tabulate ``op`` on a finite carrier listed in ``elements``."""
    index = {x: i for i, x in enumerate(elements)}
    table = [[index[op(x, y)] for y in elements] for x in elements]
    if labels is None:
        labels = [str(x) for x in elements]
    return load_semigroup(len(elements), table, labels=labels, max_n=None)


def check_associative(S: FiniteSemigroup) -> Witness | None:
    w = _assoc_witness(S.table)
    return None if w is None else Witness("not_associative", w)


def idempotents(S: FiniteSemigroup) -> frozenset[int]:
    return frozenset(S.idempotents)


def inverses_of(S: FiniteSemigroup, a: int) -> frozenset[int]:
    """V(a): every b with aba = a and bab = b."""
    return frozenset(int(b) for b in np.flatnonzero(S.inverse_relation[a]))


def _first(mask: np.ndarray) -> tuple[int, ...] | None:
    hits = np.argwhere(mask)
    return tuple(int(v) for v in hits[0]) if len(hits) else None


def _band_identity_witness(S: FiniteSemigroup, elems: Sequence[int]) -> tuple[int, ...] | None:
    """Smallest (e, f, g) from ``elems`` with efg != feg."""
    e = np.array(elems)
    t = S.table
    ef = t[np.ix_(e, e)]
    fe = ef.T
    lhs = t[ef][:, :, e]
    rhs = t[fe][:, :, e]
    w = _first(lhs != rhs)
    return None if w is None else tuple(int(e[i]) for i in w)


@dataclass
class ClassificationReport:
    is_band: bool
    is_right_normal_band: bool
    is_regular: bool
    is_orthodox: bool
    is_inverse: bool
    is_right_generalized_inverse: bool
    is_locally_inverse: bool
    witnesses: dict[str, Witness] = field(default_factory=dict)

    FLAGS = ("is_band", "is_right_normal_band", "is_regular", "is_orthodox",
             "is_inverse", "is_right_generalized_inverse", "is_locally_inverse")

    def to_json(self) -> dict:
        out = {f: getattr(self, f) for f in self.FLAGS}
        out["witnesses"] = {k: w.to_json() for k, w in sorted(self.witnesses.items())}
        return out


def _regular_witness(S: FiniteSemigroup) -> Witness | None:
    bad = np.flatnonzero(~S.inverse_relation.any(axis=1))
    return Witness("not_regular", (int(bad[0]),)) if len(bad) else None


def _closed_witness(S: FiniteSemigroup) -> Witness | None:
    """Smallest idempotent pair whose product is not idempotent."""
    e = np.array(S.idempotents)
    prod = S.table[np.ix_(e, e)]
    w = _first(S.table[prod, prod] != prod)
    return None if w is None else Witness("idempotents_not_closed", (int(e[w[0]]), int(e[w[1]])))


def _commute_witness(S: FiniteSemigroup) -> Witness | None:
    e = np.array(S.idempotents)
    prod = S.table[np.ix_(e, e)]
    w = _first(prod != prod.T)
    return None if w is None else Witness("idempotents_do_not_commute", (int(e[w[0]]), int(e[w[1]])))


def _inverse_witness(S: FiniteSemigroup) -> Witness | None:
    return _regular_witness(S) or _commute_witness(S)


def classify(S: FiniteSemigroup) -> ClassificationReport:
    """Evaluate every structural predicate directly from its definition."""
    w: dict[str, Witness] = {}

    diag = np.diagonal(S.table)
    not_idem = np.flatnonzero(diag != np.arange(S.n))
    band = not len(not_idem)
    if not band:
        w["is_band"] = Witness("not_idempotent", (int(not_idem[0]),))

    rnb = band
    if band:
        bw = _band_identity_witness(S, range(S.n))
        if bw is not None:
            rnb = False
            w["is_right_normal_band"] = Witness("efg_ne_feg", bw)
    else:
        w["is_right_normal_band"] = w["is_band"]

    rw = _regular_witness(S)
    regular = rw is None
    if rw:
        w["is_regular"] = rw

    cw = _closed_witness(S)
    orthodox = regular and cw is None
    if not orthodox:
        w["is_orthodox"] = rw or cw

    iw = _inverse_witness(S)
    inverse = iw is None
    if iw:
        w["is_inverse"] = iw

    rgi = orthodox
    if orthodox:
        bw = _band_identity_witness(S, S.idempotents)
        if bw is not None:
            rgi = False
            w["is_right_generalized_inverse"] = Witness("efg_ne_feg", bw)
    else:
        w["is_right_generalized_inverse"] = w["is_orthodox"]

    locally = True
    for e in S.idempotents:
        sub, carrier = local_submonoid(S, e)
        sw = _inverse_witness(sub)
        if sw is not None:
            locally = False
            w["is_locally_inverse"] = Witness(
                "local_submonoid_not_inverse",
                (e,) + tuple(carrier[i] for i in sw.elements))
            break

    return ClassificationReport(band, rnb, regular, orthodox, inverse, rgi, locally, w)


def is_right_generalized_inverse(S: FiniteSemigroup) -> bool:
    return (S.is_regular and _closed_witness(S) is None
            and _band_identity_witness(S, S.idempotents) is None)


def is_orthodox(S: FiniteSemigroup) -> bool:
    return S.is_regular and _closed_witness(S) is None


def partition_from_keys(keys: Sequence) -> tuple[int, ...]:
    """Class labels (minimum member) for elements grouped by equal keys."""
    first: dict = {}
    out = []
    for i, k in enumerate(keys):
        out.append(first.setdefault(k, i))
    return tuple(out)


def partition_classes(class_of: Sequence[int]) -> list[tuple[int, ...]]:
    groups: dict[int, list[int]] = {}
    for i, c in enumerate(class_of):
        groups.setdefault(c, []).append(i)
    return [tuple(groups[c]) for c in sorted(groups)]


def _union_find_partition(n: int, pairs: Iterable[tuple[int, int]]) -> tuple[int, ...]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return partition_from_keys([find(i) for i in range(n)])


@dataclass(frozen=True)
class GreenRelations:
    L: tuple[int, ...]
    R: tuple[int, ...]
    H: tuple[int, ...]
    D: tuple[int, ...]
    J: tuple[int, ...]

    def to_json(self) -> dict:
        return {k: [list(c) for c in partition_classes(getattr(self, k))] for k in "LRHDJ"}


def principal_ideals(S: FiniteSemigroup) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Boolean membership matrices for S¹a, aS¹ and S¹aS¹ (row a)."""
    n = S.n
    idx = np.arange(n)
    left = np.zeros((n, n), dtype=bool)
    left[idx[None, :], S.table] = True  # x a for all x
    left[idx, idx] = True
    right = np.zeros((n, n), dtype=bool)
    right[idx[:, None], S.table] = True  # a x for all x
    right[idx, idx] = True
    two = (left.astype(np.int64) @ right.astype(np.int64)) > 0
    return left, right, two


def green_relations(S: FiniteSemigroup) -> GreenRelations:
    left, right, two = principal_ideals(S)
    L = partition_from_keys([r.tobytes() for r in left])
    R = partition_from_keys([r.tobytes() for r in right])
    H = partition_from_keys(list(zip(L, R)))
    pairs = [(a, L[a]) for a in range(S.n)] + [(a, R[a]) for a in range(S.n)]
    D = _union_find_partition(S.n, pairs)
    J = partition_from_keys([r.tobytes() for r in two])
    return GreenRelations(L, R, H, D, J)


def l_class(S: FiniteSemigroup, a: int) -> tuple[int, ...]:
    left, _, _ = principal_ideals(S)
    return tuple(int(b) for b in np.flatnonzero((left == left[a]).all(axis=1)))


def natural_partial_order(S: FiniteSemigroup) -> frozenset[tuple[int, int]]:
    """Pairs (a, b) with a = eb = bf for idempotents e, f."""
    return frozenset((int(a), int(b)) for a, b in np.argwhere(S.order_matrix))


def partial_order_witness(m: np.ndarray) -> Witness | None:
    """Reflexivity, antisymmetry and transitivity of a boolean relation."""
    n = m.shape[0]
    diag = np.flatnonzero(~np.diagonal(m))
    if len(diag):
        return Witness("not_reflexive", (int(diag[0]),))
    w = _first(m & m.T & ~np.eye(n, dtype=bool))
    if w is not None:
        return Witness("not_antisymmetric", w)
    comp = (m.astype(np.int64) @ m.astype(np.int64)) > 0
    w = _first(comp & ~m)
    if w is not None:
        a, c = w
        b = int(np.flatnonzero(m[a] & m[:, c])[0])
        return Witness("not_transitive", (a, b, c))
    return None


@dataclass(frozen=True)
class SemigroupHom:
    source: FiniteSemigroup
    target: FiniteSemigroup
    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(v) for v in self.map))
        if len(self.map) != self.source.n:
            raise DimensionMismatch("hom map length does not match source size")
        for i, v in enumerate(self.map):
            if not 0 <= v < self.target.n:
                raise OutOfRangeEntry(f"map[{i}] = {v} is out of range", Witness("out_of_range", (i,)))

    def __call__(self, a: int) -> int:
        return self.map[a]

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.map)))

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.n

    def is_injective(self) -> bool:
        return len(set(self.map)) == self.source.n

    def kernel(self) -> tuple[int, ...]:
        return partition_from_keys(self.map)

    def then(self, other: "SemigroupHom") -> "SemigroupHom":
        """``other ∘ self``."""
        return SemigroupHom(self.source, other.target, tuple(other.map[v] for v in self.map))


def identity_hom(S: FiniteSemigroup) -> SemigroupHom:
    return SemigroupHom(S, S, tuple(range(S.n)))


def check_hom(h: SemigroupHom, source_star: Sequence[int] | None = None,
              target_star: Sequence[int] | None = None) -> Witness | None:
    """Multiplicativity, plus star preservation when a source star is given.

    With a source star and no target star, the target must be inverse and
    its inversion is used; this is verified, not assumed.
    """
    m = np.array(h.map)
    lhs = m[h.source.table]
    rhs = h.target.table[m[:, None], m[None, :]]
    w = _first(lhs != rhs)
    if w is not None:
        return Witness("not_multiplicative", w)
    if source_star is not None:
        if target_star is None:
            target_star = h.target.inversion
        ss, ts = np.array(source_star), np.array(target_star)
        bad = np.flatnonzero(m[ss] != ts[m])
        if len(bad):
            return Witness("star_not_preserved", (int(bad[0]),))
    return None


def restrict(S: FiniteSemigroup, subset: Iterable[int]) -> tuple[FiniteSemigroup, tuple[int, ...]]:
    """Subsemigroup on ``subset`` (must be closed), ordered by original index."""
    carrier = tuple(sorted(set(int(x) for x in subset)))
    pos = {x: i for i, x in enumerate(carrier)}
    try:
        table = [[pos[S.rows[a][b]] for b in carrier] for a in carrier]
    except KeyError:
        raise DimensionMismatch("subset is not closed under multiplication") from None
    labels = [S.label(x) for x in carrier] if S.labels else None
    return FiniteSemigroup(np.array(table), labels), carrier


def local_submonoid(S: FiniteSemigroup, e: int) -> tuple[FiniteSemigroup, tuple[int, ...]]:
    """eSe with its carrier (ascending original indices)."""
    if S.rows[e][e] != e:
        raise NotIdempotent(f"{e} is not idempotent", Witness("not_idempotent", (e,)))
    return restrict(S, {S.rows[S.rows[e][a]][e] for a in range(S.n)})


def left_multiples(S: FiniteSemigroup, e: int) -> tuple[int, ...]:
    """The set Se in ascending order."""
    return tuple(sorted({S.rows[a][e] for a in range(S.n)}))
