"""Unary star operations satisfying the right *-semigroup axioms.

The four axioms checked here:

* S1  (s*)* = s
* S2  s* is an inverse of s
* S3  (st)* = t* (s t t*)*
* S4  e idempotent implies e* = e
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import FiniteSemigroup, Witness, _first, is_right_generalized_inverse
from .errors import (
    DimensionMismatch,
    MissingStar,
    OutOfRangeEntry,
    PreconditionFailed,
    StarAxiomViolated,
)

AXIOMS = ("S1", "S2", "S3", "S4")


@dataclass(frozen=True, eq=False)
class StarStructure:
    base: FiniteSemigroup
    star: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "star", tuple(int(v) for v in self.star))

    def __call__(self, s: int) -> int:
        return self.star[s]

    def __eq__(self, other) -> bool:
        if not isinstance(other, StarStructure):
            return NotImplemented
        return self.base == other.base and self.star == other.star

    def __hash__(self) -> int:
        return hash((self.base, self.star))


@dataclass
class StarReport:
    witnesses: dict[str, Witness | None]
    base_is_rgi: bool
    is_rgis_star: bool = field(init=False)

    def __post_init__(self):
        self.is_rgis_star = self.base_is_rgi and self.all_hold

    @property
    def all_hold(self) -> bool:
        return all(self.witnesses[a] is None for a in AXIOMS)

    def holds(self, axiom: str) -> bool:
        return self.witnesses[axiom] is None

    def to_json(self) -> dict:
        return {
            "axioms": {a: self.witnesses[a] is None for a in AXIOMS},
            "witnesses": {a: w.to_json() for a, w in self.witnesses.items() if w is not None},
            "base_is_right_generalized_inverse": self.base_is_rgi,
            "is_rgis_star": self.is_rgis_star,
        }


def _validate_range(base: FiniteSemigroup, star: Sequence[int]) -> np.ndarray:
    s = np.array(star, dtype=np.int64)
    if s.shape != (base.n,):
        raise DimensionMismatch(f"star has length {len(star)}, expected {base.n}")
    bad = np.flatnonzero((s < 0) | (s >= base.n))
    if len(bad):
        raise OutOfRangeEntry(f"star[{int(bad[0])}] is out of range", Witness("out_of_range", (int(bad[0]),)))
    return s


def axiom_witnesses(base: FiniteSemigroup, star: Sequence[int]) -> dict[str, Witness | None]:
    s = _validate_range(base, star)
    t = base.table
    idx = np.arange(base.n)
    out: dict[str, Witness | None] = {}

    bad = np.flatnonzero(s[s] != idx)
    out["S1"] = Witness("S1", (int(bad[0]),)) if len(bad) else None

    bad = np.flatnonzero(~base.inverse_relation[idx, s])
    out["S2"] = Witness("S2", (int(bad[0]),)) if len(bad) else None

    # exact parse t*(s t t*)*: u = (s t) t*, then t* . u*
    st = t
    u = t[st, s[None, :]]
    lhs = s[st]
    rhs = t[s[None, :], s[u]]
    w = _first(lhs != rhs)
    out["S3"] = Witness("S3", w) if w is not None else None

    e = np.array(base.idempotents)
    bad = e[s[e] != e]
    out["S4"] = Witness("S4", (int(bad[0]),)) if len(bad) else None
    return out


def check_star(base: FiniteSemigroup, star: Sequence[int]) -> StarReport:
    return StarReport(axiom_witnesses(base, star), is_right_generalized_inverse(base))


def load_star(base: FiniteSemigroup, star: Sequence[int] | None) -> StarStructure:
    """Validated star; an omitted star defaults to inversion on inverse bases."""
    if star is None:
        if base.is_inverse:
            return StarStructure(base, base.inversion)
        raise MissingStar("base is not inverse and no star was supplied")
    ws = axiom_witnesses(base, star)
    for a in AXIOMS:
        if ws[a] is not None:
            raise StarAxiomViolated(f"star violates {a} at {ws[a].elements}", ws[a])
    return StarStructure(base, star)


def inversion_star(S: FiniteSemigroup) -> StarStructure:
    return StarStructure(S, S.inversion)


def verify_s4_derivation(base: FiniteSemigroup, star: Sequence[int]) -> Witness | None:
    """Given S1-S3 on a right generalized inverse base, S4 must follow.

    Returns the S4 witness if it does not; callers treat that as a
    counterexample, never as an ordinary failure.
    """
    if not is_right_generalized_inverse(base):
        raise PreconditionFailed("base is not right generalized inverse")
    ws = axiom_witnesses(base, star)
    for a in ("S1", "S2", "S3"):
        if ws[a] is not None:
            raise PreconditionFailed(f"star violates {a}", ws[a])
    return ws["S4"]


def star_order_check(T: StarStructure) -> Witness | None:
    """Compare the natural order against its two star descriptions.

    For all a, b: a <= b  iff  a = a a* b  iff  a* = a* a b*, and
    a <= b  iff  a* <= b*.
    """
    base = T.base
    if not is_right_generalized_inverse(base):
        raise PreconditionFailed("base is not right generalized inverse")
    ws = axiom_witnesses(base, T.star)
    if any(w is not None for w in ws.values()):
        raise PreconditionFailed("star does not satisfy S1-S4")
    t = base.table
    s = np.array(T.star)
    idx = np.arange(base.n)
    order = base.order_matrix
    aas = t[idx, s]  # a a*
    first = t[aas][:, idx] == idx[:, None]  # a a* b == a
    sa = t[s, idx]  # a* a
    second = t[sa[:, None], s[None, :]] == s[:, None]  # a* a b* == a*
    starred = order[np.ix_(s, s)]
    for kind, rel in (("order_vs_aastar_b", first), ("order_vs_astar_a_bstar", second),
                      ("order_vs_star_order", starred)):
        w = _first(order != rel)
        if w is not None:
            return Witness(kind, w)
    return None
