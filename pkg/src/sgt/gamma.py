"""The minimum inverse congruence on orthodox semigroups and its quotient."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    FiniteSemigroup,
    SemigroupHom,
    Witness,
    _closed_witness,
    _first,
    _regular_witness,
    check_hom,
    green_relations,
    is_right_generalized_inverse,
    partition_classes,
    partition_from_keys,
)
from .errors import (
    NotACongruence,
    NotOrthodox,
    NotRightGeneralizedInverse,
    NotSurjective,
    PreconditionFailed,
    TheoremFalsified,
)


@dataclass(frozen=True, eq=False)
class Congruence:
    base: FiniteSemigroup
    class_of: tuple[int, ...]
    name: str = ""

    @property
    def classes(self) -> list[tuple[int, ...]]:
        return partition_classes(self.class_of)

    def related(self, a: int, b: int) -> bool:
        return self.class_of[a] == self.class_of[b]


@dataclass(frozen=True)
class QuotientResult:
    quotient: FiniteSemigroup
    projection: SemigroupHom
    classes: tuple[tuple[int, ...], ...]


def congruence_witness(S: FiniteSemigroup, class_of: Sequence[int]) -> Witness | None:
    """Smallest (a, b, c) with a ≡ b but ca ≢ cb or ac ≢ bc."""
    cls = np.array(class_of)
    same = cls[:, None] == cls[None, :]
    t = S.table
    left = cls[t.T]  # [a, c] -> class of c a
    right = cls[t]  # [a, c] -> class of a c
    bad = same[:, :, None] & ((left[:, None, :] != left[None, :, :])
                              | (right[:, None, :] != right[None, :, :]))
    w = _first(bad)
    return None if w is None else Witness("not_compatible", w)


def make_congruence(S: FiniteSemigroup, keys: Sequence, name: str = "") -> Congruence:
    """Partition by equal keys, relabel by minimum member, verify compatibility."""
    class_of = partition_from_keys(keys)
    w = congruence_witness(S, class_of)
    if w is not None:
        raise NotACongruence(f"partition is not compatible at {w.elements}", w)
    return Congruence(S, class_of, name)


def gamma(S: FiniteSemigroup) -> Congruence:
    """s γ t iff V(s) = V(t), on an orthodox semigroup."""
    w = _regular_witness(S) or _closed_witness(S)
    if w is not None:
        raise NotOrthodox("gamma requires an orthodox semigroup", w)
    V = S.inverse_relation
    keys = [row.tobytes() for row in V]
    vi = V.astype(np.int64)
    meets = (vi @ vi.T) > 0
    equal = np.array(keys, dtype=object)
    equal = equal[:, None] == equal[None, :]
    bad = _first(meets != equal)
    if bad is not None:
        raise TheoremFalsified("V-set characterisation of gamma",
                               "V(s) ∩ V(t) ≠ ∅ and V(s) = V(t) disagree",
                               Witness("v_sets", bad))
    try:
        return make_congruence(S, keys, "gamma")
    except NotACongruence as exc:
        raise TheoremFalsified("gamma is a congruence", str(exc), exc.witness) from None


def quotient(S: FiniteSemigroup, c: Congruence) -> QuotientResult:
    w = congruence_witness(S, c.class_of)
    if w is not None:
        raise NotACongruence(f"partition is not compatible at {w.elements}", w)
    classes = tuple(c.classes)
    pos = {cls[0]: i for i, cls in enumerate(classes)}
    reps = [cls[0] for cls in classes]
    table = [[pos[c.class_of[S.rows[a][b]]] for b in reps] for a in reps]
    labels = ["{" + ",".join(S.label(x) for x in cls) + "}" for cls in classes]
    Q = FiniteSemigroup(np.array(table), labels)
    proj = SemigroupHom(S, Q, tuple(pos[k] for k in c.class_of))
    hw = check_hom(proj)
    if hw is not None:
        raise TheoremFalsified("natural map is a homomorphism", str(hw), hw)
    if c.name == "gamma" and not Q.is_inverse:
        raise TheoremFalsified("quotient by gamma is inverse", "S/γ is not inverse")
    return QuotientResult(Q, proj, classes)


def gamma_quotient(S: FiniteSemigroup) -> QuotientResult:
    return quotient(S, gamma(S))


def check_idempotent_pure(S: FiniteSemigroup, c: Congruence) -> Witness | None:
    """a ≡ a² must force a = a²."""
    for a in range(S.n):
        sq = S.rows[a][a]
        if c.class_of[a] == c.class_of[sq] and sq != a:
            return Witness("not_idempotent_pure", (a,))
    return None


def check_l_cover(h: SemigroupHom) -> Witness | None:
    """Each idempotent's L-class must map bijectively onto the image's L-class."""
    if not h.is_surjective():
        missing = sorted(set(range(h.target.n)) - set(h.map))
        raise NotSurjective("homomorphism is not surjective", Witness("not_surjective", (missing[0],)))
    if not (h.source.is_regular and h.target.is_regular):
        raise PreconditionFailed("source and target must be regular")
    Ls = green_relations(h.source).L
    Lt = green_relations(h.target).L
    for e in h.source.idempotents:
        dom = [a for a in range(h.source.n) if Ls[a] == Ls[e]]
        img = [h.map[a] for a in dom]
        want = {b for b in range(h.target.n) if Lt[b] == Lt[h.map[e]]}
        if len(set(img)) != len(img):
            a = next(x for i, x in enumerate(dom) if img.index(img[i]) != i)
            return Witness("l_restriction_not_injective", (e, a))
        if set(img) != want:
            extra = sorted(set(img) ^ want)
            return Witness("l_restriction_not_onto", (e, extra[0]))
    return None


@dataclass(frozen=True)
class Coordinatization:
    """κ(s) = (γ-class index of s, s's) together with the target set."""
    kappa: tuple[tuple[int, int], ...]
    codomain: tuple[tuple[int, int], ...]
    quotient: QuotientResult

    def to_json(self) -> dict:
        return {"kappa": [list(p) for p in self.kappa],
                "codomain": [list(p) for p in self.codomain],
                "bijective": True}


def coordinatize(S: FiniteSemigroup) -> Coordinatization:
    if not is_right_generalized_inverse(S):
        raise NotRightGeneralizedInverse("coordinatization needs a right generalized inverse semigroup")
    q = gamma_quotient(S)
    cls = q.projection.map
    idem = S.idempotents
    codomain = set()
    kappa = []
    for s in range(S.n):
        seconds = {S.rows[v][s] for v in np.flatnonzero(S.inverse_relation[s])}
        if len(seconds) != 1:
            raise TheoremFalsified("κ is well defined", "s's depends on the choice of s'",
                                   Witness("kappa_not_well_defined", (s,)))
        f = seconds.pop()
        kappa.append((cls[s], f))
        for e in idem:
            if cls[e] == cls[f]:
                codomain.add((cls[s], e))
    if len(set(kappa)) != S.n:
        dup = next(s for s in range(S.n) if kappa.index(kappa[s]) != s)
        raise TheoremFalsified("κ is injective", "two elements share coordinates",
                               Witness("kappa_not_injective", (kappa.index(kappa[dup]), dup)))
    if set(kappa) != codomain:
        raise TheoremFalsified("κ is surjective", "coordinate pair not hit")
    return Coordinatization(tuple(kappa), tuple(sorted(codomain)), q)
