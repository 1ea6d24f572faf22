"""Étale actions of inverse semigroups and étale homomorphisms.

An action (S, X, p) is stored as a dense ``|S| x |X|`` table ``act`` with
``act[s, x] = s·x`` and an anchor ``p: X -> E(S)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    FiniteSemigroup,
    SemigroupHom,
    Witness,
    _first,
    check_hom,
    identity_hom,
    is_right_generalized_inverse,
    partial_order_witness,
    partition_classes,
)
from .errors import (
    ActionLawViolated,
    BaseNotInverse,
    DimensionMismatch,
    E1Violated,
    E2Violated,
    OutOfRangeEntry,
    PNotIdempotent,
    PreconditionFailed,
    TheoremFalsified,
)
from .gamma import gamma
from .star import StarStructure, axiom_witnesses


class EtaleAction:
    def __init__(self, S: FiniteSemigroup, x_size: int, p: Sequence[int], act,
                 labels: Sequence[str] | None = None):
        self.S = S
        self.x_size = int(x_size)
        self.p = tuple(int(v) for v in p)
        a = np.array(act, dtype=np.int64).reshape(S.n, self.x_size)
        a.setflags(write=False)
        self.act = a
        self.rows = tuple(tuple(r) for r in a.tolist())
        self.labels = tuple(labels) if labels is not None else None

    def __call__(self, s: int, x: int) -> int:
        return self.rows[s][x]

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EtaleAction):
            return NotImplemented
        return (self.S == other.S and self.p == other.p
                and np.array_equal(self.act, other.act))

    __hash__ = None

    def __repr__(self) -> str:
        return f"EtaleAction(|S|={self.S.n}, |X|={self.x_size})"


def load_action(S: FiniteSemigroup, x_size: int, p: Sequence[int], act,
                labels: Sequence[str] | None = None) -> EtaleAction:
    """Validate every action invariant exhaustively."""
    if not S.is_inverse:
        raise BaseNotInverse("the acting semigroup must be inverse")
    if x_size < 1:
        raise DimensionMismatch("X must be non-empty")
    pa = np.array(p, dtype=np.int64)
    if pa.shape != (x_size,):
        raise DimensionMismatch(f"p has length {len(p)}, expected {x_size}")
    try:
        a = np.array(act, dtype=np.int64)
    except (ValueError, TypeError):
        raise DimensionMismatch("act is not a rectangular integer array") from None
    if a.shape != (S.n, x_size):
        raise DimensionMismatch(f"act has shape {a.shape}, expected {(S.n, x_size)}")
    bad = np.flatnonzero((pa < 0) | (pa >= S.n))
    if len(bad):
        raise OutOfRangeEntry(f"p[{int(bad[0])}] is out of range", Witness("out_of_range", (int(bad[0]),)))
    w = _first((a < 0) | (a >= x_size))
    if w is not None:
        raise OutOfRangeEntry(f"act{list(w)} is out of range", Witness("out_of_range", w))

    t = S.table
    bad = np.flatnonzero(t[pa, pa] != pa)
    if len(bad):
        x = int(bad[0])
        raise PNotIdempotent(f"p({x}) is not idempotent", Witness("p_not_idempotent", (x,)))

    sidx = np.arange(S.n)
    lhs = a[t]  # (st)·x
    rhs = a[sidx[:, None, None], a[None, :, :]]  # s·(t·x)
    w = _first(lhs != rhs)
    if w is not None:
        raise ActionLawViolated(f"(st)x != s(tx) at {w}", Witness("action_law", w))

    xidx = np.arange(x_size)
    bad = np.flatnonzero(a[pa, xidx] != xidx)
    if len(bad):
        x = int(bad[0])
        raise E1Violated(f"p({x})·{x} != {x}", Witness("E1", (x,)))

    inv = np.array(S.inversion)
    conj = t[t[:, pa], inv[:, None]]  # s p(x) s^-1
    w = _first(pa[a] != conj)
    if w is not None:
        raise E2Violated(f"p(s·x) != s p(x) s^-1 at {w}", Witness("E2", w))
    return EtaleAction(S, x_size, p, a, labels)


def action_order_matrix(A: EtaleAction) -> np.ndarray:
    """``M[x, y]`` iff x = e·y for some idempotent e."""
    m = np.zeros((A.x_size, A.x_size), dtype=bool)
    e = np.array(A.S.idempotents)
    m[A.act[e, :], np.arange(A.x_size)[None, :]] = True
    return m


def action_order(A: EtaleAction) -> tuple[frozenset[tuple[int, int]], Witness | None]:
    """The order on X and a witness if it fails to be a partial order."""
    m = action_order_matrix(A)
    pairs = frozenset((int(x), int(y)) for x, y in np.argwhere(m))
    return pairs, partial_order_witness(m)


def has_global_support(A: EtaleAction) -> bool:
    """Anchor map hits every idempotent of S."""
    return set(A.p) == set(A.S.idempotents)


@dataclass(frozen=True)
class ActionMorphism:
    """(alpha, beta); ``alpha=None`` means the identity on a shared base."""
    beta: tuple[int, ...]
    alpha: SemigroupHom | None = None

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(int(v) for v in self.beta))

    def then(self, other: "ActionMorphism") -> "ActionMorphism":
        """``other ∘ self``."""
        beta = tuple(other.beta[v] for v in self.beta)
        if self.alpha is None and other.alpha is None:
            return ActionMorphism(beta)
        a1 = self.alpha
        a2 = other.alpha
        if a1 is None:
            alpha = a2
        elif a2 is None:
            alpha = a1
        else:
            alpha = a1.then(a2)
        return ActionMorphism(beta, alpha)


def identity_morphism(A: EtaleAction) -> ActionMorphism:
    return ActionMorphism(tuple(range(A.x_size)))


def check_action_morphism(A: EtaleAction, B: EtaleAction, m: ActionMorphism) -> Witness | None:
    """q(β(x)) = α(p(x)) and β(s·x) = α(s)·β(x) for all s, x."""
    if len(m.beta) != A.x_size:
        raise DimensionMismatch("beta length does not match |X|")
    if any(not 0 <= v < B.x_size for v in m.beta):
        raise OutOfRangeEntry("beta entry out of range")
    if m.alpha is None:
        if A.S != B.S:
            raise PreconditionFailed("same-base morphism between actions of different semigroups")
        alpha = identity_hom(A.S)
    else:
        alpha = m.alpha
        if alpha.source != A.S or alpha.target != B.S:
            raise PreconditionFailed("alpha does not map A's base to B's base")
        w = check_hom(alpha)
        if w is not None:
            return w
    al = np.array(alpha.map)
    beta = np.array(m.beta)
    bad = np.flatnonzero(np.array(B.p)[beta] != al[np.array(A.p)])
    if len(bad):
        return Witness("anchor_not_preserved", (int(bad[0]),))
    lhs = beta[A.act]
    rhs = B.act[al[:, None], beta[None, :]]
    w = _first(lhs != rhs)
    if w is not None:
        return Witness("not_equivariant", w)
    return None


def is_action_isomorphism(A: EtaleAction, B: EtaleAction, m: ActionMorphism) -> bool:
    return (check_action_morphism(A, B, m) is None
            and len(set(m.beta)) == A.x_size == B.x_size)


@dataclass
class Restriction:
    idempotent: int
    domain: tuple[int, ...]
    codomain: tuple[int, ...]
    injective: bool
    bijective: bool


@dataclass
class EtaleHomReport:
    restrictions: list[Restriction]
    kernel: tuple[int, ...]
    image: tuple[int, ...]
    image_is_left_ideal: bool
    etale: bool = field(init=False)
    te_injective: bool = field(init=False)

    def __post_init__(self):
        self.etale = all(r.bijective for r in self.restrictions)
        self.te_injective = all(r.injective for r in self.restrictions)

    @property
    def witness(self) -> Witness | None:
        for r in self.restrictions:
            if not r.bijective:
                return Witness("restriction_not_bijective", (r.idempotent,))
        return None

    def to_json(self) -> dict:
        return {
            "etale": self.etale,
            "te_injective": self.te_injective,
            "restrictions": [
                {"e": r.idempotent, "Te": list(r.domain), "S_theta_e": list(r.codomain),
                 "injective": r.injective, "bijective": r.bijective}
                for r in self.restrictions],
            "kernel": [list(c) for c in partition_classes(self.kernel)],
            "image": list(self.image),
            "image_is_left_ideal": self.image_is_left_ideal,
        }


def _etale_preconditions(theta: SemigroupHom, star: StarStructure) -> None:
    if star.base != theta.source:
        raise PreconditionFailed("star is not on the source of theta")
    if not is_right_generalized_inverse(theta.source):
        raise PreconditionFailed("source is not right generalized inverse")
    if any(w is not None for w in axiom_witnesses(theta.source, star.star).values()):
        raise PreconditionFailed("source star does not satisfy S1-S4")
    if not theta.target.is_inverse:
        raise PreconditionFailed("target is not inverse")
    w = check_hom(theta)
    if w is not None:
        raise PreconditionFailed("theta is not a homomorphism", w)


def check_etale_hom(theta: SemigroupHom, star: StarStructure) -> EtaleHomReport:
    """Decide bijectivity of every restriction Te -> S θ(e)."""
    _etale_preconditions(theta, star)
    T, S = theta.source, theta.target
    rs = []
    for e in T.idempotents:
        te = tuple(sorted({T.rows[t][e] for t in range(T.n)}))
        se = tuple(sorted({S.rows[s][theta.map[e]] for s in range(S.n)}))
        img = [theta.map[a] for a in te]
        inj = len(set(img)) == len(img)
        rs.append(Restriction(e, te, se, inj, inj and set(img) == set(se)))
    image = theta.image
    im = set(image)
    left_ideal = all(S.rows[s][x] in im for s in range(S.n) for x in image)
    return EtaleHomReport(rs, theta.kernel(), image, left_ideal)


@dataclass
class EtaleCharacterization:
    etale: bool
    kernel_is_gamma: bool
    image_is_left_ideal: bool
    te_injective: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def etale_characterization(theta: SemigroupHom, star: StarStructure) -> EtaleCharacterization:
    """Cross-check étaleness against kernel and image conditions.

    étale ⟹ left-ideal image; Te-injective ⟹ kernel = γ;
    kernel = γ and left-ideal image ⟹ étale.  Any violation raises.
    """
    rep = check_etale_hom(theta, star)
    kernel_gamma = rep.kernel == gamma(theta.source).class_of
    out = EtaleCharacterization(rep.etale, kernel_gamma, rep.image_is_left_ideal, rep.te_injective)
    if out.etale and not out.image_is_left_ideal:
        raise TheoremFalsified("étale maps have left-ideal image", "image is not a left ideal")
    if out.te_injective and not out.kernel_is_gamma:
        raise TheoremFalsified("Te-injective maps have kernel γ", "kernel differs from γ")
    if out.kernel_is_gamma and out.image_is_left_ideal and not out.etale:
        raise TheoremFalsified("kernel γ with left-ideal image is étale", "a restriction is not bijective",
                               rep.witness)
    return out
