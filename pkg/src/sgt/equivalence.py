"""Functors between étale actions and étale *-semigroups, and their round trips.

Every construction verifies what the theory promises about it; a failed
verification raises :class:`TheoremFalsified` with the offending witness.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .action import (
    ActionMorphism,
    EtaleAction,
    action_order_matrix,
    check_action_morphism,
    check_etale_hom,
    has_global_support,
    is_action_isomorphism,
    load_action,
)
from .core import (
    FiniteSemigroup,
    SemigroupHom,
    Witness,
    _first,
    check_associative,
    check_hom,
    classify,
    is_right_generalized_inverse,
    load_semigroup,
)
from .errors import (
    InvalidInput,
    NoGlobalSupport,
    NotEtale,
    PreconditionFailed,
    TheoremFalsified,
)
from .gamma import QuotientResult, check_l_cover, gamma_quotient
from .star import StarStructure, axiom_witnesses


@dataclass(frozen=True, eq=False)
class SemidirectResult:
    action: EtaleAction
    product: FiniteSemigroup
    star: StarStructure
    projection: SemigroupHom
    pairs: tuple[tuple[int, int], ...]

    def index(self, s: int, x: int) -> int:
        return self.pairs.index((s, x))

    def to_json(self) -> dict:
        return {
            "n": self.product.n,
            "table": self.product.table.tolist(),
            "star": list(self.star.star),
            "labels": list(self.product.labels),
            "pairs": [list(p) for p in self.pairs],
            "projection": list(self.projection.map),
        }


def _falsified(statement: str, w: Witness | None, msg: str = "") -> TheoremFalsified:
    return TheoremFalsified(statement, msg or (str(w) if w else "verification failed"), w)


def build_semidirect(A: EtaleAction, verify: bool = True) -> SemidirectResult:
    """S∗X = {(s, x) : d(s) = p(x)} with (s,x)(t,y) = (st, d(st)·y)."""
    S = A.S
    inv = S.inversion
    d = [S.rows[inv[s]][s] for s in range(S.n)]
    pairs = tuple((s, x) for s in range(S.n) for x in range(A.x_size) if d[s] == A.p[x])
    pos = {pr: i for i, pr in enumerate(pairs)}
    table = []
    for s, _x in pairs:
        row = []
        for t, y in pairs:
            st = S.rows[s][t]
            row.append(pos[(st, A.rows[d[st]][y])])
        table.append(row)
    labels = [f"({S.label(s)},{A.label(x)})" for s, x in pairs]
    try:
        T = load_semigroup(len(pairs), table, labels=labels, max_n=None)
    except InvalidInput as exc:
        raise _falsified("S∗X is associative", exc.witness, str(exc)) from None
    star = StarStructure(T, tuple(pos[(inv[s], A.rows[s][x])] for s, x in pairs))
    proj = SemigroupHom(T, S, tuple(s for s, _ in pairs))
    R = SemidirectResult(A, T, star, proj, pairs)
    if verify:
        verify_semidirect(R)
    return R


def verify_semidirect(R: SemidirectResult) -> None:
    """Everything claimed about S∗X: associativity, star axioms, right
    generalized inverse, idempotents {(p(x), x)}, étale projection, and
    surjectivity iff global support."""
    A, T = R.action, R.product
    w = check_associative(T)
    if w is not None:
        raise _falsified("S∗X is associative", w)
    for axiom, w in axiom_witnesses(T, R.star.star).items():
        if w is not None:
            raise _falsified(f"S∗X star satisfies {axiom}", w)
    rep = classify(T)
    if not rep.is_right_generalized_inverse:
        raise _falsified("S∗X is right generalized inverse",
                         rep.witnesses.get("is_right_generalized_inverse"))
    expected = {R.pairs.index((A.p[x], x)) for x in range(A.x_size)}
    if set(T.idempotents) != expected:
        diff = sorted(set(T.idempotents) ^ expected)
        raise _falsified("idempotents of S∗X are the (p(x), x)", Witness("idempotents", (diff[0],)))
    w = check_hom(R.projection, R.star.star)
    if w is not None:
        raise _falsified("projection is a *-homomorphism", w)
    er = check_etale_hom(R.projection, R.star)
    if not er.etale:
        raise _falsified("projection is étale", er.witness)
    if R.projection.is_surjective() != has_global_support(A):
        raise _falsified("projection surjective iff global support", None,
                         "surjectivity and global support disagree")
    w = check_semidirect_order(R)
    if w is not None:
        raise _falsified("order on S∗X is componentwise", w)


def check_semidirect_order(R: SemidirectResult) -> Witness | None:
    """Natural order on S∗X against (s <= t and x <= y)."""
    s = np.array([p[0] for p in R.pairs])
    x = np.array([p[1] for p in R.pairs])
    comp = R.action.S.order_matrix[np.ix_(s, s)] & action_order_matrix(R.action)[np.ix_(x, x)]
    w = _first(R.product.order_matrix != comp)
    return None if w is None else Witness("order_not_componentwise", w)


def lift_action_morphism(A: EtaleAction, B: EtaleAction, m: ActionMorphism,
                         RA: SemidirectResult, RB: SemidirectResult) -> SemigroupHom:
    """(s, x) ↦ (s, β(x))."""
    if m.alpha is not None and m.alpha.map != tuple(range(A.S.n)):
        raise PreconditionFailed("lifting needs a same-base morphism")
    w = check_action_morphism(A, B, ActionMorphism(m.beta))
    if w is not None:
        raise PreconditionFailed("not a morphism of étale actions", w)
    pos = {pr: i for i, pr in enumerate(RB.pairs)}
    h = SemigroupHom(RA.product, RB.product, tuple(pos[(s, m.beta[x])] for s, x in RA.pairs))
    w = check_hom(h, RA.star.star, RB.star.star)
    if w is not None:
        raise _falsified("lifted map is a *-homomorphism", w)
    if h.then(RB.projection).map != RA.projection.map:
        raise _falsified("lifted map commutes with the projections", None)
    return h


def build_action_from_etale(theta: SemigroupHom, star: StarStructure) -> EtaleAction:
    """Action on E(T): s·e = tt* for the unique t with t*t <= e, θ(t) = sθ(e)."""
    rep = check_etale_hom(theta, star)
    if not rep.etale:
        raise NotEtale("theta is not étale", rep.witness)
    T, S = theta.source, theta.target
    E = T.idempotents
    epos = {e: i for i, e in enumerate(E)}
    order = T.order_matrix.tolist()
    sst = [T.rows[star.star[t]][t] for t in range(T.n)]
    act = []
    for s in range(S.n):
        row = []
        for e in E:
            want = S.rows[s][theta.map[e]]
            cands = [t for t in range(T.n) if order[sst[t]][e] and theta.map[t] == want]
            if len(cands) != 1:
                raise NotEtale(f"{len(cands)} candidates for s={s}, e={e}", Witness("candidates", (s, e)))
            t = cands[0]
            row.append(epos[T.rows[t][star.star[t]]])
        act.append(row)
    p = [theta.map[e] for e in E]
    try:
        return load_action(S, len(E), p, act, labels=[T.label(e) for e in E])
    except InvalidInput as exc:
        raise _falsified("construction yields an étale action", exc.witness, str(exc)) from None


def _etale_sources(alpha: SemigroupHom, star1: StarStructure, theta1: SemigroupHom,
                   star2: StarStructure, theta2: SemigroupHom) -> None:
    if check_hom(alpha, star1.star, star2.star) is not None:
        raise PreconditionFailed("alpha is not a *-homomorphism")
    if alpha.then(theta2).map != theta1.map:
        raise PreconditionFailed("alpha does not commute with the étale maps")


def restrict_hom(alpha: SemigroupHom, star1: StarStructure, theta1: SemigroupHom,
                 star2: StarStructure, theta2: SemigroupHom) -> ActionMorphism:
    """Restriction of a *-homomorphism over S to the idempotents."""
    _etale_sources(alpha, star1, theta1, star2, theta2)
    A1 = build_action_from_etale(theta1, star1)
    A2 = build_action_from_etale(theta2, star2)
    e2 = {e: i for i, e in enumerate(alpha.target.idempotents)}
    m = ActionMorphism(tuple(e2[alpha.map[e]] for e in alpha.source.idempotents))
    w = check_action_morphism(A1, A2, m)
    if w is not None:
        raise _falsified("restriction to idempotents is an action morphism", w)
    return m


@dataclass
class RoundTripReport:
    direction: str
    maps: dict[str, list[int]]
    verdicts: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> dict:
        return {"direction": self.direction, "maps": self.maps, "verdicts": self.verdicts}


def roundtrip_action(A: EtaleAction) -> RoundTripReport:
    """A ≅ action built from π_X via (p(x), x) ↦ x."""
    R = build_semidirect(A)
    B = build_action_from_etale(R.projection, R.star)
    E = R.product.idempotents
    phi = tuple(R.pairs[e][1] for e in E)
    m = ActionMorphism(phi)
    rep = RoundTripReport("action", {"idempotent_to_x": list(phi), "idempotents": list(E)})
    rep.verdicts["bijective"] = sorted(phi) == list(range(A.x_size))
    rep.verdicts["anchor_compatible"] = all(B.p[i] == A.p[phi[i]] for i in range(len(E)))
    rep.verdicts["equivariant"] = check_action_morphism(B, A, m) is None
    rep.verdicts["isomorphism"] = is_action_isomorphism(B, A, m)
    if not rep.ok:
        bad = [k for k, v in rep.verdicts.items() if not v]
        raise _falsified("action round trip is an isomorphism", None, f"failed: {bad}")
    return rep


def roundtrip_etale(theta: SemigroupHom, star: StarStructure) -> RoundTripReport:
    """θ ≅ π_{E(T)} via α(t) = (θ(t), t*t)."""
    T = theta.source
    A = build_action_from_etale(theta, star)
    R = build_semidirect(A)
    epos = {e: i for i, e in enumerate(T.idempotents)}
    pos = {pr: i for i, pr in enumerate(R.pairs)}
    try:
        amap = tuple(pos[(theta.map[t], epos[T.rows[star.star[t]][t]])] for t in range(T.n))
    except KeyError:
        raise _falsified("α(t) = (θ(t), t*t) lands in S∗E(T)", None) from None
    alpha = SemigroupHom(T, R.product, amap)
    rep = RoundTripReport("etale", {"alpha": list(amap)})
    rep.verdicts["bijective"] = sorted(amap) == list(range(R.product.n))
    rep.verdicts["star_homomorphism"] = check_hom(alpha, star.star, R.star.star) is None
    rep.verdicts["commutes_with_projection"] = alpha.then(R.projection).map == theta.map
    if not rep.ok:
        bad = [k for k, v in rep.verdicts.items() if not v]
        raise _falsified("étale round trip is an isomorphism", None, f"failed: {bad}")
    return rep


def _require_rgis(T: StarStructure) -> None:
    if not is_right_generalized_inverse(T.base):
        raise PreconditionFailed("not a right generalized inverse semigroup")
    if any(w is not None for w in axiom_witnesses(T.base, T.star).values()):
        raise PreconditionFailed("star does not satisfy S1-S4")


@dataclass(frozen=True, eq=False)
class CanonicalAction:
    """(T/γ, E(T), p_T) together with the quotient it was built from."""
    star: StarStructure
    quotient: QuotientResult
    action: EtaleAction


def canonical_action(T: StarStructure) -> CanonicalAction:
    _require_rgis(T)
    q = gamma_quotient(T.base)
    A = build_action_from_etale(q.projection, T)
    if not has_global_support(A):
        raise _falsified("canonical action has global support", None)
    return CanonicalAction(T, q, A)


def star_hom_to_action_morphism(theta: SemigroupHom, src: StarStructure, dst: StarStructure,
                                ca: CanonicalAction | None = None,
                                cb: CanonicalAction | None = None) -> ActionMorphism:
    """θ ↦ (θ₁: S/γ → T/γ, θ₂ = θ on idempotents)."""
    _require_rgis(src)
    _require_rgis(dst)
    w = check_hom(theta, src.star, dst.star)
    if w is not None:
        raise PreconditionFailed("theta is not a *-homomorphism", w)
    ca = ca or canonical_action(src)
    cb = cb or canonical_action(dst)
    pa, pb = ca.quotient.projection.map, cb.quotient.projection.map
    theta1 = [None] * ca.quotient.quotient.n
    for s in range(theta.source.n):
        img = pb[theta.map[s]]
        if theta1[pa[s]] is None:
            theta1[pa[s]] = img
        elif theta1[pa[s]] != img:
            raise _falsified("*-homomorphisms preserve γ", Witness("gamma_not_preserved", (s,)))
    alpha = SemigroupHom(ca.quotient.quotient, cb.quotient.quotient, tuple(theta1))
    e2 = {e: i for i, e in enumerate(theta.target.idempotents)}
    beta = tuple(e2[theta.map[e]] for e in theta.source.idempotents)
    m = ActionMorphism(beta, alpha)
    w = check_action_morphism(ca.action, cb.action, m)
    if w is not None:
        raise _falsified("(θ₁, θ₂) is a morphism of étale actions", w)
    return m


def action_morphism_to_star_hom(A: EtaleAction, B: EtaleAction, m: ActionMorphism,
                                RA: SemidirectResult | None = None,
                                RB: SemidirectResult | None = None) -> SemigroupHom:
    """(α, β) ↦ θ(s, x) = (α(s), β(x)) between the semidirect products."""
    if not has_global_support(A) or not has_global_support(B):
        raise NoGlobalSupport("both actions need global support")
    w = check_action_morphism(A, B, m)
    if w is not None:
        raise PreconditionFailed("not a morphism of étale actions", w)
    RA = RA or build_semidirect(A)
    RB = RB or build_semidirect(B)
    alpha = m.alpha.map if m.alpha is not None else tuple(range(A.S.n))
    pos = {pr: i for i, pr in enumerate(RB.pairs)}
    try:
        hmap = tuple(pos[(alpha[s], m.beta[x])] for s, x in RA.pairs)
    except KeyError:
        raise _falsified("(α(s), β(x)) lies in T∗Y", None) from None
    h = SemigroupHom(RA.product, RB.product, hmap)
    w = check_hom(h, RA.star.star, RB.star.star)
    if w is not None:
        raise _falsified("θ(s,x) = (α(s), β(x)) is a *-homomorphism", w)
    return h


def global_support_functors(obj, *args, **kwargs):
    """Dispatch on the input: a *-homomorphism or a two-base action morphism."""
    if isinstance(obj, SemigroupHom):
        return star_hom_to_action_morphism(obj, *args, **kwargs)
    if isinstance(obj, EtaleAction):
        return action_morphism_to_star_hom(obj, *args, **kwargs)
    raise TypeError(f"unsupported input {type(obj).__name__}")


@dataclass
class OverInverse:
    quotient: QuotientResult
    surjective: bool
    etale: bool
    l_cover: bool

    def to_json(self) -> dict:
        return {"quotient_n": self.quotient.quotient.n,
                "projection": list(self.quotient.projection.map),
                "surjective": self.surjective, "etale": self.etale, "l_cover": self.l_cover}


def over_inverse(T: StarStructure) -> OverInverse:
    """T over T/γ: the natural map is a surjective étale L-cover."""
    _require_rgis(T)
    q = gamma_quotient(T.base)
    rep = check_etale_hom(q.projection, T)
    out = OverInverse(q, q.projection.is_surjective(), rep.etale, check_l_cover(q.projection) is None)
    if not (out.surjective and out.etale and out.l_cover):
        raise _falsified("natural map onto T/γ is a surjective étale L-cover", rep.witness)
    return out
