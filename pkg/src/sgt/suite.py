"""Property suite over the families corpus.

Each ``criterion_*`` function checks one group of statements on every
relevant corpus member and returns a :class:`CriterionResult`.  Nothing here
is expected to fail: every recorded failure is a counterexample to a proven
statement (or an implementation bug), and ``run_suite`` reports exit code 3.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .action import (
    ActionMorphism,
    EtaleAction,
    check_etale_hom,
    etale_characterization,
    has_global_support,
    identity_morphism,
)
from .core import (
    FiniteSemigroup,
    SemigroupHom,
    Witness,
    classify,
    green_relations,
    identity_hom,
    is_right_generalized_inverse,
    left_multiples,
    restrict,
)
from .equivalence import (
    SemidirectResult,
    action_morphism_to_star_hom,
    build_action_from_etale,
    build_semidirect,
    canonical_action,
    over_inverse,
    roundtrip_action,
    roundtrip_etale,
    star_hom_to_action_morphism,
    verify_semidirect,
)
from .errors import SemigroupError
from .families import (
    Instance,
    corpus,
    find_stars,
    group_action,
    point_action,
    right_group,
    semilattice_chain,
    symmetric_inverse_monoid,
    FIND_STARS_MAX_N,
)
from .gamma import check_idempotent_pure, check_l_cover, coordinatize, gamma, gamma_quotient
from .star import StarStructure, axiom_witnesses, inversion_star, star_order_check, verify_s4_derivation

INJECTIONS = ("semidirect-star",)


@dataclass
class CriterionResult:
    key: str
    title: str
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, instance: str, what: str, fn: Callable[[], object]) -> None:
        """Run one check; a truthy return value or a raised error is a failure."""
        self.checked += 1
        self.counts[what] = self.counts.get(what, 0) + 1
        try:
            bad = fn()
        except SemigroupError as exc:
            self.failures.append({"instance": instance, "check": what, "error": type(exc).__name__,
                                  "message": str(exc),
                                  "witness": exc.witness.to_json() if isinstance(exc.witness, Witness) else None})
            return
        if bad:
            self.failures.append({"instance": instance, "check": what,
                                  "witness": bad.to_json() if isinstance(bad, Witness) else str(bad)})

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.key} {self.title}: {self.checked} checks, {len(self.failures)} failures"

    def to_json(self) -> dict:
        return {"title": self.title, "passed": self.passed, "checked": self.checked,
                "counts": dict(sorted(self.counts.items())), "failures": self.failures}


class SuiteContext:
    """Corpus plus everything derived from it, computed once."""

    def __init__(self, instances: list[Instance], max_n: int = 6, inject: str | None = None):
        self.instances = instances
        self.max_n = max_n
        self.inject = inject

    @cached_property
    def stars(self) -> list[tuple[str, StarStructure]]:
        return [(i.name, i.obj) for i in self.instances if i.kind == "star"]

    @cached_property
    def actions(self) -> list[tuple[str, EtaleAction]]:
        return [(i.name, i.obj) for i in self.instances if i.kind == "action"]

    @cached_property
    def semidirects(self) -> list[tuple[str, SemidirectResult]]:
        out = [(f"S*X[{name}]", build_semidirect(A, verify=False)) for name, A in self.actions]
        if self.inject == "semidirect-star":
            name, R = next((nm, r) for nm, r in out if r.product.n >= 2)
            star = list(R.star.star)
            star[0], star[1] = star[1], star[0]
            bad = SemidirectResult(R.action, R.product, StarStructure(R.product, star), R.projection, R.pairs)
            out.append((f"injected[{name}]", bad))
        return out

    @cached_property
    def rgi_stars(self) -> list[tuple[str, StarStructure]]:
        """Every right generalized inverse *-semigroup: corpus members and S∗X."""
        out = [(n, T) for n, T in self.stars if is_right_generalized_inverse(T.base)]
        for name, R in self.semidirects:
            if not name.startswith("injected"):
                out.append((name, R.star))
        return out

    @cached_property
    def natural_maps(self) -> dict[str, SemigroupHom]:
        return {name: gamma_quotient(T.base).projection for name, T in self.rgi_stars}

    @cached_property
    def etale_maps(self) -> list[tuple[str, SemigroupHom, StarStructure]]:
        out = [(f"nat[{n}]", self.natural_maps[n], T) for n, T in self.rgi_stars]
        out += [(f"pi[{n}]", R.projection, R.star) for n, R in self.semidirects
                if not n.startswith("injected")]
        for k in range(1, self.max_n):
            lo, hi = semilattice_chain(k), semilattice_chain(k + 1)
            out.append((f"incl[chain({k})->chain({k + 1})]",
                        SemigroupHom(lo, hi, tuple(range(k))), inversion_star(lo)))
        return out

    @cached_property
    def homs_to_inverse(self) -> list[tuple[str, SemigroupHom, StarStructure]]:
        """Étale maps plus maps that are not étale."""
        out = list(self.etale_maps)
        for k in range(1, self.max_n):
            lo, hi = semilattice_chain(k), semilattice_chain(k + 1)
            out.append((f"shift[chain({k})->chain({k + 1})]",
                        SemigroupHom(lo, hi, tuple(range(1, k + 1))), inversion_star(lo)))
        for name, T in self.rgi_stars:
            if T.base.n > 12:
                continue
            Q = gamma_quotient(T.base).quotient
            for f in Q.idempotents:
                out.append((f"const[{name}->{f}]", SemigroupHom(T.base, Q, (f,) * T.base.n), T))
        return out


def _distinct_classes_on_left_ideals(S: FiniteSemigroup, cls) -> Witness | None:
    for e in S.idempotents:
        se = left_multiples(S, e)
        seen: dict[int, int] = {}
        for a in se:
            if cls[a] in seen:
                return Witness("gamma_not_injective_on_Se", (e, seen[cls[a]], a))
            seen[cls[a]] = a
    return None


def _b_equals_ae(S: FiniteSemigroup, q) -> Witness | None:
    """γ(a)γ(e) = γ(a) with γ(e) idempotent: e is idempotent and b = ae works."""
    cls = q.projection.map
    Q = q.quotient
    for e in range(S.n):
        if Q.rows[cls[e]][cls[e]] != cls[e]:
            continue
        if S.rows[e][e] != e:
            return Witness("gamma_idempotent_not_idempotent", (e,))
        for a in range(S.n):
            if Q.rows[cls[a]][cls[e]] == cls[a] and cls[S.rows[a][e]] != cls[a]:
                return Witness("b_equals_ae_fails", (a, e))
    return None


def criterion_gamma(ctx: SuiteContext) -> CriterionResult:
    r = CriterionResult("C1", "γ on right generalized inverse semigroups")
    for name, T in ctx.rgi_stars:
        S = T.base
        g = gamma(S)
        q = gamma_quotient(S)
        r.check(name, "injective_on_Se", lambda: _distinct_classes_on_left_ideals(S, g.class_of))
        r.check(name, "idempotent_pure", lambda: check_idempotent_pure(S, g))
        r.check(name, "b_equals_ae", lambda: _b_equals_ae(S, q))
        r.check(name, "natural_map_etale",
                lambda: check_etale_hom(ctx.natural_maps[name], T).witness)
        if S.n <= FIND_STARS_MAX_N:
            for found in find_stars(S):
                r.check(name, "S1-S3_imply_S4", lambda: verify_s4_derivation(S, found.star))
    return r


def criterion_star_order(ctx: SuiteContext) -> CriterionResult:
    r = CriterionResult("C2", "natural order via the star")
    for name, T in ctx.rgi_stars:
        r.check(name, "star_order", lambda: star_order_check(T))
        if T.base.n <= FIND_STARS_MAX_N:
            for k, found in enumerate(find_stars(T.base)):
                if axiom_witnesses(T.base, found.star)["S4"] is None:
                    r.check(f"{name}#star{k}", "star_order_found_star", lambda: star_order_check(found))
    return r


def _coordinatization_bijective(S: FiniteSemigroup):
    c = coordinatize(S)
    if not (len(c.kappa) == len(c.codomain) == S.n):
        return f"|S|={S.n}, |S/γ∗E(S)|={len(c.codomain)}"
    return None


def criterion_l_cover(ctx: SuiteContext) -> CriterionResult:
    r = CriterionResult("C3", "L-cover and coordinatization")
    for name, T in ctx.rgi_stars:
        r.check(name, "l_cover", lambda: check_l_cover(ctx.natural_maps[name]))
        r.check(name, "coordinatize", lambda: _coordinatization_bijective(T.base))
    return r


def criterion_etale_characterization(ctx: SuiteContext) -> CriterionResult:
    r = CriterionResult("C4", "étale characterization consistency")
    tally = {"etale": 0, "not_etale": 0}

    def one(theta, star):
        out = etale_characterization(theta, star)
        tally["etale" if out.etale else "not_etale"] += 1

    for name, theta, star in ctx.homs_to_inverse:
        r.check(name, "three_way_consistency", lambda: one(theta, star))
    r.counts.update({f"homs_{k}": v for k, v in tally.items()})
    return r


def criterion_semidirect(ctx: SuiteContext) -> CriterionResult:
    r = CriterionResult("C5", "S∗X construction")
    for name, R in ctx.semidirects:
        r.check(name, "semidirect_verified", lambda: verify_semidirect(R))
    return r


def criterion_roundtrips(ctx: SuiteContext) -> CriterionResult:
    r = CriterionResult("C6", "round trips")
    for name, A in ctx.actions:
        r.check(name, "roundtrip_action", lambda: not roundtrip_action(A).ok)
    for name, theta, star in ctx.etale_maps:
        r.check(name, "roundtrip_etale", lambda: not roundtrip_etale(theta, star).ok)
    return r


def _same_action_morphism(m1: ActionMorphism, m2: ActionMorphism) -> bool:
    a1 = m1.alpha.map if m1.alpha is not None else None
    a2 = m2.alpha.map if m2.alpha is not None else None
    return m1.beta == m2.beta and a1 == a2


def _is_identity_morphism(m: ActionMorphism, x_size: int, s_size: int) -> bool:
    return (m.beta == tuple(range(x_size))
            and (m.alpha is None or m.alpha.map == tuple(range(s_size))))


def _terminal_morphism(A: EtaleAction, P: EtaleAction) -> ActionMorphism:
    return ActionMorphism((0,) * A.x_size, SemigroupHom(A.S, P.S, (0,) * A.S.n))


def _star_side(ctx: SuiteContext, r: CriterionResult) -> None:
    trivial = inversion_star(semilattice_chain(1))
    ca_trivial = canonical_action(trivial)
    for name, T in ctx.rgi_stars:
        if T.base.n > 24:
            continue
        q = gamma_quotient(T.base)
        Q = inversion_star(q.quotient)
        ca_T, ca_Q = canonical_action(T), canonical_action(Q)
        objs = {"T": (T, ca_T), "Q": (Q, ca_Q), "1": (trivial, ca_trivial)}
        arrows = {
            ("T", "T"): identity_hom(T.base),
            ("T", "Q"): q.projection,
            ("Q", "1"): SemigroupHom(q.quotient, trivial.base, (0,) * q.quotient.n),
            ("Q", "Q"): identity_hom(q.quotient),
        }

        def F(key):
            a, b = key
            return star_hom_to_action_morphism(arrows[key], objs[a][0], objs[b][0], objs[a][1], objs[b][1])

        for key in (("T", "T"), ("Q", "Q")):
            obj = objs[key[0]][1]
            r.check(name, "star_hom:identity_to_identity",
                    lambda: not _is_identity_morphism(F(key), obj.action.x_size, obj.action.S.n))
        for f, g in ((("T", "T"), ("T", "Q")), (("T", "Q"), ("Q", "1")), (("T", "Q"), ("Q", "Q"))):
            def composite():
                a = f[0]
                c = g[1]
                gf = arrows[f].then(arrows[g])
                Fgf = star_hom_to_action_morphism(gf, objs[a][0], objs[c][0], objs[a][1], objs[c][1])
                return not _same_action_morphism(Fgf, F(f).then(F(g)))
            r.check(name, "star_hom:composite_to_composite", composite)


def _action_side(ctx: SuiteContext, r: CriterionResult) -> None:
    P = point_action()
    RP = build_semidirect(P)
    for name, A in ctx.actions:
        if not has_global_support(A):
            continue
        RA = build_semidirect(A)
        morphisms = [("id", identity_morphism(A))]
        if A.S.n > 1 and all(v == 0 for v in A.p) and A.S.is_inverse and len(A.S.idempotents) == 1:
            gen = tuple(A.rows[1])  # action of the generator commutes with the group
            morphisms.append(("generator", ActionMorphism(gen)))
        tau = _terminal_morphism(A, P)

        def G(src, dst, m, Rs, Rd):
            return action_morphism_to_star_hom(src, dst, m, Rs, Rd)

        r.check(name, "action:identity_to_identity",
                lambda: G(A, A, identity_morphism(A), RA, RA).map != tuple(range(RA.product.n)))
        for label, f in morphisms:
            def composite():
                gf = f.then(tau)
                return G(A, P, gf, RA, RP).map != G(A, A, f, RA, RA).then(G(A, P, tau, RA, RP)).map
            r.check(f"{name}:{label}", "action:composite_to_composite", composite)
            def self_composite():
                ff = f.then(f)
                return G(A, A, ff, RA, RA).map != G(A, A, f, RA, RA).then(G(A, A, f, RA, RA)).map
            r.check(f"{name}:{label}", "action:composite_to_composite", self_composite)


def criterion_global_support(ctx: SuiteContext) -> CriterionResult:
    r = CriterionResult("C7", "global support functors")
    _star_side(ctx, r)
    _action_side(ctx, r)
    for name, T in ctx.rgi_stars:
        r.check(name, "over_inverse", lambda: not over_inverse(T).etale)
    return r


CLOSING_STAR = (0, 1, 3, 2)  # (h,x) -> (h⁻¹, hx) on Z₂ × R₂, index 2h + x, Z₂ swapping X


def _closing_example() -> str | None:
    T = right_group(2, 2, "swap")
    if T.star != CLOSING_STAR:
        return f"star {T.star} != {CLOSING_STAR}"
    for h, x in itertools.product(range(2), repeat=2):
        if T.star[2 * h + x] != 2 * ((-h) % 2) + (x ^ h):
            return f"star mismatch at (h={h},x={x})"
    A = group_action(2, 2, "swap")
    R = build_semidirect(A)
    if R.pairs != ((0, 0), (0, 1), (1, 0), (1, 1)):
        return f"unexpected carrier {R.pairs}"
    if not np.array_equal(R.product.table, T.base.table) or R.star.star != T.star:
        return "S∗X of the swap action differs from the right group under the identity pairing"
    nat = gamma_quotient(T.base).projection
    B = build_action_from_etale(nat, T)
    if B.S != A.S or B.p != A.p or not np.array_equal(B.act, A.act):
        return f"recovered action {B.act.tolist()} != swap action {A.act.tolist()}"
    return None


def criterion_closing_example(ctx: SuiteContext) -> CriterionResult:
    r = CriterionResult("C8", "closing right-group example")
    r.check("right_group(2,2,swap)", "closing_example", _closing_example)
    return r


def partial_injection_oracle(n: int) -> dict:
    """Independent brute force over partial injections as frozensets of pairs."""
    pts = range(n)
    maps = []
    for r in range(n + 1):
        for dom in itertools.combinations(pts, r):
            for img in itertools.permutations(pts, r):
                maps.append(frozenset(zip(dom, img)))

    def comp(f, g):
        gd = dict(g)
        fd = dict(f)
        return frozenset((x, fd[y]) for x, y in gd.items() if y in fd)

    idem = [f for f in maps if comp(f, f) == f]
    vsets = [frozenset(g for g in maps if comp(comp(f, g), f) == f and comp(comp(g, f), g) == g)
             for f in maps]
    return {"size": len(maps), "idempotents": len(idem), "gamma_classes": len(set(vsets))}


def _sim2_oracle() -> str | None:
    oracle = partial_injection_oracle(2)
    S = symmetric_inverse_monoid(2)
    got = {"size": S.n, "idempotents": len(S.idempotents), "gamma_classes": len(gamma(S).classes)}
    if got != oracle or oracle != {"size": 7, "idempotents": 4, "gamma_classes": 7}:
        return f"library {got} vs oracle {oracle}"
    if gamma(S).class_of != tuple(range(S.n)):
        return "γ is not equality on I₂"
    return None


def _l_discrete(S: FiniteSemigroup) -> str | None:
    L = green_relations(S).L
    return None if L == tuple(range(S.n)) else f"L-partition {L} is not discrete"


def criterion_oracles(ctx: SuiteContext) -> CriterionResult:
    r = CriterionResult("C9", "oracle cross-checks")
    r.check("symmetric_inverse_monoid(2)", "partial_injection_oracle", _sim2_oracle)
    for name, T in ctx.stars:
        if classify(T.base).is_right_normal_band:
            r.check(name, "rnb_L_discrete", lambda: _l_discrete(T.base))
    for name, T in ctx.rgi_stars:
        band, _ = restrict(T.base, T.base.idempotents)
        r.check(f"E({name})", "rnb_L_discrete", lambda: _l_discrete(band))
    return r


CRITERIA = (criterion_gamma, criterion_star_order, criterion_l_cover,
            criterion_etale_characterization, criterion_semidirect, criterion_roundtrips, criterion_global_support,
            criterion_closing_example, criterion_oracles)


@dataclass
class SuiteReport:
    max_n: int
    seed: int
    corpus_size: int
    results: list[CriterionResult]
    seconds: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 3


def run_suite(max_n: int = 6, seed: int = 7, inject: str | None = None) -> SuiteReport:
    start = time.perf_counter()
    instances = corpus(max_n, seed)
    ctx = SuiteContext(instances, max_n=max_n, inject=inject)
    results = [c(ctx) for c in CRITERIA]
    return SuiteReport(max_n, seed, len(instances), results, time.perf_counter() - start)
