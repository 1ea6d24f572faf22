"""Generators for example semigroups, star structures and étale actions.

All generators are pure functions of their parameters (and seed, where
one is taken).  Element encodings are recorded in ``labels``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .action import EtaleAction, load_action
from .core import FiniteSemigroup, from_function, load_semigroup
from .errors import BudgetExceeded, GenerationExhausted, InvalidParams
from .star import StarStructure, axiom_witnesses, inversion_star

FIND_STARS_MAX_N = 6


def right_zero(n: int) -> FiniteSemigroup:
    """xy = y."""
    _positive(n, "n")
    return load_semigroup(n, [list(range(n))] * n, labels=[f"r{i}" for i in range(n)], max_n=None)


def semilattice_chain(n: int) -> FiniteSemigroup:
    """{0 < 1 < ... < n-1} under min."""
    _positive(n, "n")
    return load_semigroup(n, [[min(a, b) for b in range(n)] for a in range(n)], max_n=None)


def group_cyclic(n: int) -> FiniteSemigroup:
    _positive(n, "n")
    return load_semigroup(n, [[(a + b) % n for b in range(n)] for a in range(n)],
                          labels=[f"g{i}" for i in range(n)], max_n=None)


def _perm_for(n: int, m: int, action) -> tuple[int, ...]:
    """Generator permutation of a Z_n action on m points."""
    if action in (None, "trivial"):
        sigma = tuple(range(m))
    elif action == "swap":
        if m < 2:
            raise InvalidParams("swap needs at least two points")
        sigma = (1, 0) + tuple(range(2, m))
    elif action == "cycle":
        sigma = tuple((x + 1) % m for x in range(m))
    else:
        sigma = tuple(int(v) for v in action)
        if sorted(sigma) != list(range(m)):
            raise InvalidParams(f"{action!r} is not a permutation of {m} points")
    power = tuple(range(m))
    for _ in range(n):
        power = tuple(sigma[v] for v in power)
    if power != tuple(range(m)):
        raise InvalidParams(f"action {action!r} does not have order dividing {n}")
    return sigma


def _perm_power(sigma: Sequence[int], h: int) -> tuple[int, ...]:
    out = tuple(range(len(sigma)))
    for _ in range(h):
        out = tuple(sigma[v] for v in out)
    return out


def right_group(n: int, m: int, action="trivial") -> StarStructure:
    """Z_n × R_m with (h,x)(k,y) = (h+k, y) and (h,x)* = (-h, h·x).

    Element (h, x) has index h*m + x.
    """
    _positive(n, "n")
    _positive(m, "m")
    sigma = _perm_for(n, m, action)
    powers = [_perm_power(sigma, h) for h in range(n)]
    elems = [(h, x) for h in range(n) for x in range(m)]
    S = from_function(elems, lambda a, b: ((a[0] + b[0]) % n, b[1]),
                      labels=[f"(h={h},x={x})" for h, x in elems])
    star = [((-h) % n) * m + powers[h][x] for h, x in elems]
    return StarStructure(S, star)


def partial_injections(n: int) -> list[tuple[int, ...]]:
    """All partial injections on n points; -1 marks undefined.

    Ordered by rank, then domain, then images.
    """
    out = []
    for r in range(n + 1):
        for dom in itertools.combinations(range(n), r):
            for img in itertools.permutations(range(n), r):
                f = [-1] * n
                for a, b in zip(dom, img):
                    f[a] = b
                out.append(tuple(f))
    return out


def _compose(f, g):
    """(f g)(x) = f(g(x))."""
    return tuple(-1 if y < 0 else f[y] for y in g)


def _pinj_label(f) -> str:
    return "{" + ",".join(f"{a}->{b}" for a, b in enumerate(f) if b >= 0) + "}"


def symmetric_inverse_monoid(n: int) -> FiniteSemigroup:
    if n < 0:
        raise InvalidParams("n must be non-negative")
    elems = partial_injections(n)
    return from_function(elems, _compose, labels=[_pinj_label(f) for f in elems])


def brandt(g: int, n: int) -> FiniteSemigroup:
    """B(Z_g, n): zero (index 0) plus triples (i, h, j), index 1 + (i*g + h)*n + j."""
    _positive(g, "g")
    _positive(n, "n")
    elems = [None] + [(i, h, j) for i in range(n) for h in range(g) for j in range(n)]

    def op(a, b):
        if a is None or b is None or a[2] != b[0]:
            return None
        return (a[0], (a[1] + b[1]) % g, b[2])

    labels = ["0"] + [f"({i},{h},{j})" for i, h, j in elems[1:]]
    return from_function(elems, op, labels=labels)


def conjugation_action(S: FiniteSemigroup) -> EtaleAction:
    """X = E(S), p the inclusion, s·e = s e s⁻¹."""
    E = S.idempotents
    pos = {e: i for i, e in enumerate(E)}
    inv = S.inversion
    act = [[pos[S.product(s, e, inv[s])] for e in E] for s in range(S.n)]
    return load_action(S, len(E), E, act, labels=[S.label(e) for e in E])


def left_regular_action(S: FiniteSemigroup) -> EtaleAction:
    """X = S, p(x) = x x⁻¹, s·x = s x."""
    inv = S.inversion
    p = [S.rows[x][inv[x]] for x in range(S.n)]
    return load_action(S, S.n, p, S.table, labels=[S.label(x) for x in range(S.n)])


def group_action(n: int, m: int, action="swap") -> EtaleAction:
    """Z_n acting on m points through a permutation; p is constantly the identity."""
    sigma = _perm_for(n, m, action)
    S = group_cyclic(n)
    act = [_perm_power(sigma, h) for h in range(n)]
    return load_action(S, m, [0] * m, act, labels=[f"x{i}" for i in range(m)])


def sub_action(A: EtaleAction, subset: Sequence[int]) -> EtaleAction:
    """Restriction to a subset closed under the action."""
    keep = sorted(set(subset))
    pos = {x: i for i, x in enumerate(keep)}
    try:
        act = [[pos[A.rows[s][x]] for x in keep] for s in range(A.S.n)]
    except KeyError:
        raise InvalidParams("subset is not closed under the action") from None
    return load_action(A.S, len(keep), [A.p[x] for x in keep], act,
                       labels=[A.label(x) for x in keep])


def disjoint_union(parts: Sequence[EtaleAction]) -> EtaleAction:
    S = parts[0].S
    offsets = np.cumsum([0] + [a.x_size for a in parts])
    p, labels = [], []
    act = [[] for _ in range(S.n)]
    for k, a in enumerate(parts):
        p.extend(a.p)
        labels.extend(f"{k}:{a.label(x)}" for x in range(a.x_size))
        for s in range(S.n):
            act[s].extend(int(offsets[k]) + v for v in a.rows[s])
    return load_action(S, int(offsets[-1]), p, act, labels=labels)


def orbits(A: EtaleAction) -> list[tuple[int, ...]]:
    """Distinct sets S·x (each is closed, and contains x by E1)."""
    seen = []
    for x in range(A.x_size):
        o = tuple(sorted({A.rows[s][x] for s in range(A.S.n)}))
        if o not in seen:
            seen.append(o)
    return seen


def random_action(S: FiniteSemigroup, x_size: int, seed: int, budget: int = 500) -> EtaleAction:
    """Seeded étale action of size ``x_size``.

    Disjoint copies of orbits of the conjugation and left regular actions
    are drawn at random until their sizes sum to ``x_size``; X is then
    shuffled and the result validated.
    """
    if not S.is_inverse:
        raise InvalidParams("random actions need an inverse semigroup")
    _positive(x_size, "x_size")
    rng = np.random.default_rng(seed)
    pool = []
    for base in (conjugation_action(S), left_regular_action(S)):
        pool.extend(sub_action(base, o) for o in orbits(base))
    for _ in range(budget):
        parts, left = [], x_size
        while left > 0:
            fits = [a for a in pool if a.x_size <= left]
            if not fits:
                break
            pick = fits[int(rng.integers(len(fits)))]
            parts.append(pick)
            left -= pick.x_size
        if left == 0:
            break
    else:
        raise GenerationExhausted(f"no orbit combination of size {x_size} found in {budget} draws")
    U = disjoint_union(parts)
    perm = rng.permutation(x_size)
    p = [0] * x_size
    act = [[0] * x_size for _ in range(S.n)]
    labels = [""] * x_size
    for x in range(x_size):
        p[perm[x]] = U.p[x]
        labels[perm[x]] = U.label(x)
        for s in range(S.n):
            act[s][perm[x]] = int(perm[U.rows[s][x]])
    return load_action(S, x_size, p, act, labels=labels)


def point_action(S: FiniteSemigroup | None = None) -> EtaleAction:
    """One point over the trivial semigroup (terminal with global support)."""
    S = S or semilattice_chain(1)
    return load_action(S, 1, [0], [[0]] * S.n)


def find_stars(S: FiniteSemigroup, budget: int = 1_000_000) -> list[StarStructure]:
    """Every unary map satisfying S1-S3, by backtracking over inverses.

    S1 and S2 prune the search (star[s] ∈ V(s), involutive); S3 is checked
    on each complete map.  S4 is deliberately not imposed.
    """
    if S.n > FIND_STARS_MAX_N:
        raise BudgetExceeded(f"n={S.n} exceeds the search guard of {FIND_STARS_MAX_N}")
    V = [[int(v) for v in np.flatnonzero(row)] for row in S.inverse_relation]
    star = [-1] * S.n
    found: list[StarStructure] = []
    nodes = 0

    def rec(s: int) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"star search exceeded {budget} nodes")
        if s == S.n:
            if axiom_witnesses(S, star)["S3"] is None:
                found.append(StarStructure(S, tuple(star)))
            return
        if star[s] >= 0:
            rec(s + 1)
            return
        for c in V[s]:
            if star[c] >= 0:
                continue
            star[s] = c
            star[c] = s
            rec(s + 1)
            star[s] = star[c] = -1

    rec(0)
    return found


def _positive(v: int, name: str) -> None:
    if not isinstance(v, (int, np.integer)) or v < 1:
        raise InvalidParams(f"{name} must be a positive integer, got {v!r}")


@dataclass(frozen=True)
class FamilySpec:
    tag: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0


def _base_of(value) -> FiniteSemigroup:
    if isinstance(value, FiniteSemigroup):
        return value
    if isinstance(value, StarStructure):
        return value.base
    if isinstance(value, FamilySpec):
        return _base_of(generate(value))
    raise InvalidParams(f"cannot use {value!r} as a base semigroup")


def generate(spec: FamilySpec):
    p = dict(spec.params)
    try:
        if spec.tag == "right_zero":
            return right_zero(int(p["n"]))
        if spec.tag == "semilattice_chain":
            return semilattice_chain(int(p["n"]))
        if spec.tag == "group_cyclic":
            return group_cyclic(int(p["n"]))
        if spec.tag == "right_group":
            return right_group(int(p["n"]), int(p["m"]), p.get("action", "trivial"))
        if spec.tag == "symmetric_inverse_monoid":
            return symmetric_inverse_monoid(int(p["n"]))
        if spec.tag == "brandt":
            return brandt(int(p["g"]), int(p["n"]))
        if spec.tag == "group_action":
            return group_action(int(p["n"]), int(p["m"]), p.get("action", "swap"))
        if spec.tag == "conjugation_action":
            return conjugation_action(_base_of(p["base"]))
        if spec.tag == "left_regular_action":
            return left_regular_action(_base_of(p["base"]))
        if spec.tag == "random_action":
            return random_action(_base_of(p["base"]), int(p["x_size"]), spec.seed)
    except KeyError as exc:
        raise InvalidParams(f"{spec.tag} needs parameter {exc.args[0]!r}") from None
    except ValueError as exc:
        raise InvalidParams(str(exc)) from None
    raise InvalidParams(f"unknown family {spec.tag!r}")


FAMILIES = ("right_zero", "semilattice_chain", "group_cyclic", "right_group",
            "symmetric_inverse_monoid", "brandt", "conjugation_action",
            "left_regular_action", "random_action", "group_action")


@dataclass(frozen=True, eq=False)
class Instance:
    name: str
    kind: str  # "star" or "action"
    obj: Any
    extension: bool = False


def corpus(max_n: int, seed: int = 0) -> list[Instance]:
    """Deterministic instance list for the property suite.

    Semigroup families run over their size parameter up to ``max_n``
    (symmetric inverse monoids stop at 3, right groups at 2*max_n elements,
    Brandt semigroups at 4*max_n elements); every inverse member also
    contributes its conjugation and left regular actions.
    """
    out: list[Instance] = []
    inverse: list[tuple[str, FiniteSemigroup, bool]] = []

    def star_inst(name, T, ext=False):
        out.append(Instance(name, "star", T, ext))
        if T.base.is_inverse:
            inverse.append((name, T.base, ext))

    hi = max(1, max_n)
    for k in range(1, hi + 1):
        star_inst(f"semilattice_chain({k})", inversion_star(semilattice_chain(k)))
    for k in range(2, hi + 1):
        R = right_zero(k)
        out.append(Instance(f"right_zero({k})", "star", StarStructure(R, tuple(range(k)))))
    for k in range(2, hi + 1):
        star_inst(f"group_cyclic({k})", inversion_star(group_cyclic(k)))
    group_actions = []
    for h in range(1, hi + 1):
        for m in range(2, hi + 1):
            if h * m > 2 * hi:
                continue
            acts = ["trivial"]
            if h % 2 == 0:
                acts.append("swap")
            if m > 2 and h % m == 0:
                acts.append("cycle")
            for a in acts:
                out.append(Instance(f"right_group({h},{m},{a})", "star", right_group(h, m, a)))
                if h > 1:
                    group_actions.append((h, m, a))
    for k in range(1, min(hi, 3) + 1):
        star_inst(f"symmetric_inverse_monoid({k})", inversion_star(symmetric_inverse_monoid(k)))
    for g in range(1, hi + 1):
        for k in range(2, hi + 1):
            if g * k * k + 1 <= 4 * hi:
                star_inst(f"brandt({g},{k})", inversion_star(brandt(g, k)), ext=True)

    for name, S, ext in inverse:
        out.append(Instance(f"conjugation_action({name})", "action", conjugation_action(S), ext))
        out.append(Instance(f"left_regular_action({name})", "action", left_regular_action(S), ext))
    for h, m, a in group_actions:
        out.append(Instance(f"group_action({h},{m},{a})", "action", group_action(h, m, a)))
    out.append(Instance("point_action", "action", point_action()))
    if hi >= 2:
        chain = semilattice_chain(2)
        out.append(Instance("sub_action(conjugation_action(semilattice_chain(2)),{0})", "action",
                            sub_action(conjugation_action(chain), [0])))

    rng = np.random.default_rng(seed)
    bases = [(n, S) for n, S, _ in inverse if 1 < S.n <= max(4, hi)]
    for name, S in bases:
        for x_size in range(1, min(hi, 4) + 1):
            sub_seed = int(rng.integers(2**31))
            try:
                A = random_action(S, x_size, sub_seed)
            except GenerationExhausted:
                continue
            out.append(Instance(f"random_action({name},{x_size},seed={sub_seed})", "action", A))
    return out
