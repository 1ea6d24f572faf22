import pytest

from sgt.action import ActionMorphism, check_etale_hom, etale_characterization, load_action
from sgt.core import SemigroupHom, identity_hom, is_right_generalized_inverse
from sgt.errors import NoGlobalSupport, NotEtale
from sgt.equivalence import (
    action_morphism_to_star_hom,
    build_action_from_etale,
    build_semidirect,
    canonical_action,
    check_semidirect_order,
    global_support_functors,
    lift_action_morphism,
    over_inverse,
    restrict_hom,
    roundtrip_action,
    roundtrip_etale,
    star_hom_to_action_morphism,
)
from sgt.families import (
    conjugation_action,
    corpus,
    group_action,
    group_cyclic,
    left_regular_action,
    point_action,
    semilattice_chain,
    sub_action,
)
from sgt.gamma import gamma, gamma_quotient
from sgt.star import inversion_star


@pytest.fixture
def swap():
    return group_action(2, 2, "swap")


def test_semidirect_of_swap_is_right_group(swap, rgroup):
    R = build_semidirect(swap)
    assert R.pairs == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert R.product == rgroup.base
    assert R.star == rgroup
    assert R.projection.map == (0, 0, 1, 1)
    assert check_semidirect_order(R) is None


def test_semidirect_of_chain_conjugation(chain2):
    R = build_semidirect(conjugation_action(chain2))
    assert R.pairs == ((0, 0), (1, 1))
    assert R.product == chain2
    assert (0, 1) in {tuple(p) for p in zip(*R.product.order_matrix.nonzero())}


def test_semidirect_trivial():
    R = build_semidirect(point_action())
    assert R.product.n == 1 and R.projection.is_surjective()


def test_semidirect_without_global_support(chain2):
    A = sub_action(conjugation_action(chain2), [0])
    R = build_semidirect(A)
    assert R.pairs == ((0, 0),) and not R.projection.is_surjective()


def test_semidirect_json(swap):
    js = build_semidirect(swap).to_json()
    assert js["pairs"] == [[0, 0], [0, 1], [1, 0], [1, 1]]
    assert js["star"] == [0, 1, 3, 2]
    assert js["projection"] == [0, 0, 1, 1]


def test_lift_identity_and_swap(swap):
    R = build_semidirect(swap)
    h = lift_action_morphism(swap, swap, ActionMorphism((0, 1)), R, R)
    assert h == identity_hom(R.product)
    auto = lift_action_morphism(swap, swap, ActionMorphism((1, 0)), R, R)
    assert auto.is_injective() and auto.is_surjective()
    assert auto.map == (1, 0, 3, 2)


def test_lift_inclusion_injective():
    S = semilattice_chain(2)
    # 3-point action: a copy of the conjugation action plus the point {0}
    A = load_action(S, 3, [0, 1, 0], [[0, 0, 2], [0, 1, 2]])
    B = sub_action(A, [0, 1])
    RA, RB = build_semidirect(A), build_semidirect(B)
    h = lift_action_morphism(B, A, ActionMorphism((0, 1)), RB, RA)
    assert h.is_injective()


def test_build_action_from_projection(swap, rgroup):
    theta = gamma_quotient(rgroup.base).projection
    B = build_action_from_etale(theta, rgroup)
    assert B.S == swap.S and B.rows == swap.rows and B.p == swap.p


def test_build_action_from_identity_is_conjugation(i2):
    B = build_action_from_etale(identity_hom(i2), inversion_star(i2))
    assert B == conjugation_action(i2)


def test_build_action_rejects_non_etale(chain2):
    with pytest.raises(NotEtale):
        build_action_from_etale(SemigroupHom(chain2, chain2, (0, 0)), inversion_star(chain2))


def test_restrict_hom(swap, rgroup):
    theta = gamma_quotient(rgroup.base).projection
    assert restrict_hom(identity_hom(rgroup.base), rgroup, theta, rgroup, theta).beta == (0, 1)
    auto = SemigroupHom(rgroup.base, rgroup.base, (1, 0, 3, 2))
    assert restrict_hom(auto, rgroup, theta, rgroup, theta).beta == (1, 0)
    # lifting then restricting recovers beta under (p(x), x) <-> x
    R = build_semidirect(swap)
    lifted = lift_action_morphism(swap, swap, ActionMorphism((1, 0)), R, R)
    m = restrict_hom(lifted, R.star, R.projection, R.star, R.projection)
    E = R.product.idempotents
    assert tuple(R.pairs[E[m.beta[i]]][1] for i in range(len(E))) == \
        tuple((1, 0)[R.pairs[e][1]] for e in E)


def test_roundtrips(swap, chain2, i2, rgroup, rz2):
    for A in (swap, conjugation_action(chain2), left_regular_action(i2)):
        rep = roundtrip_action(A)
        assert rep.ok and len(rep.maps["idempotent_to_x"]) == A.x_size
    rep = roundtrip_etale(gamma_quotient(rgroup.base).projection, rgroup)
    assert rep.ok
    # α((h,x)) = (h, (0,x)): pair (h, x) in S∗E(T) has index 2h + x
    assert rep.maps["alpha"] == [0, 1, 2, 3]
    rep = roundtrip_etale(identity_hom(chain2), inversion_star(chain2))
    assert rep.maps["alpha"] == [0, 1]
    from sgt.star import load_star
    rep = roundtrip_etale(gamma_quotient(rz2).projection, load_star(rz2, [0, 1]))
    assert rep.maps["alpha"] == [0, 1]


def test_global_support_functors(swap, rgroup):
    auto = SemigroupHom(rgroup.base, rgroup.base, (1, 0, 3, 2))
    m = global_support_functors(auto, rgroup, rgroup)
    assert m.alpha.map == (0, 1) and m.beta == (1, 0)
    R = build_semidirect(swap)
    h = global_support_functors(swap, swap, ActionMorphism((0, 1)))
    assert h == identity_hom(R.product)
    P = load_action(semilattice_chain(1), 1, [0], [[0]])
    collapse = ActionMorphism((0, 0), SemigroupHom(swap.S, P.S, (0, 0)))
    h = action_morphism_to_star_hom(swap, P, collapse)
    assert h.target.n == 1 and h.map == (0, 0, 0, 0)


def test_functors_require_global_support(chain2):
    A = sub_action(conjugation_action(chain2), [0])
    with pytest.raises(NoGlobalSupport):
        action_morphism_to_star_hom(A, A, ActionMorphism((0,)))


def test_canonical_action_has_global_support(rgroup):
    ca = canonical_action(rgroup)
    assert ca.action.S.n == 2 and ca.action.x_size == 2


def test_star_hom_identity_maps_to_identity(rgroup):
    m = star_hom_to_action_morphism(identity_hom(rgroup.base), rgroup, rgroup)
    assert m.alpha.map == (0, 1) and m.beta == (0, 1)


def test_over_inverse(rgroup, i2):
    o = over_inverse(rgroup)
    assert o.quotient.quotient.n == 2 and o.surjective and o.etale and o.l_cover
    o = over_inverse(inversion_star(i2))
    assert o.quotient.quotient == i2


ACTIONS = [i.obj for i in corpus(3, 7) if i.kind == "action"]


@pytest.mark.parametrize("A", ACTIONS, ids=lambda A: f"S{A.S.n}X{A.x_size}")
def test_semidirect_properties(A):
    R = build_semidirect(A)  # verifies everything internally
    T = R.product
    assert is_right_generalized_inverse(T)
    assert set(T.idempotents) == {R.index(A.p[x], x) for x in range(A.x_size)}
    inv = A.S.inversion
    d = [A.S.mul(inv[s], s) for s in range(A.S.n)]
    for i, (s, x) in enumerate(R.pairs):
        assert d[s] == A.p[x]
        assert R.pairs[R.star(i)] == (inv[s], A(s, x))
        for j, (t, y) in enumerate(R.pairs):
            st = A.S.mul(s, t)
            assert R.pairs[T.mul(i, j)] == (st, A(d[st], y))
    c = etale_characterization(R.projection, R.star)
    assert c.etale and c.kernel_is_gamma and c.image_is_left_ideal
    assert R.projection.kernel() == gamma(T).class_of
    assert roundtrip_action(A).ok
    assert roundtrip_etale(R.projection, R.star).ok
    assert check_etale_hom(R.projection, R.star).etale


def test_non_etale_into_group():
    Z2 = group_cyclic(2)
    with pytest.raises(NotEtale):
        build_action_from_etale(SemigroupHom(Z2, semilattice_chain(1), (0, 0)), inversion_star(Z2))
