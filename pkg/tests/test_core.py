import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import pinj_oracle, z2_r2_oracle
from sgt.core import (
    SemigroupHom,
    Witness,
    check_hom,
    classify,
    green_relations,
    identity_hom,
    idempotents,
    inverses_of,
    load_semigroup,
    local_submonoid,
    natural_partial_order,
    partial_order_witness,
    partition_classes,
)
from sgt.errors import (
    DimensionMismatch,
    NotAssociative,
    NotIdempotent,
    NotRegular,
    OutOfRangeEntry,
    TooLarge,
)
from sgt.families import corpus, semilattice_chain, symmetric_inverse_monoid


def test_load_trivial():
    S = load_semigroup(1, [[0]])
    assert S.n == 1 and S.mul(0, 0) == 0


def test_load_right_zero_matches_exhaustive_triples():
    table = [[0, 1], [0, 1]]
    ok = all(table[table[a][b]][c] == table[a][table[b][c]]
             for a in range(2) for b in range(2) for c in range(2))
    assert ok
    assert load_semigroup(2, table).n == 2


def test_out_of_range_entry():
    with pytest.raises(OutOfRangeEntry) as exc:
        load_semigroup(2, [[0, 1], [2, 1]])
    assert exc.value.witness == Witness("out_of_range", (1, 0))


def test_not_associative_reports_smallest_triple():
    table = [[1, 0], [0, 0]]
    brute = next((a, b, c) for a in range(2) for b in range(2) for c in range(2)
                 if table[table[a][b]][c] != table[a][table[b][c]])
    with pytest.raises(NotAssociative) as exc:
        load_semigroup(2, table)
    assert exc.value.witness.elements == brute


def test_dimension_and_cap():
    with pytest.raises(DimensionMismatch):
        load_semigroup(2, [[0, 1]])
    with pytest.raises(TooLarge):
        load_semigroup(3, [[0] * 3] * 3, max_n=2)
    assert load_semigroup(3, [[0] * 3] * 3, max_n=None).n == 3


def test_idempotents(rz2, chain2, z2):
    assert idempotents(rz2) == {0, 1}
    assert idempotents(chain2) == {0, 1}
    assert idempotents(z2) == {0}


def test_inverses_semilattice_self_inverse(chain2):
    assert inverses_of(chain2, 0) == {0}
    assert inverses_of(chain2, 1) == {1}


def test_inverses_right_group_against_oracle(rgroup):
    o = z2_r2_oracle()
    expected = {o.idx(b) for b in o.inverses((1, 0))}
    assert expected == {2, 3}
    assert inverses_of(rgroup.base, 2) == expected


def test_non_regular_element(monogenic):
    assert inverses_of(monogenic, 0) == frozenset()


def test_classify_right_zero(rz2):
    c = classify(rz2)
    assert c.is_band and c.is_right_normal_band and c.is_orthodox
    assert not c.is_inverse
    w = c.witnesses["is_inverse"]
    e, f = w.elements
    assert rz2.mul(e, f) != rz2.mul(f, e)


def test_classify_chain_inverse(chain2):
    assert classify(chain2).is_inverse


def test_classify_right_group(rgroup):
    c = classify(rgroup.base)
    assert c.is_regular and c.is_right_generalized_inverse and not c.is_inverse


def test_classify_non_regular(monogenic):
    c = classify(monogenic)
    assert not c.is_regular and c.witnesses["is_regular"].elements == (0,)
    assert not c.is_orthodox and not c.is_inverse and not c.is_right_generalized_inverse


def test_right_normal_band_l_discrete(rz2):
    assert green_relations(rz2).L == (0, 1)


def test_group_green_universal(z2):
    g = green_relations(z2)
    for rel in (g.L, g.R, g.H, g.D, g.J):
        assert rel == (0, 0)


def test_i2_d_classes_by_rank(i2):
    o = pinj_oracle(2)
    rank_sizes = sorted({len(f): sum(1 for g in o.elements if len(g) == len(f))
                         for f in o.elements}.values())
    D = green_relations(i2).D
    assert sorted(len(c) for c in partition_classes(D)) == rank_sizes == [1, 2, 4]
    for cls in partition_classes(D):
        assert len({len(o.elements[a]) for a in cls}) == 1  # one rank per class


def test_natural_order_examples(chain2, rz2, rgroup):
    assert natural_partial_order(chain2) == {(0, 0), (1, 1), (0, 1)}
    assert natural_partial_order(rz2) == {(0, 0), (1, 1)}
    o = z2_r2_oracle()
    brute = {(o.idx(a), o.idx(b)) for a in o.elements for b in o.elements if o.leq(a, b)}
    assert brute == {(i, i) for i in range(4)}
    assert natural_partial_order(rgroup.base) == brute


def test_natural_order_requires_regular(monogenic):
    with pytest.raises(NotRegular):
        natural_partial_order(monogenic)


def test_natural_order_on_i2_matches_oracle(i2):
    o = pinj_oracle(2)
    brute = {(o.idx(a), o.idx(b)) for a in o.elements for b in o.elements if o.leq(a, b)}
    # for partial injections the natural order is restriction
    assert brute == {(o.idx(a), o.idx(b)) for a in o.elements for b in o.elements if a <= b}
    assert natural_partial_order(i2) == brute


def test_band_order_is_e_eq_ef_eq_fe(rz2):
    for e in range(2):
        for f in range(2):
            direct = rz2.mul(e, f) == e == rz2.mul(f, e)
            assert ((e, f) in natural_partial_order(rz2)) == direct


def test_check_hom_examples(rgroup, rz2, chain2, z2):
    assert check_hom(identity_hom(rgroup.base)) is None
    proj = SemigroupHom(rgroup.base, z2, (0, 0, 1, 1))
    assert check_hom(proj) is None
    assert check_hom(proj, rgroup.star) is None  # star preserved automatically
    bad = SemigroupHom(rz2, chain2, (0, 1))
    w = check_hom(bad)
    assert w == Witness("not_multiplicative", (0, 1))


def test_local_submonoid(i2, rz2):
    whole, carrier = local_submonoid(semilattice_chain(3), 2)
    assert carrier == (0, 1, 2) and whole == semilattice_chain(3)
    sub, carrier = local_submonoid(rz2, 0)
    assert carrier == (0,) and sub.n == 1
    e = i2.labels.index("{0->0}")
    o = pinj_oracle(2)
    ev = o.elements[e]
    brute = sorted({o.idx(o.op(o.op(ev, a), ev)) for a in o.elements})
    sub, carrier = local_submonoid(i2, e)
    assert list(carrier) == brute and sub.n == 2
    assert classify(sub).is_inverse
    with pytest.raises(NotIdempotent):
        local_submonoid(i2, i2.labels.index("{0->1}"))


STARS = [i for i in corpus(4, 7) if i.kind == "star"]


@pytest.mark.parametrize("inst", STARS, ids=lambda i: i.name)
def test_corpus_invariants(inst):
    S = inst.obj.base
    assert check_hom(identity_hom(S)) is None
    c = classify(S)
    assert not c.is_inverse or c.is_orthodox
    assert not c.is_orthodox or c.is_regular
    if c.is_right_normal_band:
        assert green_relations(S).L == tuple(range(S.n))
    if c.is_right_generalized_inverse:
        assert c.is_locally_inverse
        E = S.idempotents
        for e in E:
            for f in E:
                for a in range(S.n):
                    assert S.product(e, f, a) == S.product(f, e, a)
    if c.is_regular:
        assert partial_order_witness(S.order_matrix) is None


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.data())
def test_random_tables_either_load_or_report_smallest_triple(n, data):
    table = [[data.draw(st.integers(0, n - 1)) for _ in range(n)] for _ in range(n)]
    brute = next(((a, b, c) for a in range(n) for b in range(n) for c in range(n)
                  if table[table[a][b]][c] != table[a][table[b][c]]), None)
    if brute is None:
        assert load_semigroup(n, table).n == n
    else:
        with pytest.raises(NotAssociative) as exc:
            load_semigroup(n, table)
        assert exc.value.witness.elements == brute


def test_i2_has_seven_elements_and_four_idempotents(i2):
    o = pinj_oracle(2)
    assert len(o.elements) == i2.n == 7
    assert len(o.idempotents()) == len(i2.idempotents) == 4


def test_table_is_read_only(rz2):
    with pytest.raises(ValueError):
        rz2.table[0, 0] = 1
    assert isinstance(rz2.table, np.ndarray)


def test_symmetric_inverse_monoid_matches_oracle_table():
    o = pinj_oracle(2)
    S = symmetric_inverse_monoid(2)
    # both enumerate by rank, domain, image, so indices line up
    for a in range(7):
        for b in range(7):
            assert S.mul(a, b) == o.idx(o.op(o.elements[a], o.elements[b]))
