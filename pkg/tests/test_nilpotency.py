import itertools

import pytest

from utroots.nilpotency import (
    SIZE_BOUND_ENV,
    SizeLimit,
    ShieldData,
    cyclic_group,
    default_size_bound,
    exponent,
    kp_series,
    lower_central_series,
    shield_class,
    shield_data_cyclic,
    shield_data_from_series,
    subgroup_closure,
    ut_gamma_exponent_log,
    ut_group,
    wreath_class_check,
    wreath_group,
)
from utroots.unitriangular import (
    commutator,
    element_order,
    identity,
    iter_ut,
    transvection,
    ut_inv,
    ut_mul,
)


def _power(x, k):
    acc = identity(x.n, x.p)
    for _ in range(k):
        acc = acc * x
    return acc


def test_closure_examples():
    e = identity(3, 2)
    assert len(subgroup_closure([e], ut_mul, ut_inv)) == 1
    G = subgroup_closure([transvection(3, 2, 1, 2), transvection(3, 2, 2, 3)], ut_mul, ut_inv)
    assert set(G) == set(iter_ut(3, 2))
    C = subgroup_closure([transvection(3, 2, 2, 3)], ut_mul, ut_inv)
    assert len(C) == 2 and e in C


def test_closure_drops_redundant_generators():
    t12, t23 = transvection(3, 2, 1, 2), transvection(3, 2, 2, 3)
    G = subgroup_closure([t12, t23, t12 * t23, identity(3, 2)], ut_mul, ut_inv)
    assert len(G) == 8 and len(G.generators) == 2


def test_closure_needs_identity_for_empty_set():
    with pytest.raises(ValueError):
        subgroup_closure([], ut_mul, ut_inv)
    assert subgroup_closure([], ut_mul, ut_inv, identity(2, 2)).is_trivial


def test_size_limit(monkeypatch):
    with pytest.raises(SizeLimit):
        ut_group(4, 3, bound=100)
    monkeypatch.setenv(SIZE_BOUND_ENV, "50")
    assert default_size_bound() == 50
    with pytest.raises(SizeLimit):
        ut_group(3, 5)
    monkeypatch.delenv(SIZE_BOUND_ENV)
    assert default_size_bound() == 10**6


def test_lcs_examples():
    _, cl = lower_central_series(cyclic_group(2, 2))
    assert cl == 1
    series, cl = lower_central_series(ut_group(3, 2))
    assert cl == 2
    assert set(series[1]) == {identity(3, 2), transvection(3, 2, 1, 3)}
    assert series[-1].is_trivial
    _, cl = lower_central_series(wreath_group(2, 2, 2))
    assert cl == 2


@pytest.mark.parametrize("n,p", [(2, 3), (3, 2), (3, 3), (4, 2), (5, 2)])
def test_ut_class_is_n_minus_1(n, p):
    series, cl = lower_central_series(ut_group(n, p))
    assert cl == n - 1
    assert len(series[-2]) == p  # the last nontrivial term is cyclic of order p


@pytest.mark.parametrize("n,p", [(3, 3), (4, 2)])
def test_lcs_descending_and_normal(n, p, rng):
    G = ut_group(n, p)
    elements = list(G)
    series, _ = lower_central_series(G)
    for big, small in zip(series, series[1:]):
        assert set(small) <= set(big)
        members = list(small)
        for _ in range(30):
            g = elements[int(rng.integers(len(elements)))]
            x = members[int(rng.integers(len(members)))]
            assert ut_inv(g) * x * g in small


def _kp_by_definition(G, p):
    # K_i generated by x^{p^j} for every x in gamma_n and every (n, j) with n p^j >= i
    series, cl = lower_central_series(G)
    out = []
    i = 1
    while True:
        gens = []
        for n in range(1, cl + 1):
            for j in range(0, 8):
                if n * p**j >= i:
                    gens.extend(_power(x, p**j) for x in series[n - 1])
        K = subgroup_closure(gens, G.mul, G.inv, G.identity)
        out.append(set(K))
        if K.is_trivial:
            return out
        i += 1


@pytest.mark.parametrize("G,p", [(lambda: ut_group(3, 2), 2), (lambda: cyclic_group(3, 2), 3),
                                 (lambda: cyclic_group(2, 2), 2), (lambda: ut_group(3, 3), 3)])
def test_kp_series_against_definition(G, p):
    G = G()
    ks = kp_series(G, p)
    assert [set(K) for K in ks] == _kp_by_definition(G, p)
    assert set(ks[0]) == set(G)
    assert all(set(b) <= set(a) for a, b in zip(ks, ks[1:]))


def test_kp_series_of_cyclic():
    for p in (2, 3, 5):
        assert [len(K) for K in kp_series(cyclic_group(p, 1), p)] == [p, 1]
    assert [len(K) for K in kp_series(cyclic_group(3, 2), 3)] == [9, 3, 3, 1]
    assert [len(K) for K in kp_series(cyclic_group(2, 3), 2)] == [8, 4, 2, 2, 1]


def test_kp_series_of_ut3_f2():
    assert [len(K) for K in kp_series(ut_group(3, 2), 2)] == [8, 2, 1]


def test_shield_data_examples():
    assert shield_data_cyclic(2, 1) == ShieldData(2, 1, (1,), 2, 1)
    d = shield_data_cyclic(3, 2)
    assert (d.d, d.e, d.a, d.b) == (3, (1, 0, 1), 9, 6)
    with pytest.raises(ValueError):
        shield_data_cyclic(2, 0)


@pytest.mark.parametrize("p,s", [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3)])
def test_shield_data_matches_series(p, s):
    d = shield_data_cyclic(p, s)
    assert shield_data_from_series(kp_series(cyclic_group(p, s), p), p) == d
    assert d.a == p**s and d.b == (p - 1) * p ** (s - 1)


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2), (3, 3), (4, 2), (5, 2)])
def test_gamma_exponent_against_brute_force(n, p):
    series, _ = lower_central_series(ut_group(n, p))
    for w in range(1, n):
        assert p ** ut_gamma_exponent_log(n, p, w) == exponent(series[w - 1])


def test_gamma_exponent_examples():
    for n, p in itertools.product(range(2, 9), (2, 3, 5)):
        assert ut_gamma_exponent_log(n, p, n - 1) == 1
    assert ut_gamma_exponent_log(4, 2, 1) == 2
    assert ut_gamma_exponent_log(3, 3, 1) == 1
    with pytest.raises(ValueError):
        ut_gamma_exponent_log(4, 2, 4)


def test_shield_class_examples():
    assert shield_class(2, 1, [2, 1]) == 4
    assert shield_class(4, 2, [1]) == 4
    with pytest.raises(ValueError):
        shield_class(2, 1, [])


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("p,s", [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)])
def test_shield_maximum_at_last_term(n, p, s):
    d = shield_data_cyclic(p, s)
    seq = [ut_gamma_exponent_log(n, p, w) for w in range(1, n)]
    terms = [d.a * w + (sw - 1) * d.b for w, sw in enumerate(seq, start=1)]
    assert max(terms) == terms[-1] == p**s * (n - 1)


@pytest.mark.parametrize("n,p,s,cl", [(2, 2, 1, 2), (2, 2, 2, 4), (2, 3, 1, 3), (3, 2, 1, 4)])
def test_class_three_ways(n, p, s, cl):
    rep = wreath_class_check(n, p, s)
    assert (rep.formula, rep.shield, rep.brute) == (cl, cl, cl)
    assert rep.agree and rep.line() == f"{cl} = {cl} = {cl}"


def test_class_check_skips_large_groups():
    rep = wreath_class_check(3, 3, 1, bound=1000)
    assert rep.brute is None and "59049" in rep.skipped
    assert rep.line() == "6 = 6 = skipped"


@pytest.mark.parametrize("n,p,s", [(2, 2, 1), (3, 2, 1), (2, 3, 1), (2, 2, 2)])
def test_target_dimension_is_minimal(n, p, s):
    q = p**s
    m = (n - 1) * q + 1
    _, cl = lower_central_series(ut_group(m - 1, p))
    assert cl == m - 2 < wreath_class_check(n, p, s).brute


def test_exponent():
    assert exponent(cyclic_group(3, 2)) == 9
    assert exponent(ut_group(4, 2)) == 4
    assert max(element_order(a) for a in iter_ut(3, 3)) == exponent(ut_group(3, 3)) == 3


def test_commutator_subgroup_matches_definition():
    G = ut_group(4, 2)
    series, _ = lower_central_series(G)
    direct = subgroup_closure([commutator(x, y) for x in G for y in G], ut_mul, ut_inv, identity(4, 2))
    assert set(direct) == set(series[1])
