import dataclasses
import itertools

import numpy as np
import pytest

from conftest import example_a
from golden import ROOT_FR, ROOT_LC, assignments, render
from utroots.embeddings import extend_hom, phi_closed_form, psi_closed_form
from utroots.roots import (
    coprime_multipliers,
    qth_root,
    qth_root_fr,
    qth_root_lc,
    transvection_root,
    transvection_root_target,
    verify_root,
)
from utroots.unitriangular import (
    UTMatrix,
    format_matrix,
    identity,
    iter_ut,
    random_ut,
    transvection,
    ut_pow,
)


@pytest.mark.parametrize("a12,a13,a23", assignments())
def test_worked_example_roots(a12, a13, a23):
    a = example_a(a12, a13, a23)
    fr, lc = qth_root_fr(a, 1), qth_root_lc(a, 1)
    assert format_matrix(fr.x) == render(ROOT_FR, a12, a13, a23)
    assert format_matrix(lc.x) == render(ROOT_LC, a12, a13, a23)
    assert ut_pow(fr.x, 3) == phi_closed_form(3, 3, 1, a)
    assert ut_pow(lc.x, 3) == psi_closed_form(3, 3, 1, a)


@pytest.mark.parametrize("p,s", [(2, 1), (2, 2), (3, 1), (5, 1), (3, 2)])
def test_base_case_n2(p, s):
    q = p**s
    for g in range(p):
        a = UTMatrix(p, [[1, g], [0, 1]])
        w = qth_root_fr(a, s)
        assert w.factors == (w.x,)
        assert ut_pow(w.x, q) == transvection(q + 1, p, 1, q + 1, g)


@pytest.mark.parametrize("variant", ["fr", "lc"])
def test_identity_gives_pure_chains(variant):
    for n, p, s in [(2, 2, 1), (3, 3, 1), (4, 2, 2)]:
        w = qth_root(identity(n, p), s, variant)
        assert verify_root(w).ok
        assert ut_pow(w.x, w.q).is_identity()
        assert not w.x.is_identity()


def test_factor_order():
    a = example_a(1, 2, 1)
    fr = qth_root_fr(a, 1)
    # x = x_2 x_1 with x_1 touching column alpha(1,1) = 2
    assert fr.factors[1][1, 2] == 1 and fr.factors[0][1, 2] == 0
    lc = qth_root_lc(a, 1)
    # x = x_1 x_2 with x_1 working on row n-1 = 2
    assert lc.factors[0][4, 5] == 1 and lc.factors[1][1, 2] == 1


@pytest.mark.parametrize("n,p,s", [(n, p, s) for n in (2, 3, 4, 5) for p in (2, 3) for s in (1, 2)
                                   if (n - 1) * p**s + 1 <= 33])
def test_random_roots_verify(n, p, s, rng):
    for _ in range(25):
        a = random_ut(n, p, rng)
        for variant in ("fr", "lc"):
            w = qth_root(a, s, variant)
            assert verify_root(w).ok
            assert w.target_image == extend_hom(w.embedding, a)


@pytest.mark.parametrize("n,p", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
def test_roots_exist_for_every_element(n, p):
    # the same embedding works for every a simultaneously
    for a in iter_ut(n, p):
        for variant in ("fr", "lc"):
            assert verify_root(qth_root(a, 1, variant)).ok


def test_unknown_variant():
    with pytest.raises(ValueError):
        qth_root(identity(3, 3), 1, "xy")
    with pytest.raises(ValueError):
        qth_root_fr(identity(1, 3), 1)


def test_perturbed_root_is_rejected():
    a = example_a(1, 2, 1)
    w = qth_root_fr(a, 1)
    arr = w.x.array.copy()
    arr[0, 4] = (arr[0, 4] + 1) % 3
    bad = dataclasses.replace(w, x=UTMatrix(3, arr))
    rep = verify_root(bad)
    assert not rep.checks["power"] and not rep.checks["factors"]
    # the reported cell is the first row-major mismatch of x^3 against phi(a)
    diff = np.argwhere(ut_pow(bad.x, 3).array != w.target_image.array)
    r, c = diff[0] + 1
    assert rep.witnesses["power"].startswith(f"x^3 differs from the image at ({r}, {c})")


def test_wrong_target_is_rejected():
    w = qth_root_lc(example_a(0, 0, 1), 1)
    bad = dataclasses.replace(w, target_image=identity(7, 3))
    rep = verify_root(bad)
    assert not rep.ok and rep.checks["factors"]
    assert "(4, 7)" in rep.witnesses["power"]


# transvection roots

def test_transvection_root_smallest():
    emb, x = transvection_root(2, 2, 1, 1, 1, 2, 1)
    assert x == UTMatrix.from_entries(3, 2, {(1, 2): 1, (2, 3): 1})
    assert ut_pow(x, 2) == transvection(3, 2, 1, 3)
    assert extend_hom(emb, transvection(2, 2, 1, 2)) == ut_pow(x, 2)


def test_transvection_root_with_multiplier():
    emb, x = transvection_root(2, 3, 1, 2, 1, 2, 1)
    assert x[1, 2] == 2
    assert ut_pow(x, 6) == transvection(4, 3, 1, 4, 1)


def test_transvection_root_of_identity():
    _, x = transvection_root(3, 3, 1, 1, 1, 3, 0)
    assert x[1, 2] == 0
    assert ut_pow(x, 3).is_identity()


def test_transvection_root_errors():
    with pytest.raises(ValueError):
        transvection_root(3, 3, 1, 3, 1, 2, 1)
    with pytest.raises(ValueError):
        transvection_root(3, 3, 1, 0, 1, 2, 1)
    with pytest.raises(IndexError):
        transvection_root(3, 3, 1, 1, 2, 2, 1)
    with pytest.raises(IndexError):
        transvection_root(3, 3, 1, 1, 1, 4, 1)


def test_coprime_multipliers():
    assert coprime_multipliers(2) == [1, 3]
    assert coprime_multipliers(3) == [1, 2, 4]
    assert coprime_multipliers(5) == [1, 2, 6]


@pytest.mark.parametrize("n,p,s", [(n, p, s) for n in (2, 3, 4) for p in (2, 3) for s in (1, 2)])
def test_transvection_roots_exhaustive(n, p, s):
    q = p**s
    for r in coprime_multipliers(p):
        for i, j in itertools.combinations(range(1, n + 1), 2):
            for g in range(p):
                emb, x = transvection_root(n, p, s, r, i, j, g)
                target = extend_hom(emb, transvection(n, p, i, j, g))
                assert target == transvection_root_target(n, p, s, i, j, g)
                assert ut_pow(x, q * r) == target
