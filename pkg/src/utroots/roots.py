"""Adjunction of p^s-th roots inside larger unitriangular groups."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .embeddings import (
    GeneratorImages,
    IndexScheme,
    VerificationReport,
    phi_closed_form,
    phi_fr,
    psi_closed_form,
    psi_lc,
    simple_embedding,
)
from .prime_field import check_prime, inv_mod
from .unitriangular import UTMatrix, transvection, ut_pow, ut_product


@dataclass(frozen=True)
class RootWitness:
    p: int
    s: int
    q: int
    source: UTMatrix
    embedding: GeneratorImages
    target_image: UTMatrix
    x: UTMatrix
    factors: tuple[UTMatrix, ...]
    variant: str = "fr"

    @property
    def m(self) -> int:
        return self.x.n


def transvection_root(n: int, p: int, s: int, r: int, i: int, j: int,
                      gamma: int) -> tuple[GeneratorImages, UTMatrix]:
    """Root of ``t_{i,j}(gamma)`` of order ``p^s * r`` in UT_{n + p^s - 1}.

    The ``q - 1`` new positions go right after ``i``; the root is the chain
    ``e + gamma_1 e_{i,i+1} + e_{i+1,i+2} + ... + e_{i+q-1, j'}`` with
    ``gamma_1 = gamma / r`` and every later link equal to 1.
    """
    check_prime(p)
    if s < 1:
        raise ValueError(f"need s >= 1, got {s}")
    if r < 1 or math.gcd(p, r) != 1:
        raise ValueError(f"need a positive r coprime to p={p}, got {r}")
    if not 1 <= i < j <= n:
        raise IndexError(f"t_({i},{j}) is not defined in UT_{n}")
    q = p**s
    m = n + q - 1
    breakpoints = [l if l <= i else l + q - 1 for l in range(1, n + 1)]
    emb = simple_embedding(n, p, breakpoints)
    jj = breakpoints[j - 1]
    entries = {(i, i + 1): inv_mod(r, p) * gamma}
    for l in range(i + 1, i + q - 1):
        entries[l, l + 1] = 1
    entries[i + q - 1, jj] = 1
    x = UTMatrix.from_entries(m, p, entries)
    return emb, x


def coprime_multipliers(p: int) -> list[int]:
    """The multipliers r in {1, 2, p + 1} that are coprime to p."""
    return sorted(r for r in {1, 2, p + 1} if math.gcd(p, r) == 1)


def _fr_factor(sc: IndexScheme, p: int, a: UTMatrix, k: int) -> UTMatrix:
    # e + sum_{i<=k} a_{i,k+1} e_{i, alpha(k,1)} + chain alpha(k,1) -> ... -> k+1
    out = np.eye(sc.m, dtype=np.int64)
    col = sc.alpha(k, 1) - 1
    for i in range(1, k + 1):
        out[sc.pos(i) - 1, col] = a[i, k + 1]
    chain = [sc.alpha(k, j) for j in range(1, sc.q)] + [sc.pos(k + 1)]
    for u, v in zip(chain, chain[1:]):
        out[u - 1, v - 1] = 1
    return UTMatrix._raw(p, out)


def _lc_factor(sc: IndexScheme, p: int, a: UTMatrix, r: int) -> UTMatrix:
    # chain r -> alpha(r,1) -> ... -> alpha(r,q-1), then a_{r,l} e_{alpha(r,q-1), l}
    out = np.eye(sc.m, dtype=np.int64)
    chain = [sc.pos(r)] + [sc.alpha(r, j) for j in range(1, sc.q)]
    for u, v in zip(chain, chain[1:]):
        out[u - 1, v - 1] = 1
    row = chain[-1] - 1
    for l in range(r + 1, sc.n + 1):
        out[row, sc.pos(l) - 1] = a[r, l]
    return UTMatrix._raw(p, out)


def qth_root_fr(a: UTMatrix, s: int) -> RootWitness:
    """A ``p^s``-th root of the first-row image of ``a``: ``x = x_{n-1} ... x_1``."""
    n, p = a.n, a.p
    if n < 2 or s < 1:
        raise ValueError("need n >= 2 and s >= 1")
    sc = IndexScheme(n, p**s)
    factors = tuple(_fr_factor(sc, p, a, k) for k in range(n - 1, 0, -1))
    x = ut_product(factors)
    return RootWitness(p, s, sc.q, a, phi_fr(n, p, s), phi_closed_form(n, p, s, a),
                       x, factors, "fr")


def qth_root_lc(a: UTMatrix, s: int) -> RootWitness:
    """A ``p^s``-th root of the last-column image of ``a``: ``x = x_1 ... x_{n-1}``,
    where ``x_k`` works on row ``n - k``."""
    n, p = a.n, a.p
    if n < 2 or s < 1:
        raise ValueError("need n >= 2 and s >= 1")
    sc = IndexScheme(n, p**s)
    factors = tuple(_lc_factor(sc, p, a, n - k) for k in range(1, n))
    x = ut_product(factors)
    return RootWitness(p, s, sc.q, a, psi_lc(n, p, s), psi_closed_form(n, p, s, a),
                       x, factors, "lc")


def qth_root(a: UTMatrix, s: int, variant: str = "fr") -> RootWitness:
    if variant == "fr":
        return qth_root_fr(a, s)
    if variant == "lc":
        return qth_root_lc(a, s)
    raise ValueError(f"unknown variant {variant!r}")


def _first_mismatch(x: UTMatrix, y: UTMatrix) -> tuple[int, int] | None:
    diff = np.argwhere(x.array != y.array)
    if len(diff) == 0:
        return None
    r, c = diff[0]
    return int(r) + 1, int(c) + 1


def verify_root(w: RootWitness) -> VerificationReport:
    """Recompute ``x^q`` and the factor product and compare entry-wise."""
    rep = VerificationReport({"power": True, "factors": True})
    xq = ut_pow(w.x, w.q)
    bad = _first_mismatch(xq, w.target_image)
    if bad is not None:
        r, c = bad
        rep.record("power", False,
                   f"x^{w.q} differs from the image at ({r}, {c}): {xq[r, c]} != {w.target_image[r, c]}")
    prod = ut_product(w.factors, w.x.n, w.p)
    bad = _first_mismatch(prod, w.x)
    if bad is not None:
        rep.record("factors", False, f"factor product differs from x at {bad}")
    return rep


def transvection_root_target(n: int, p: int, s: int, i: int, j: int, gamma: int) -> UTMatrix:
    """The embedded ``t_{i,j}(gamma)`` that :func:`transvection_root` aims at."""
    q = p**s
    return transvection(n + q - 1, p, i, j + q - 1, gamma)
