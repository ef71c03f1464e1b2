"""Embeddings of UT_n(F_p) into UT_m(F_p) given by generator images.

Between consecutive integer labels ``i`` and ``i+1`` sit ``q - 1`` extra labels
``alpha(i, 1) < ... < alpha(i, q-1)``; :class:`IndexScheme` compiles the whole
ordered label set onto positions ``1..m`` with ``m = (n-1)q + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .unitriangular import (
    UTMatrix,
    commutator,
    decompose_transvections,
    element_order,
    fr_a_decompose,
    group_order,
    identity,
    iter_ut,
    lc_b_decompose,
    transvection,
    ut_mul,
    ut_pow,
    ut_product,
)


@dataclass(frozen=True)
class IndexScheme:
    n: int
    q: int

    def __post_init__(self):
        if self.n < 1 or self.q < 1:
            raise ValueError("need n >= 1 and q >= 1")

    @property
    def m(self) -> int:
        return (self.n - 1) * self.q + 1

    def pos(self, i: int) -> int:
        """Position of the integer label ``i``."""
        if not 1 <= i <= self.n:
            raise IndexError(f"label {i} outside 1..{self.n}")
        return (i - 1) * self.q + 1

    def alpha(self, i: int, j: int) -> int:
        """Position of the inserted label ``alpha(i, j)``, ``i < alpha(i, j) < i+1``."""
        if not 1 <= i < self.n or not 1 <= j < self.q:
            raise IndexError(f"alpha({i}, {j}) undefined for n={self.n}, q={self.q}")
        return (i - 1) * self.q + 1 + j

    def block(self, k: int) -> list[int]:
        """The ordered label set I_k as positions: ``[1]`` for k = 1, else
        ``alpha(k-1, 1), ..., alpha(k-1, q-1), k``."""
        if k == 1:
            return [1]
        return [self.alpha(k - 1, j) for j in range(1, self.q)] + [self.pos(k)]

    def labels(self) -> list[tuple]:
        """All labels in increasing order; ``("i", i)`` or ``("alpha", i, j)``."""
        out = []
        for i in range(1, self.n + 1):
            out.append(("i", i))
            if i < self.n:
                out.extend(("alpha", i, j) for j in range(1, self.q))
        return out


def _tv(m: int, p: int, entries: dict[tuple[int, int], int]) -> UTMatrix:
    return UTMatrix.from_entries(m, p, entries)


@dataclass(frozen=True)
class GeneratorImages:
    """Images of ``t_{1,2}, ..., t_{n-1,n}`` under a map UT_n -> UT_m."""

    source_n: int
    target_m: int
    p: int
    images: tuple[UTMatrix, ...]
    name: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.source_n - 1:
            raise ValueError(f"need {self.source_n - 1} generator images, got {len(self.images)}")
        for g in self.images:
            if g.n != self.target_m or g.p != self.p:
                raise ValueError("generator image has the wrong size or modulus")

    def image(self, i: int) -> UTMatrix:
        """Image of ``t_{i,i+1}`` (1-based)."""
        return self.images[i - 1]

    @cached_property
    def transvection_images(self) -> dict[tuple[int, int], UTMatrix]:
        """Induced images of every ``t_{i,j}``: commutators ``[T(i, j-1), T(j-1, j)]``."""
        table = {}
        n = self.source_n
        for i in range(1, n):
            table[i, i + 1] = self.images[i - 1]
        for d in range(2, n):
            for i in range(1, n - d + 1):
                j = i + d
                table[i, j] = commutator(table[i, j - 1], table[j - 1, j])
        return table

    @cached_property
    def _power_table(self) -> dict[tuple[int, int, int], np.ndarray]:
        out = {}
        for (i, j), t in self.transvection_images.items():
            acc = t
            for g in range(1, self.p):
                out[i, j, g] = acc.array
                acc = ut_mul(acc, t)
        return out

    def transvection_image(self, i: int, j: int, gamma: int = 1) -> UTMatrix:
        gamma %= self.p
        if gamma == 0:
            return identity(self.target_m, self.p)
        return UTMatrix._raw(self.p, self._power_table[i, j, gamma].copy())


def extend_hom(images: GeneratorImages, a: UTMatrix) -> UTMatrix:
    """Image of ``a`` under the homomorphism determined by ``images``.

    ``a`` is split by :func:`decompose_transvections`; each ``t_{i,j}(g)`` maps to
    ``T(i,j)^g`` where ``T`` comes from iterated commutators of the generators.
    """
    if a.n != images.source_n or a.p != images.p:
        raise ValueError(f"expected an element of UT_{images.source_n}(F_{images.p}), "
                         f"got UT_{a.n}(F_{a.p})")
    p = images.p
    table = images._power_table
    acc = np.eye(images.target_m, dtype=np.int64)
    for t in decompose_transvections(a):
        acc = (acc @ table[t.i, t.j, t.gamma.value]) % p
    return UTMatrix._raw(p, acc)


# constructors

def simple_embedding(n: int, p: int, breakpoints: Sequence[int]) -> GeneratorImages:
    """``t_{i,i+1} -> t'_{k_i, k_{i+1}}`` for breakpoints ``1 = k_1 < ... < k_n = m``."""
    k = list(breakpoints)
    if len(k) != n:
        raise ValueError(f"need {n} breakpoints, got {len(k)}")
    if k[0] != 1 or any(b <= a for a, b in zip(k, k[1:])):
        raise ValueError(f"breakpoints must start at 1 and increase strictly: {k}")
    m = k[-1]
    images = [transvection(m, p, k[i], k[i + 1]) for i in range(n - 1)]
    return GeneratorImages(n, m, p, tuple(images), "simple", {"breakpoints": tuple(k)})


def _check_nps(n: int, s: int) -> None:
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if s < 1:
        raise ValueError(f"need s >= 1, got {s}")


def phi_fr(n: int, p: int, s: int) -> GeneratorImages:
    """The first-row embedding: the generator ``t_{k,k+1}`` for ``k >= 2`` also
    drags along ``t'_{alpha(k-1,j), alpha(k,j)}`` for every j."""
    _check_nps(n, s)
    sc = IndexScheme(n, p**s)
    images = []
    for k in range(1, n):
        entries = {(sc.pos(k), sc.pos(k + 1)): 1}
        if k >= 2:
            for j in range(1, sc.q):
                entries[sc.alpha(k - 1, j), sc.alpha(k, j)] = 1
        images.append(_tv(sc.m, p, entries))
    return GeneratorImages(n, sc.m, p, tuple(images), "phi_fr", {"s": s})


def psi_lc(n: int, p: int, s: int) -> GeneratorImages:
    """The last-column embedding, mirror of :func:`phi_fr`."""
    _check_nps(n, s)
    sc = IndexScheme(n, p**s)
    images = []
    for k in range(1, n):
        entries = {(sc.pos(k), sc.pos(k + 1)): 1}
        if k <= n - 2:
            for j in range(1, sc.q):
                entries[sc.alpha(k, j), sc.alpha(k + 1, j)] = 1
        images.append(_tv(sc.m, p, entries))
    return GeneratorImages(n, sc.m, p, tuple(images), "psi_lc", {"s": s})


def alternating_row(m: int, p: int, row: int, cols: Sequence[int]) -> UTMatrix:
    """``e + sum (-1)^k e_{row, cols[k]}``; the factors all commute."""
    entries = {(row, c): (-1) ** k for k, c in enumerate(cols)}
    return _tv(m, p, entries)


def theta(n: int, p: int, s: int) -> GeneratorImages:
    """``t_{i,i+1} -> t'_{i,alpha(i,1)} t'_{i,alpha(i,2)}^-1 ... t'_{i,i+1}``."""
    _check_nps(n, s)
    sc = IndexScheme(n, p**s)
    images = []
    for i in range(1, n):
        cols = [sc.alpha(i, j) for j in range(1, sc.q)] + [sc.pos(i + 1)]
        images.append(alternating_row(sc.m, p, sc.pos(i), cols))
    return GeneratorImages(n, sc.m, p, tuple(images), "theta", {"s": s})


def theta_transvection_image(n: int, p: int, s: int, i: int, j: int) -> UTMatrix:
    """Closed form of the induced image of ``t_{i,j}`` under theta: row ``i``
    carries the alternating signs at the labels of I_j."""
    sc = IndexScheme(n, p**s)
    cols = [sc.alpha(j - 1, l) for l in range(1, sc.q)] + [sc.pos(j)]
    return alternating_row(sc.m, p, sc.pos(i), cols)


# closed forms

def phi_closed_form(n: int, p: int, s: int, a: UTMatrix) -> UTMatrix:
    """Image of ``a`` under :func:`phi_fr` written down entry by entry.

    The first row of ``a`` lands on row 1 at the integer positions; the A_n part
    is copied onto the integer positions and onto each alpha-layer j.
    """
    if a.n != n or a.p != p:
        raise ValueError(f"expected an element of UT_{n}(F_{p})")
    sc = IndexScheme(n, p**s)
    _, abar = fr_a_decompose(a)
    out = np.eye(sc.m, dtype=np.int64)
    for j in range(2, n + 1):
        out[0, sc.pos(j) - 1] = a[1, j]
    for k in range(2, n + 1):
        for l in range(k + 1, n + 1):
            v = abar[k, l]
            out[sc.pos(k) - 1, sc.pos(l) - 1] = v
            for j in range(1, sc.q):
                out[sc.alpha(k - 1, j) - 1, sc.alpha(l - 1, j) - 1] = v
    return UTMatrix._raw(p, out)


def psi_closed_form(n: int, p: int, s: int, a: UTMatrix) -> UTMatrix:
    """Image of ``a`` under :func:`psi_lc`: last column of ``a`` in column m,
    the B_n part copied onto the integer positions and each alpha-layer."""
    if a.n != n or a.p != p:
        raise ValueError(f"expected an element of UT_{n}(F_{p})")
    sc = IndexScheme(n, p**s)
    _, bbar = lc_b_decompose(a)
    out = np.eye(sc.m, dtype=np.int64)
    for i in range(1, n):
        out[sc.pos(i) - 1, sc.m - 1] = a[i, n]
    for k in range(1, n):
        for l in range(k + 1, n):
            v = bbar[k, l]
            out[sc.pos(k) - 1, sc.pos(l) - 1] = v
            for j in range(1, sc.q):
                out[sc.alpha(k, j) - 1, sc.alpha(l, j) - 1] = v
    return UTMatrix._raw(p, out)


# verification

@dataclass
class VerificationReport:
    """Named boolean checks plus a human-readable witness for each failure."""

    checks: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, passed: bool, witness: str | None = None) -> None:
        self.checks[name] = self.checks.get(name, True) and passed
        if not passed and witness is not None and name not in self.witnesses:
            self.witnesses[name] = witness

    def lines(self) -> list[str]:
        out = []
        for name, passed in self.checks.items():
            line = f"{name}: {'pass' if passed else 'FAIL'}"
            if not passed and name in self.witnesses:
                line += f" ({self.witnesses[name]})"
            out.append(line)
        return out

    def as_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "witnesses": dict(self.witnesses)}


def verify_embedding(images: GeneratorImages) -> VerificationReport:
    """Check the defining relations on induced images, the center criterion for
    injectivity, and that each generator image has order p."""
    rep = VerificationReport({"relations": True, "injective": True, "orders": True})
    n, m, p = images.source_n, images.target_m, images.p
    T = images.transvection_images
    e = identity(m, p)
    pairs = sorted(T)
    for (i, j) in pairs:
        if ut_pow(T[i, j], p) != e:
            rep.record("relations", False, f"T({i},{j})^{p} != e")
    for (i, j) in pairs:
        for (k, l) in pairs:
            c = commutator(T[i, j], T[k, l])
            if j == k:
                if c != T[i, l]:
                    rep.record("relations", False, f"[T({i},{j}), T({j},{l})] != T({i},{l})")
            elif i != l and not c.is_identity():
                rep.record("relations", False, f"[T({i},{j}), T({k},{l})] != e")
    if n >= 2 and T[1, n].is_identity():
        rep.record("injective", False, f"central element t_(1,{n}) maps to e")
    for i, g in enumerate(images.images, start=1):
        if element_order(g) != p:
            rep.record("orders", False, f"image of t_({i},{i + 1}) has order {element_order(g)}")
    return rep


def exhaustively_injective(images: GeneratorImages) -> bool:
    """Brute force: apply ``extend_hom`` to every element of UT_n and look for collisions."""
    seen = set()
    count = 0
    for a in iter_ut(images.source_n, images.p):
        seen.add(extend_hom(images, a))
        count += 1
    return len(seen) == count


def source_order(images: GeneratorImages) -> int:
    return group_order(images.source_n, images.p)


CONSTRUCTORS = {"fr": phi_fr, "lc": psi_lc, "theta": theta}
