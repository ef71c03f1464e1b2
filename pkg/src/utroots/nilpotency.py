"""Lower central series, K_p-series and the nilpotency class of UT_n(F_p) wr C_q.

Groups are handled as explicit element sets: callers supply ``mul`` and ``inv``
and elements are deduplicated by :func:`canonical_key`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Sequence

from .unitriangular import UTMatrix, identity, transvection, ut_inv, ut_mul
from .wreath import WreathElement, wr_identity, wr_inv, wr_mul, wreath_generators, wreath_order

DEFAULT_SIZE_BOUND = 10**6
SIZE_BOUND_ENV = "UTROOTS_SIZE_BOUND"


class SizeLimit(RuntimeError):
    """A closure grew past the configured element bound."""


def default_size_bound() -> int:
    raw = os.environ.get(SIZE_BOUND_ENV)
    return int(raw) if raw else DEFAULT_SIZE_BOUND


def canonical_key(x: Any) -> Hashable:
    """(dimension, shift, row-major entries) for matrices and wreath elements."""
    if isinstance(x, UTMatrix):
        return (x.n, 0, x.array.tobytes())
    if isinstance(x, WreathElement):
        return x.key()
    return x


@dataclass
class SubgroupSet:
    elements: dict[Hashable, Any]
    generators: tuple
    mul: Callable[[Any, Any], Any] = field(repr=False)
    inv: Callable[[Any], Any] = field(repr=False)
    identity: Any = field(repr=False, default=None)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return canonical_key(x) in self.elements

    def __iter__(self):
        return iter(self.elements.values())

    @property
    def is_trivial(self) -> bool:
        return len(self.elements) == 1


def _grow(elements: dict, gens: list, new_gen, mul, bound: int) -> None:
    # extend a closed set by one generator, in place
    gens.append(new_gen)
    frontier = []
    for x in list(elements.values()):
        y = mul(x, new_gen)
        k = canonical_key(y)
        if k not in elements:
            elements[k] = y
            frontier.append(y)
    while frontier:
        if len(elements) > bound:
            raise SizeLimit(f"subgroup exceeds {bound} elements")
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                k = canonical_key(y)
                if k not in elements:
                    elements[k] = y
                    nxt.append(y)
        frontier = nxt
    if len(elements) > bound:
        raise SizeLimit(f"subgroup exceeds {bound} elements")


def subgroup_closure(gens: Iterable, mul, inv, identity=None, bound: int | None = None) -> SubgroupSet:
    """Smallest subgroup containing ``gens`` (breadth-first; finite groups only).

    Generators that already lie in the running subgroup are dropped, so the
    stored generating set stays short.
    """
    bound = default_size_bound() if bound is None else bound
    gens = list(gens)
    if identity is None:
        if not gens:
            raise ValueError("need an identity element for an empty generating set")
        identity = mul(gens[0], inv(gens[0]))
    elements = {canonical_key(identity): identity}
    used: list = []
    for g in gens:
        if canonical_key(g) not in elements:
            _grow(elements, used, g, mul, bound)
    return SubgroupSet(elements, tuple(used), mul, inv, identity)


def _group_commutator(x, y, mul, inv):
    return mul(mul(inv(x), inv(y)), mul(x, y))


def commutator_subgroup(H: SubgroupSet, G: SubgroupSet, bound: int | None = None) -> SubgroupSet:
    """``[H, G]`` generated by ``[x, g]`` over all x in H and generators g of G."""
    mul, inv = G.mul, G.inv
    cands = (_group_commutator(x, g, mul, inv) for x in H for g in G.generators)
    return subgroup_closure(cands, mul, inv, G.identity, bound)


def lower_central_series(G: SubgroupSet, bound: int | None = None) -> tuple[list[SubgroupSet], int]:
    """``gamma_1 = G, gamma_{k+1} = [gamma_k, G]`` down to the trivial group.

    Returns the nontrivial terms followed by the trivial one, and the class
    (number of nontrivial terms).
    """
    series = [G]
    while not series[-1].is_trivial:
        nxt = commutator_subgroup(series[-1], G, bound)
        if len(nxt) == len(series[-1]):
            raise ValueError("lower central series stalls; the group is not nilpotent")
        series.append(nxt)
    return series, len(series) - 1


def group_power(x, e: int, mul, identity):
    acc, base = identity, x
    while e:
        if e & 1:
            acc = mul(acc, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return acc


def kp_series(G: SubgroupSet, p: int, bound: int | None = None,
              lcs: Sequence[SubgroupSet] | None = None) -> list[SubgroupSet]:
    """``K_i = prod_{n p^j >= i} gamma_n^{p^j}`` for i = 1, 2, ... until trivial.

    For each n only the least admissible j matters, since larger powers lie
    in the subgroup it generates. The trivial term closes the list.
    """
    if lcs is None:
        lcs, _ = lower_central_series(G, bound)
    gammas = [H for H in lcs if not H.is_trivial]
    mul, inv, e = G.mul, G.inv, G.identity
    series = []
    i = 1
    while True:
        cands = []
        for n, H in enumerate(gammas, start=1):
            j = 0
            while n * p**j < i:
                j += 1
            cands.extend(group_power(x, p**j, mul, e) for x in H)
        K = subgroup_closure(cands, mul, inv, e, bound)
        series.append(K)
        if K.is_trivial:
            return series
        i += 1


def exponent(G: SubgroupSet) -> int:
    """Largest element order (the exponent, for a p-group)."""
    best = 1
    e_key = canonical_key(G.identity)
    for x in G:
        k, y = 1, x
        while canonical_key(y) != e_key:
            y = G.mul(y, x)
            k += 1
        best = max(best, k)
    return best


# Shield's formula

@dataclass(frozen=True)
class ShieldData:
    p: int
    d: int
    e: tuple[int, ...]
    a: int
    b: int
    s: tuple[int, ...] = ()


def _shield_ab(p: int, e: Sequence[int]) -> tuple[int, int]:
    d = len(e)
    a = 1 + (p - 1) * sum(v * ev for v, ev in enumerate(e, start=1))
    return a, (p - 1) * d


def shield_data_from_series(series: Sequence[SubgroupSet], p: int) -> ShieldData:
    """``d``, ``e(v)``, ``a`` and ``b`` read off a computed K_p-series (trivial term last)."""
    sizes = [len(K) for K in series]
    d = next(i for i, sz in enumerate(sizes) if sz == 1)
    e = []
    for v in range(d):
        ratio = sizes[v] // sizes[v + 1]
        ev = round(math.log(ratio, p)) if ratio > 1 else 0
        if p**ev != ratio:
            raise ValueError(f"|K_{v + 1}/K_{v + 2}| = {ratio} is not a power of {p}")
        e.append(ev)
    a, b = _shield_ab(p, e)
    return ShieldData(p, d, tuple(e), a, b)


def shield_data_cyclic(p: int, s: int) -> ShieldData:
    """Data for C_{p^s}: ``e(v) = 1`` exactly at ``v = 1, p, ..., p^(s-1)``."""
    if s < 1:
        raise ValueError(f"need s >= 1, got {s}")
    d = p ** (s - 1)
    drops = {p**k for k in range(s)}
    e = tuple(1 if v in drops else 0 for v in range(1, d + 1))
    a, b = _shield_ab(p, e)
    return ShieldData(p, d, e, a, b)


def ut_gamma_exponent_log(n: int, p: int, w: int) -> int:
    """``s(w)`` with ``p^s(w)`` the exponent of gamma_w(UT_n(F_p)).

    gamma_w is ``e + N`` with N on superdiagonals >= w, so ``N^t = 0`` once
    ``t w >= n``; the exponent is the least power of p above ``(n-1) // w``.
    """
    if not 1 <= w <= n - 1:
        raise ValueError(f"w={w} outside 1..{n - 1}")
    bound = (n - 1) // w + 1
    k = 0
    while p**k < bound:
        k += 1
    return k


def shield_class(a: int, b: int, s_sequence: Sequence[int]) -> int:
    if not s_sequence:
        raise ValueError("empty s(w) sequence")
    return max(a * w + (sw - 1) * b for w, sw in enumerate(s_sequence, start=1))


# concrete groups

def ut_group(n: int, p: int, bound: int | None = None) -> SubgroupSet:
    gens = [transvection(n, p, k, k + 1) for k in range(1, n)]
    return subgroup_closure(gens, ut_mul, ut_inv, identity(n, p), bound)


def wreath_group(n: int, p: int, q: int, bound: int | None = None) -> SubgroupSet:
    return subgroup_closure(wreath_generators(n, p, q), wr_mul, wr_inv, wr_identity(n, p, q), bound)


def cyclic_group(p: int, s: int) -> SubgroupSet:
    """C_{p^s} realised as the Jordan block in UT_{p^s}(F_p)."""
    q = p**s
    j = UTMatrix.from_entries(q, p, {(i, i + 1): 1 for i in range(1, q)})
    return subgroup_closure([j], ut_mul, ut_inv, identity(q, p))


@dataclass
class ClassReport:
    n: int
    p: int
    s: int
    formula: int
    shield: int
    brute: int | None
    skipped: str | None = None

    @property
    def agree(self) -> bool:
        vals = {self.formula, self.shield}
        if self.brute is not None:
            vals.add(self.brute)
        return len(vals) == 1

    def line(self) -> str:
        brute = str(self.brute) if self.brute is not None else "skipped"
        return f"{self.formula} = {self.shield} = {brute}"


def wreath_class_check(n: int, p: int, s: int, bound: int | None = None) -> ClassReport:
    """Nilpotency class of UT_n(F_p) wr C_{p^s} three ways: ``q(n-1)``, Shield's
    formula, and the lower central series of the explicit group."""
    bound = default_size_bound() if bound is None else bound
    q = p**s
    data = shield_data_cyclic(p, s)
    s_seq = [ut_gamma_exponent_log(n, p, w) for w in range(1, n)]
    rep = ClassReport(n, p, s, q * (n - 1), shield_class(data.a, data.b, s_seq), None)
    size = wreath_order(n, p, q)
    if size > bound:
        rep.skipped = f"group has {size} elements, bound is {bound}"
        return rep
    G = wreath_group(n, p, q, bound)
    _, rep.brute = lower_central_series(G, bound)
    return rep
