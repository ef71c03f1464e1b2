"""The wreath product UT_n(F_p) wr C_q and its embedding into UT_m(F_p)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .embeddings import (
    GeneratorImages,
    IndexScheme,
    VerificationReport,
    alternating_row,
    extend_hom,
    phi_closed_form,
    phi_fr,
    verify_embedding,
)
from .unitriangular import (
    UTMatrix,
    commutator,
    element_order,
    identity,
    iter_ut,
    random_ut,
    transvection,
    ut_inv,
    ut_mul,
    ut_pow,
    ut_product,
)


@dataclass(frozen=True)
class WreathElement:
    """``c^shift (f[0], ..., f[q-1])`` where ``f[i]`` is the coordinate at ``c^i``."""

    shift: int
    f: tuple[UTMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(self.f))
        q = len(self.f)
        if q < 1:
            raise ValueError("empty base tuple")
        if not 0 <= self.shift < q:
            raise ValueError(f"shift {self.shift} outside [0, {q})")
        n, p = self.f[0].n, self.f[0].p
        if any(h.n != n or h.p != p for h in self.f):
            raise ValueError("base coordinates must share n and p")

    @property
    def q(self) -> int:
        return len(self.f)

    @property
    def n(self) -> int:
        return self.f[0].n

    @property
    def p(self) -> int:
        return self.f[0].p

    def key(self) -> tuple:
        return (self.n, self.shift, b"".join(h.array.tobytes() for h in self.f))

    def __mul__(self, other: "WreathElement") -> "WreathElement":
        return wr_mul(self, other)

    def __invert__(self) -> "WreathElement":
        return wr_inv(self)


def wr_identity(n: int, p: int, q: int) -> WreathElement:
    e = identity(n, p)
    return WreathElement(0, (e,) * q)


def _shifted(f: Sequence[UTMatrix], k: int) -> tuple[UTMatrix, ...]:
    # right cyclic shift by k: result[i] = f[i - k]
    q = len(f)
    k %= q
    return tuple(f[(i - k) % q] for i in range(q))


def wr_mul(x: WreathElement, y: WreathElement) -> WreathElement:
    """``s f * s' f' = s s' f^{s'} f'`` with ``f^{s'}`` the right shift of f by s'."""
    if x.q != y.q or x.n != y.n or x.p != y.p:
        raise ValueError("wreath elements from different groups")
    fx = _shifted(x.f, y.shift)
    return WreathElement((x.shift + y.shift) % x.q, tuple(ut_mul(a, b) for a, b in zip(fx, y.f)))


def wr_inv(x: WreathElement) -> WreathElement:
    # (s f)^-1 = s^-1 (f^-1)^{s^-1}
    k = (-x.shift) % x.q
    return WreathElement(k, _shifted(tuple(ut_inv(h) for h in x.f), k))


def wr_pow(x: WreathElement, k: int) -> WreathElement:
    acc = wr_identity(x.n, x.p, x.q)
    for _ in range(k):
        acc = wr_mul(acc, x)
    return acc


def rho_diagonal(a: UTMatrix, q: int) -> WreathElement:
    return WreathElement(0, (a,) * q)


def top_generator(n: int, p: int, q: int) -> WreathElement:
    return WreathElement(1 % q, (identity(n, p),) * q)


def wreath_generators(n: int, p: int, q: int) -> list[WreathElement]:
    """The top generator and ``t_{k,k+1}`` placed in coordinate 0."""
    e = identity(n, p)
    gens = [top_generator(n, p, q)]
    for k in range(1, n):
        gens.append(WreathElement(0, (transvection(n, p, k, k + 1),) + (e,) * (q - 1)))
    return gens


def wreath_order(n: int, p: int, q: int) -> int:
    return p ** (n * (n - 1) // 2 * q) * q


def iter_wreath(n: int, p: int, q: int) -> Iterator[WreathElement]:
    base = list(iter_ut(n, p))
    for k in range(q):
        for f in itertools.product(base, repeat=q):
            yield WreathElement(k, f)


def random_wreath(n: int, p: int, q: int, rng: np.random.Generator) -> WreathElement:
    return WreathElement(int(rng.integers(0, q)), tuple(random_ut(n, p, rng) for _ in range(q)))


# embedding into UT_m

@dataclass(frozen=True)
class WreathEmbeddingData:
    n: int
    p: int
    s: int
    q: int
    m: int
    c: UTMatrix
    g: tuple[tuple[UTMatrix, ...], ...]  # g[i-1][k-1] = g_{i,k}
    z: tuple[UTMatrix, ...]

    @property
    def scheme(self) -> IndexScheme:
        return IndexScheme(self.n, self.q)

    @cached_property
    def families(self) -> tuple[GeneratorImages, ...]:
        """Generator images of the copies G_1, ..., G_q."""
        return tuple(GeneratorImages(self.n, self.m, self.p, row, f"G_{i}")
                     for i, row in enumerate(self.g, start=1))

    @cached_property
    def c_powers(self) -> tuple[UTMatrix, ...]:
        out = [identity(self.m, self.p)]
        for _ in range(1, self.q):
            out.append(ut_mul(out[-1], self.c))
        return tuple(out)

    def replace(self, **changes) -> "WreathEmbeddingData":
        fields = dict(n=self.n, p=self.p, s=self.s, q=self.q, m=self.m,
                      c=self.c, g=self.g, z=self.z)
        fields.update(changes)
        return WreathEmbeddingData(**fields)


def chain_matrix(m: int, p: int, chain: Sequence[int]) -> UTMatrix:
    """``e + e_{c0,c1} + e_{c1,c2} + ...`` along the given positions."""
    return UTMatrix.from_entries(m, p, {(u, v): 1 for u, v in zip(chain, chain[1:])})


def build_wreath_embedding(n: int, p: int, s: int) -> WreathEmbeddingData:
    if n < 2 or s < 1:
        raise ValueError("need n >= 2 and s >= 1")
    q = p**s
    sc = IndexScheme(n, q)
    m = sc.m
    cs = [chain_matrix(m, p, [sc.alpha(i, j) for j in range(1, q)] + [sc.pos(i + 1)])
          for i in range(1, n)]
    c = ut_product(cs)
    cinv = ut_inv(c)
    h = tuple(alternating_row(m, p, sc.pos(k), [sc.alpha(k, j) for j in range(1, q)] + [sc.pos(k + 1)])
              for k in range(1, n))
    g = [h]
    for _ in range(1, q):
        g.append(tuple(ut_mul(ut_mul(cinv, x), c) for x in g[-1]))
    z1 = alternating_row(m, p, 1, [sc.alpha(n - 1, j) for j in range(1, q)] + [sc.pos(n)])
    z = [z1]
    for _ in range(1, q):
        z.append(ut_mul(ut_mul(cinv, z[-1]), c))
    return WreathEmbeddingData(n, p, s, q, m, c, tuple(g), tuple(z))


def tau(data: WreathEmbeddingData, w: WreathElement) -> UTMatrix:
    """``c^k phi_1(h_1) ... phi_q(h_q)`` for ``w = c^k (h_1, ..., h_q)``."""
    if w.q != data.q or w.n != data.n or w.p != data.p:
        raise ValueError("wreath element does not match the embedding parameters")
    acc = data.c_powers[w.shift]
    for fam, h in zip(data.families, w.f):
        acc = ut_mul(acc, extend_hom(fam, h))
    return acc


def verify_wreath_conditions(data: WreathEmbeddingData) -> VerificationReport:
    """Conditions 1-4 for the copies G_i: conjugation chain, G_i iso UT_n,
    elementwise commuting, trivially intersecting (via their centres)."""
    rep = VerificationReport({"conjugation": True, "isomorphic": True,
                              "commuting": True, "disjoint": True})
    n, p, q = data.n, data.p, data.q
    c, cinv = data.c, ut_inv(data.c)

    order = element_order(c)
    if order != q:
        rep.record("conjugation", False, f"c has order {order}, expected {q}")
    for i in range(q - 1):
        for k in range(n - 1):
            if ut_mul(ut_mul(cinv, data.g[i][k]), c) != data.g[i + 1][k]:
                rep.record("conjugation", False,
                           f"g_({i + 2},{k + 1}) != c^-1 g_({i + 1},{k + 1}) c")

    for i, fam in enumerate(data.families, start=1):
        sub = verify_embedding(fam)
        if not sub.ok:
            bad = "; ".join(f"{k}: {v}" for k, v in sub.witnesses.items())
            rep.record("isomorphic", False, f"G_{i}: {bad}")

    for i in range(q):
        for l in range(q):
            if i == l:
                continue
            for k in range(n - 1):
                for j in range(n - 1):
                    if not commutator(data.g[i][k], data.g[l][j]).is_identity():
                        rep.record("commuting", False,
                                   f"[g_({i + 1},{k + 1}), g_({l + 1},{j + 1})] != e")

    centres = [fam.transvection_images[1, n] for fam in data.families]
    for l, (zc, zs) in enumerate(zip(centres, data.z), start=1):
        if zc != zs:
            rep.record("disjoint", False, f"z_{l} is not the image of t_(1,{n}) in G_{l}")
    seen: dict[UTMatrix, tuple[int, int]] = {}
    for l, zc in enumerate(centres, start=1):
        acc = zc
        for t in range(1, p):
            if acc.is_identity():
                rep.record("disjoint", False, f"z_{l}^{t} = e")
                break
            if acc in seen:
                l0, t0 = seen[acc]
                rep.record("disjoint", False, f"z_{l}^{t} = z_{l0}^{t0}: centres of G_{l0} and G_{l} meet")
                break
            seen[acc] = (l, t)
            acc = ut_mul(acc, zc)
    return rep


# matrices attached to the blocks I_k x I_{k+1}

@dataclass(frozen=True)
class LemmaMatrices:
    p: int
    q: int
    A: np.ndarray
    B: np.ndarray
    M: tuple[np.ndarray, ...]
    v: np.ndarray


def _mat_inv_unitri(a: np.ndarray, p: int) -> np.ndarray:
    return ut_inv(UTMatrix(p, a)).array


def alternating_vector(q: int, p: int) -> np.ndarray:
    return np.array([(-1) ** i for i in range(q)], dtype=np.int64) % p


def jordan_block(q: int, p: int) -> np.ndarray:
    return (np.eye(q, dtype=np.int64) + np.eye(q, k=1, dtype=np.int64)) % p


def lemma_matrices(p: int, s: int, B: np.ndarray | None = None) -> LemmaMatrices:
    """``A`` (Jordan block), ``B`` (last row alternating) and ``M_i = A^-i B A^i``.

    Passing ``B`` overrides the default, for negative controls.
    """
    q = p**s
    A = jordan_block(q, p)
    v = alternating_vector(q, p)
    if B is None:
        B = np.zeros((q, q), dtype=np.int64)
        B[-1, :] = v
    B = np.asarray(B, dtype=np.int64) % p
    Ainv = _mat_inv_unitri(A, p)
    M = [B]
    for _ in range(1, q):
        M.append(Ainv @ M[-1] @ A % p)
    return LemmaMatrices(p, q, A, B, tuple(M), v)


def _columns_are_multiples(M: np.ndarray, p: int) -> bool:
    first = M[:, 0]
    nz = np.flatnonzero(first)
    if len(nz) == 0:
        return not np.any(M)
    r = nz[0]
    inv = pow(int(first[r]), p - 2, p)
    for j in range(1, M.shape[1]):
        lam = int(M[r, j]) * inv % p
        if np.any((M[:, j] - lam * first) % p):
            return False
    return True


def check_lemma42(lm: LemmaMatrices) -> VerificationReport:
    """Evaluate the three identities and the column structure of each M_i."""
    p, q, A, v = lm.p, lm.q, lm.A, lm.v
    rep = VerificationReport({"annihilate": True, "power_sum": True,
                              "sum_is_identity": True, "column_multiples": True})
    for i in range(1, q):
        row = v @ lm.M[i] % p
        if np.any(row):
            rep.record("annihilate", False, f"v M_{i} = {row.tolist()}")
    acc = np.zeros(q, dtype=np.int64)
    Ai = np.eye(q, dtype=np.int64)
    for _ in range(q):
        acc = (acc + v @ Ai) % p
        Ai = Ai @ A % p
    target = np.zeros(q, dtype=np.int64)
    target[-1] = 1
    if not np.array_equal(acc, target):
        rep.record("power_sum", False, f"sum v A^i = {acc.tolist()}")
    total = sum(lm.M) % p
    if not np.array_equal(total, np.eye(q, dtype=np.int64)):
        bad = np.argwhere(total != np.eye(q, dtype=np.int64))[0]
        rep.record("sum_is_identity", False,
                   f"sum M_i differs from E at ({bad[0] + 1}, {bad[1] + 1})")
    for i, M in enumerate(lm.M):
        if not _columns_are_multiples(M, p):
            rep.record("column_multiples", False, f"M_{i} has a column independent of the first")
    return rep


def lemma42(p: int, s: int) -> tuple[LemmaMatrices, VerificationReport]:
    """Build the block-matrix lemma data for q = p^s and check it."""
    lm = lemma_matrices(p, s)
    return lm, check_lemma42(lm)


def block_matrix(h: UTMatrix, scheme: IndexScheme, k: int) -> np.ndarray:
    """The coefficient matrix of ``h`` on rows I_k and columns I_{k+1}."""
    rows = [r - 1 for r in scheme.block(k)]
    cols = [c - 1 for c in scheme.block(k + 1)]
    return h.array[np.ix_(rows, cols)].copy()


def from_block_matrix(M: np.ndarray, scheme: IndexScheme, k: int, p: int) -> UTMatrix:
    """``e`` plus ``M`` written on rows I_k and columns I_{k+1}."""
    a = np.eye(scheme.m, dtype=np.int64)
    rows = [r - 1 for r in scheme.block(k)]
    cols = [c - 1 for c in scheme.block(k + 1)]
    a[np.ix_(rows, cols)] = np.asarray(M) % p
    return UTMatrix._raw(p, a)


def supported_on_block(h: UTMatrix, scheme: IndexScheme, k: int) -> bool:
    return h == from_block_matrix(block_matrix(h, scheme, k), scheme, k, h.p)


def diagonal_block_matrices(data: WreathEmbeddingData) -> list[np.ndarray]:
    """``M(f_k)`` for ``f_k = g_{1,k} ... g_{q,k}``, the image of the diagonal ``t_{k,k+1}``."""
    sc = data.scheme
    out = []
    for k in range(1, data.n):
        fk = ut_product(data.g[l][k - 1] for l in range(data.q))
        if not supported_on_block(fk, sc, k):
            raise AssertionError(f"f_{k} leaves the block I_{k} x I_{k + 1}")
        out.append(block_matrix(fk, sc, k))
    return out


def equiv_check(n: int, p: int, s: int, samples: int = 200, seed: int = 0,
                data: WreathEmbeddingData | None = None) -> VerificationReport:
    """Compare ``tau(rho(a))`` with the first-row embedding of ``a``."""
    data = data or build_wreath_embedding(n, p, s)
    phi = phi_fr(n, p, s)
    q = data.q
    rep = VerificationReport({"generators": True, "random": True})
    for k in range(1, n):
        t = transvection(n, p, k, k + 1)
        if tau(data, rho_diagonal(t, q)) != phi.image(k):
            rep.record("generators", False, f"tau(rho(t_({k},{k + 1}))) != phi(t_({k},{k + 1}))")
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        a = random_ut(n, p, rng)
        if tau(data, rho_diagonal(a, q)) != phi_closed_form(n, p, s, a):
            rep.record("random", False, f"tau(rho(a)) != phi(a) for a = {a.rows()}")
    return rep
