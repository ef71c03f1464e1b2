"""The group UT_n(F_p) of upper unitriangular matrices.

Public indices are 1-based everywhere (``t(i, j)`` means the transvection
``e + e_{i,j}``); storage is a dense 0-based numpy array of residues.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .prime_field import FpElement, ModulusMismatch, check_prime


class MatrixFormatError(ValueError):
    """Malformed or non-unitriangular matrix input."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        if row is not None:
            message = f"row {row}, column {col}: {message}" if col is not None else f"row {row}: {message}"
        super().__init__(message)
        self.row = row
        self.col = col


class UTMatrix:
    """An n x n upper unitriangular matrix over F_p (immutable).

    Group product is ``a * b``, powers ``a ** k`` (negative k allowed).
    """

    __slots__ = ("p", "n", "_a", "_hash")

    def __init__(self, p: int, entries, *, check: bool = True):
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise MatrixFormatError(f"expected a square matrix, got shape {a.shape}")
        if check:
            check_prime(p)
            a %= p
            _check_unitriangular(a)
        a.setflags(write=False)
        self.p = p
        self.n = a.shape[0]
        self._a = a
        self._hash = None

    @classmethod
    def _raw(cls, p: int, a: np.ndarray) -> "UTMatrix":
        # trusted constructor for results of group operations
        obj = cls.__new__(cls)
        a.setflags(write=False)
        obj.p = p
        obj.n = a.shape[0]
        obj._a = a
        obj._hash = None
        return obj

    @classmethod
    def identity(cls, n: int, p: int) -> "UTMatrix":
        check_prime(p)
        return cls._raw(p, np.eye(n, dtype=np.int64))

    @classmethod
    def from_entries(cls, n: int, p: int, entries: dict[tuple[int, int], int]) -> "UTMatrix":
        """Identity plus the given 1-based off-diagonal ``{(i, j): value}``."""
        a = np.eye(n, dtype=np.int64)
        for (i, j), v in entries.items():
            if not 1 <= i < j <= n:
                raise IndexError(f"({i}, {j}) is not above the diagonal of a {n}x{n} matrix")
            a[i - 1, j - 1] = (a[i - 1, j - 1] + v) % p
        return cls(p, a)

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the residues."""
        return self._a

    def entry(self, i: int, j: int) -> FpElement:
        return FpElement(int(self._a[i - 1, j - 1]), self.p)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return int(self._a[i - 1, j - 1])

    def rows(self) -> list[list[int]]:
        return self._a.tolist()

    def is_identity(self) -> bool:
        return not np.any(np.triu(self._a, 1))

    def key(self) -> tuple:
        return (self.n, self.p, self._a.tobytes())

    def __eq__(self, other):
        if not isinstance(other, UTMatrix):
            return NotImplemented
        return self.p == other.p and self.n == other.n and np.array_equal(self._a, other._a)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __mul__(self, other: "UTMatrix") -> "UTMatrix":
        return ut_mul(self, other)

    def __pow__(self, k: int) -> "UTMatrix":
        if k < 0:
            return ut_pow(ut_inv(self), -k)
        return ut_pow(self, k)

    def __invert__(self) -> "UTMatrix":
        return ut_inv(self)

    def __repr__(self):
        return f"UTMatrix(p={self.p}, {self.rows()})"

    def __str__(self):
        return format_matrix(self)


def _check_unitriangular(a: np.ndarray) -> None:
    n = a.shape[0]
    for i in range(n):
        if a[i, i] != 1:
            raise MatrixFormatError(f"diagonal entry is {a[i, i]}, expected 1", i + 1, i + 1)
        for j in range(i):
            if a[i, j] != 0:
                raise MatrixFormatError(f"entry below the diagonal is {a[i, j]}, expected 0", i + 1, j + 1)


def _same_group(a: UTMatrix, b: UTMatrix) -> None:
    if a.p != b.p:
        raise ModulusMismatch(f"cannot combine matrices over F_{a.p} and F_{b.p}")
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")


def identity(n: int, p: int) -> UTMatrix:
    return UTMatrix.identity(n, p)


def transvection(n: int, p: int, i: int, j: int, gamma: int = 1) -> UTMatrix:
    """``t_{i,j}(gamma) = e + gamma e_{i,j}`` (1-based, i < j)."""
    if not 1 <= i < j <= n:
        raise IndexError(f"t_({i},{j}) is not defined in UT_{n}")
    a = np.eye(n, dtype=np.int64)
    a[i - 1, j - 1] = gamma % p
    return UTMatrix._raw(p, a)


def ut_mul(a: UTMatrix, b: UTMatrix) -> UTMatrix:
    _same_group(a, b)
    return UTMatrix._raw(a.p, (a._a @ b._a) % a.p)


def ut_product(factors: Iterable[UTMatrix], n: int | None = None, p: int | None = None) -> UTMatrix:
    """Left-to-right product; ``n`` and ``p`` are needed only for an empty sequence."""
    it = iter(factors)
    try:
        acc = next(it)
    except StopIteration:
        if n is None or p is None:
            raise ValueError("empty product needs n and p")
        return UTMatrix.identity(n, p)
    for f in it:
        acc = ut_mul(acc, f)
    return acc


def ut_inv(a: UTMatrix) -> UTMatrix:
    # (e + N)^{-1} = (e - N)(e + N^2)(e + N^4)... while N^(2^k) != 0
    p, n = a.p, a.n
    e = np.eye(n, dtype=np.int64)
    nil = (a._a - e) % p
    acc = (e - nil) % p
    sq = nil
    k = 2
    while k < n:
        sq = (sq @ sq) % p
        acc = (acc @ (e + sq)) % p
        k *= 2
    return UTMatrix._raw(p, acc)


def ut_pow(a: UTMatrix, k: int) -> UTMatrix:
    """``a^k`` by square-and-multiply, ``k >= 0``."""
    if k < 0:
        raise ValueError("negative exponent; use ut_inv first")
    p = a.p
    result = np.eye(a.n, dtype=np.int64)
    base = a._a
    while k:
        if k & 1:
            result = (result @ base) % p
        k >>= 1
        if k:
            base = (base @ base) % p
    return UTMatrix._raw(p, result)


def commutator(a: UTMatrix, b: UTMatrix) -> UTMatrix:
    """``[a, b] = a^-1 b^-1 a b``."""
    _same_group(a, b)
    p = a.p
    return UTMatrix._raw(p, (ut_inv(a)._a @ ut_inv(b)._a % p @ a._a % p @ b._a) % p)


def element_order(a: UTMatrix) -> int:
    order = 1
    while not a.is_identity():
        a = ut_pow(a, a.p)
        order *= a.p
    return order


@dataclass(frozen=True)
class TransvectionTerm:
    i: int
    j: int
    gamma: FpElement

    def __post_init__(self):
        if not 1 <= self.i < self.j:
            raise ValueError(f"need 1 <= i < j, got ({self.i}, {self.j})")
        if self.gamma.value == 0:
            raise ValueError("transvection terms carry a nonzero coefficient")

    def matrix(self, n: int) -> UTMatrix:
        return transvection(n, self.gamma.modulus, self.i, self.j, self.gamma.value)


def decompose_transvections(a: UTMatrix) -> list[TransvectionTerm]:
    """Write ``a`` as an ordered product of transvections.

    Terms come superdiagonal by superdiagonal (j - i = 1 first), each band in
    increasing i. Left-multiplying the residual by ``t_{i,j}(-g)`` clears
    entry (i, j) and only touches entries farther from the diagonal.
    """
    p, n = a.p, a.n
    r = a._a.copy()
    terms = []
    for d in range(1, n):
        for i in range(n - d):
            j = i + d
            g = int(r[i, j])
            if g:
                terms.append(TransvectionTerm(i + 1, j + 1, FpElement(g, p)))
                r[i, :] = (r[i, :] - g * r[j, :]) % p
    return terms


def recompose(terms: Sequence[TransvectionTerm], n: int, p: int) -> UTMatrix:
    return ut_product((t.matrix(n) for t in terms), n, p)


# structural subgroups FR_n, LC_n, A_n, B_n

def in_fr(a: UTMatrix) -> bool:
    """First-row subgroup: off-diagonal support only in row 1."""
    return not np.any(np.triu(a._a[1:, 1:], 1))


def in_lc(a: UTMatrix) -> bool:
    """Last-column subgroup: off-diagonal support only in column n."""
    return not np.any(np.triu(a._a[:-1, :-1], 1))


def in_a(a: UTMatrix) -> bool:
    return not np.any(a._a[0, 1:])


def in_b(a: UTMatrix) -> bool:
    return not np.any(a._a[:-1, -1])


def fr_a_decompose(a: UTMatrix) -> tuple[UTMatrix, UTMatrix]:
    """Split ``a = f * abar`` with ``f`` in FR_n and ``abar`` in A_n."""
    bar = a._a.copy()
    bar[0, 1:] = 0
    abar = UTMatrix._raw(a.p, bar)
    f = ut_mul(a, ut_inv(abar))
    return f, abar


def lc_b_decompose(a: UTMatrix) -> tuple[UTMatrix, UTMatrix]:
    """Split ``a = l * bbar`` with ``l`` in LC_n and ``bbar`` in B_n."""
    bar = a._a.copy()
    bar[:-1, -1] = 0
    bbar = UTMatrix._raw(a.p, bar)
    l = ut_mul(a, ut_inv(bbar))
    return l, bbar


# enumeration and sampling

def group_order(n: int, p: int) -> int:
    return p ** (n * (n - 1) // 2)


def iter_ut(n: int, p: int) -> Iterator[UTMatrix]:
    """Every element of UT_n(F_p), in lexicographic order of the strict upper triangle."""
    iu = np.triu_indices(n, 1)
    for values in itertools.product(range(p), repeat=len(iu[0])):
        a = np.eye(n, dtype=np.int64)
        a[iu] = values
        yield UTMatrix._raw(p, a)


def random_ut(n: int, p: int, rng: np.random.Generator) -> UTMatrix:
    a = np.eye(n, dtype=np.int64)
    iu = np.triu_indices(n, 1)
    a[iu] = rng.integers(0, p, size=len(iu[0]))
    return UTMatrix._raw(p, a)


# text format: "p n" then n rows of n integers

def format_matrix(a: UTMatrix) -> str:
    lines = [f"{a.p} {a.n}"]
    lines.extend(" ".join(str(int(v)) for v in row) for row in a._a)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> UTMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    return _parse_lines(lines)[0]


def parse_matrices(text: str) -> list[UTMatrix]:
    """Several matrices in the text format, one after another."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    out = []
    while lines:
        m, lines = _parse_lines(lines)
        out.append(m)
    return out


def _parse_lines(lines: list[str]) -> tuple[UTMatrix, list[str]]:
    if not lines:
        raise MatrixFormatError("empty input")
    header = lines[0].split()
    if len(header) != 2:
        raise MatrixFormatError(f"header must be 'p n', got {lines[0]!r}")
    try:
        p, n = int(header[0]), int(header[1])
    except ValueError:
        raise MatrixFormatError(f"header must hold two integers, got {lines[0]!r}") from None
    try:
        check_prime(p)
    except ValueError as exc:
        raise MatrixFormatError(str(exc)) from None
    if n < 1:
        raise MatrixFormatError(f"dimension must be positive, got {n}")
    if len(lines) < n + 1:
        raise MatrixFormatError(f"expected {n} rows, got {len(lines) - 1}", len(lines))
    rows = []
    for r, line in enumerate(lines[1 : n + 1], start=1):
        fields = line.split()
        if len(fields) != n:
            raise MatrixFormatError(f"expected {n} entries, got {len(fields)}", r)
        row = []
        for c, tok in enumerate(fields, start=1):
            try:
                v = int(tok)
            except ValueError:
                raise MatrixFormatError(f"not an integer: {tok!r}", r, c) from None
            if not 0 <= v < p:
                raise MatrixFormatError(f"entry {v} outside [0, {p})", r, c)
            row.append(v)
        rows.append(row)
    return UTMatrix(p, rows), lines[n + 1 :]
